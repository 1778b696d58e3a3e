"""Budget- and safety-constrained dose-finding bandit simulator."""

try:
    from ._c3t import *  # noqa: F401,F403  (installed package layout)
    from . import _c3t as _impl
except ImportError:  # build-tree layout: extension on PYTHONPATH
    from _c3t import *  # noqa: F401,F403
    import _c3t as _impl

__all__ = [name for name in dir(_impl) if not name.startswith("_")]
__version__ = "0.1.0"
