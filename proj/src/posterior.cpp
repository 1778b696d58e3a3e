#include "c3t/posterior.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace c3t {

BetaPosterior update(const BetaPosterior& post, bool outcome) {
    BetaPosterior next = post;
    if (outcome)
        next.alpha += 1.0;
    else
        next.beta += 1.0;
    return next;
}

namespace {

double log_beta(double a, double b) { return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b); }

// Continued fraction for the incomplete beta (modified Lentz).
double beta_cf(double x, double a, double b) {
    constexpr int kMaxIter = 300;
    constexpr double kEps = 1e-15;
    constexpr double kTiny = 1e-300;

    double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) break;
    }
    return h;
}

double log_pdf(double x, double a, double b) {
    return (a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x) - log_beta(a, b);
}

} // namespace

double beta_cdf(double x, double a, double b) {
    if (!(a > 0.0 && b > 0.0)) throw std::invalid_argument("beta_cdf: parameters must be > 0");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    double ln_front = a * std::log(x) + b * std::log1p(-x) - log_beta(a, b);
    if (x < (a + 1.0) / (a + b + 2.0))
        return std::exp(ln_front) * beta_cf(x, a, b) / a;
    return 1.0 - std::exp(b * std::log1p(-x) + a * std::log(x) - log_beta(a, b)) *
                     beta_cf(1.0 - x, b, a) / b;
}

double beta_quantile(double prob, double a, double b) {
    if (!(prob > 0.0 && prob < 1.0)) throw std::invalid_argument("beta_quantile: prob must be in (0,1)");
    if (!(a >= 1.0 && b >= 1.0)) throw std::invalid_argument("beta_quantile: parameters must be >= 1");

    double lo = 0.0, hi = 1.0;
    double x = a / (a + b); // mean start
    for (int it = 0; it < 200; ++it) {
        double f = beta_cdf(x, a, b) - prob;
        if (f > 0.0)
            hi = x;
        else
            lo = x;
        if (std::abs(f) < 1e-15) break;
        double step = f / std::exp(log_pdf(x, a, b)); // Newton
        double next = x - step;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi); // safeguard: bisect
        if (std::abs(next - x) < 1e-14 && std::abs(f) < 1e-10) {
            x = next;
            break;
        }
        x = next;
        if (hi - lo < 1e-14) break;
    }
    return x;
}

double interval_width(double phi, double a, double b) {
    if (!(phi > 0.0 && phi < 1.0)) throw std::invalid_argument("interval_width: phi must be in (0,1)");
    double tail = (1.0 - phi) / 2.0;
    return beta_quantile(1.0 - tail, a, b) - beta_quantile(tail, a, b);
}

double expected_improvement(double q_bar, const BetaPosterior& post, double phi) {
    double f0 = interval_width(phi, post.alpha, post.beta);
    double f_succ = interval_width(phi, post.alpha + 1.0, post.beta);
    double f_fail = interval_width(phi, post.alpha, post.beta + 1.0);
    return q_bar * (f0 - f_succ) + (1.0 - q_bar) * (f0 - f_fail);
}

double sample(const BetaPosterior& post, std::mt19937_64& rng) {
    std::gamma_distribution<double> ga(post.alpha, 1.0);
    std::gamma_distribution<double> gb(post.beta, 1.0);
    double x = ga(rng);
    double y = gb(rng);
    return x / (x + y);
}

} // namespace c3t
