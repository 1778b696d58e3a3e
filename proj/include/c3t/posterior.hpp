#ifndef C3T_POSTERIOR_HPP
#define C3T_POSTERIOR_HPP

#include <random>

namespace c3t {

// Beta-Bernoulli posterior starting from the uniform prior Beta(1,1).
struct BetaPosterior {
    double alpha = 1.0;
    double beta = 1.0;

    double mean() const { return alpha / (alpha + beta); }
};

// Absorbs one Bernoulli observation.
BetaPosterior update(const BetaPosterior& post, bool outcome);

// Regularized incomplete beta function I_x(a, b) (the Beta(a,b) CDF).
double beta_cdf(double x, double a, double b);

// Inverse CDF, absolute error <= 1e-8 on the supported parameter range.
// Requires prob in (0,1) and a, b >= 1.
double beta_quantile(double prob, double a, double b);

// Equal-tailed credible-interval width at coverage phi in (0,1):
// Q(1-(1-phi)/2) - Q((1-phi)/2).
double interval_width(double phi, double a, double b);

// Expected shrink of the interval from one more observation, success
// probability weighted by q_bar.
double expected_improvement(double q_bar, const BetaPosterior& post, double phi);

// One draw from Beta(alpha, beta) via two gamma variates.
double sample(const BetaPosterior& post, std::mt19937_64& rng);

} // namespace c3t

#endif
