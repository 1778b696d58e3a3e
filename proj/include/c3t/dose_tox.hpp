#ifndef C3T_DOSE_TOX_HPP
#define C3T_DOSE_TOX_HPP

#include <vector>

namespace c3t {

// One-parameter skeleton model p(u, a) = ((tanh u + 1)/2)^a.
// Strictly increasing in u, strictly decreasing in a (for a > 0).
struct SkeletonModel {
    std::vector<double> levels; // u_k, strictly increasing
    double a_min = 0.05;
    double a_max = 20.0;
};

// Inverts the skeleton so that p(u_k, 1) = p0_k: u_k = atanh(2 p0_k - 1).
// Requires p0 strictly increasing with entries in (0,1).
std::vector<double> skeleton_to_levels(const std::vector<double>& p0);

// Toxicity probability at level u with parameter a > 0.
double toxicity_at(double level, double a);

// Closed-form argmin_a |p(u,a) - observed_mean| on [a_min, a_max]:
// a = ln(mean)/ln(base), clamped. mean 0 -> a_max, mean 1 -> a_min.
double fit_parameter(double level, double observed_mean, double a_min, double a_max);

// Allocation-count-weighted mean of per-dose fits. Requires at least one
// positive count.
double aggregate_parameter(const std::vector<double>& fits, const std::vector<long long>& counts);

// alpha_s(t) = C * K * (log(2K/delta) / (2 N))^(gamma/2). Requires N >= 1.
double confidence_radius(long long n_arrivals, double delta, double radius_const,
                         double radius_exponent, int num_doses);

} // namespace c3t

#endif
