#include "c3t/dose_tox.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace c3t {

std::vector<double> skeleton_to_levels(const std::vector<double>& p0) {
    std::vector<double> u(p0.size());
    for (std::size_t k = 0; k < p0.size(); ++k) {
        if (!(p0[k] > 0.0 && p0[k] < 1.0))
            throw std::invalid_argument("skeleton entries must be in (0,1)");
        if (k > 0 && p0[k] <= p0[k - 1])
            throw std::invalid_argument("skeleton must be strictly increasing");
        u[k] = std::atanh(2.0 * p0[k] - 1.0);
    }
    return u;
}

double toxicity_at(double level, double a) {
    if (!(a > 0.0)) throw std::invalid_argument("toxicity parameter must be > 0");
    double base = (std::tanh(level) + 1.0) / 2.0;
    return std::pow(base, a);
}

double fit_parameter(double level, double observed_mean, double a_min, double a_max) {
    if (observed_mean <= 0.0) return a_max;
    if (observed_mean >= 1.0) return a_min;
    double base = (std::tanh(level) + 1.0) / 2.0;
    double a = std::log(observed_mean) / std::log(base);
    return std::clamp(a, a_min, a_max);
}

double aggregate_parameter(const std::vector<double>& fits, const std::vector<long long>& counts) {
    if (fits.size() != counts.size())
        throw std::invalid_argument("aggregate_parameter: size mismatch");
    long long total = 0;
    double weighted = 0.0;
    for (std::size_t k = 0; k < fits.size(); ++k) {
        total += counts[k];
        weighted += fits[k] * static_cast<double>(counts[k]);
    }
    if (total <= 0) throw std::invalid_argument("aggregate_parameter: no allocations");
    return weighted / static_cast<double>(total);
}

double confidence_radius(long long n_arrivals, double delta, double radius_const,
                         double radius_exponent, int num_doses) {
    if (n_arrivals < 1) throw std::invalid_argument("confidence_radius: N must be >= 1");
    double arg = std::log(2.0 * num_doses / delta);
    if (arg < 0.0) throw std::invalid_argument("confidence_radius: delta must be < 2K");
    double inner = arg / (2.0 * static_cast<double>(n_arrivals));
    return radius_const * num_doses * std::pow(inner, radius_exponent / 2.0);
}

} // namespace c3t
