#include "c3t/policy.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace c3t {

TrialSettings settings_of(const Scenario& sc) {
    TrialSettings st;
    st.num_subgroups = sc.num_subgroups;
    st.num_doses = sc.num_doses;
    st.mtd_threshold = sc.mtd_threshold;
    st.efficacy_threshold = sc.efficacy_threshold;
    st.arrival = sc.arrival;
    st.safety_confidence = sc.safety_confidence;
    st.cost = sc.cost;
    st.skeleton = sc.skeleton;
    st.budget = sc.budget;
    st.horizon = sc.horizon;
    return st;
}

void ObservationTable::reset(int subgroups, int doses) {
    arrivals.assign(subgroups, 0);
    allocated.assign(subgroups, std::vector<long long>(doses, 0));
    eff_sum.assign(subgroups, std::vector<long long>(doses, 0));
    tox_sum.assign(subgroups, std::vector<long long>(doses, 0));
}

double ObservationTable::q_bar(int s, int k) const {
    long long n = allocated[s][k];
    return n > 0 ? static_cast<double>(eff_sum[s][k]) / static_cast<double>(n) : 0.0;
}

double ObservationTable::p_bar(int s, int k) const {
    long long n = allocated[s][k];
    return n > 0 ? static_cast<double>(tox_sum[s][k]) / static_cast<double>(n) : 0.0;
}

long long ObservationTable::allocated_total(int s) const {
    long long total = 0;
    for (long long n : allocated[s]) total += n;
    return total;
}

double ucb_index(double q_bar, long long n_arrivals, long long n_allocated, double exploration_c) {
    if (n_allocated == 0) return std::numeric_limits<double>::infinity();
    if (n_arrivals < 1) throw std::invalid_argument("ucb_index: N_s must be >= 1");
    double bonus = std::sqrt(exploration_c * std::log(static_cast<double>(n_arrivals)) /
                             static_cast<double>(n_allocated));
    return q_bar + bonus;
}

namespace {

double bernoulli_kl(double p, double q) {
    double v = 0.0;
    if (p > 0.0) v += p * std::log(p / q);
    if (p < 1.0) v += (1.0 - p) * std::log((1.0 - p) / (1.0 - q));
    return v;
}

} // namespace

double kl_ucb_index(double q_bar, long long n_arrivals, long long n_allocated) {
    if (n_allocated == 0) return std::numeric_limits<double>::infinity();
    if (q_bar >= 1.0) return 1.0;
    double ln_n = std::log(static_cast<double>(n_arrivals));
    double threshold = 0.0;
    if (n_arrivals >= 2) threshold = std::max(0.0, ln_n + std::log(ln_n));
    double budget = threshold / static_cast<double>(n_allocated);

    double lo = q_bar, hi = 1.0;
    for (int it = 0; it < 64 && hi - lo > 1e-9; ++it) {
        double mid = 0.5 * (lo + hi);
        if (bernoulli_kl(q_bar, mid) > budget)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace c3t
