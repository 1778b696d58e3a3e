#include "c3t/budget_lp.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace c3t {

AllocationSolution solve_lp(const AllocationProblem& prob) {
    const std::size_t n = prob.values.size();
    if (prob.weights.size() != n) throw std::invalid_argument("solve_lp: size mismatch");
    if (prob.budget_rate < 0.0) throw std::invalid_argument("solve_lp: rho must be >= 0");
    for (std::size_t i = 1; i < n; ++i)
        if (prob.values[i] > prob.values[i - 1])
            throw std::invalid_argument("solve_lp: values must be sorted non-increasing");

    AllocationSolution sol;
    sol.psi.assign(n, 0.0);

    // eta_s = prefix weight sums; s~ = max { s : eta_s <= rho }.
    double eta = 0.0;
    std::size_t s_tilde = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (eta + prob.weights[i] <= prob.budget_rate) {
            eta += prob.weights[i];
            sol.psi[i] = 1.0;
            s_tilde = i + 1;
        } else {
            break;
        }
    }
    sol.threshold_index = static_cast<int>(s_tilde);
    if (s_tilde < n && prob.weights[s_tilde] > 0.0) {
        double frac = (prob.budget_rate - eta) / prob.weights[s_tilde];
        sol.psi[s_tilde] = std::clamp(frac, 0.0, 1.0);
    }
    return sol;
}

AllocationSolution solve_lp_costed(const std::vector<double>& values,
                                   const std::vector<double>& costs,
                                   const std::vector<double>& weights, double rho) {
    const std::size_t n = values.size();
    if (costs.size() != n || weights.size() != n)
        throw std::invalid_argument("solve_lp_costed: size mismatch");
    for (double c : costs)
        if (!(c > 0.0)) throw std::invalid_argument("solve_lp_costed: costs must be positive");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        return values[i] / costs[i] > values[j] / costs[j];
    });

    AllocationProblem sorted;
    sorted.budget_rate = rho;
    sorted.values.reserve(n);
    sorted.weights.reserve(n);
    for (std::size_t pos : order) {
        sorted.values.push_back(values[pos] / costs[pos]);
        sorted.weights.push_back(weights[pos] * costs[pos]);
    }
    AllocationSolution inner = solve_lp(sorted);

    AllocationSolution sol;
    sol.psi.assign(n, 0.0);
    sol.threshold_index = inner.threshold_index;
    for (std::size_t i = 0; i < n; ++i) sol.psi[order[i]] = inner.psi[i];
    return sol;
}

double remaining_ratio(double remaining_budget, int remaining_rounds) {
    if (remaining_rounds < 1) throw std::invalid_argument("remaining_ratio: tau must be >= 1");
    if (remaining_budget < 0.0) throw std::invalid_argument("remaining_ratio: budget must be >= 0");
    return std::min(1.0, remaining_budget / static_cast<double>(remaining_rounds));
}

} // namespace c3t
