#ifndef C3T_BUDGET_LP_HPP
#define C3T_BUDGET_LP_HPP

#include <vector>

namespace c3t {

// maximize sum psi_s pi_s d_s  s.t.  sum psi_s pi_s <= rho,  psi in [0,1]^S,
// with d already sorted non-increasing. Solved in closed form: prefix of ones
// up to the threshold index, at most one fractional coordinate, zeros after.
struct AllocationProblem {
    std::vector<double> values;  // d, non-increasing
    std::vector<double> weights; // pi
    double budget_rate = 0.0;    // rho >= 0
};

struct AllocationSolution {
    std::vector<double> psi;
    int threshold_index = 0; // s~(rho): number of leading ones
};

AllocationSolution solve_lp(const AllocationProblem& prob);

// Heterogeneous-cost variant: maximize sum psi pi' d/c with pi' = pi*c under
// sum psi pi' <= rho. Inputs are in original subgroup order; the solution is
// mapped back to it. Sorting is by d/c descending, stable in the index.
AllocationSolution solve_lp_costed(const std::vector<double>& values,
                                   const std::vector<double>& costs,
                                   const std::vector<double>& weights, double rho);

// rho_tau = b/tau capped at 1. Requires tau >= 1, b >= 0.
double remaining_ratio(double remaining_budget, int remaining_rounds);

} // namespace c3t

#endif
