#include <cmath>
#include <vector>

#include <stdexcept>

#include <doctest.h>

#include "c3t/budget_lp.hpp"
#include "c3t/rng.hpp"

using namespace c3t;

namespace {

double objective(const std::vector<double>& psi, const std::vector<double>& w,
                 const std::vector<double>& d) {
    double v = 0.0;
    for (std::size_t i = 0; i < psi.size(); ++i) v += psi[i] * w[i] * d[i];
    return v;
}

// Vertex enumeration: every optimum has psi binary except at most one
// fractional coordinate that exhausts the budget. Exact up to rounding.
double vertex_oracle(const std::vector<double>& d, const std::vector<double>& w, double rho) {
    const int n = static_cast<int>(d.size());
    double best = 0.0;
    for (int mask = 0; mask < (1 << n); ++mask) {
        double used = 0.0, obj = 0.0;
        for (int i = 0; i < n; ++i)
            if (mask & (1 << i)) {
                used += w[i];
                obj += w[i] * d[i];
            }
        if (used > rho + 1e-12) continue;
        best = std::max(best, obj);
        for (int j = 0; j < n; ++j) {
            if ((mask & (1 << j)) || w[j] <= 0.0) continue;
            double frac = std::min(1.0, (rho - used) / w[j]);
            if (frac < 0.0) continue;
            best = std::max(best, obj + frac * w[j] * d[j]);
        }
    }
    return best;
}

// coarse grid search over psi, used for the worked example
double grid_oracle(const std::vector<double>& d, const std::vector<double>& w, double rho,
                   int steps) {
    const int n = static_cast<int>(d.size());
    std::vector<int> idx(n, 0);
    double best = 0.0;
    while (true) {
        double used = 0.0, obj = 0.0;
        for (int i = 0; i < n; ++i) {
            double psi = idx[i] / double(steps);
            used += psi * w[i];
            obj += psi * w[i] * d[i];
        }
        if (used <= rho + 1e-12) best = std::max(best, obj);
        int j = 0;
        while (j < n && ++idx[j] > steps) idx[j++] = 0;
        if (j == n) break;
    }
    return best;
}

int fractional_count(const std::vector<double>& psi) {
    int c = 0;
    for (double v : psi)
        if (v > 1e-12 && v < 1.0 - 1e-12) ++c;
    return c;
}

} // namespace

TEST_CASE("closed-form allocation on the worked example") {
    AllocationProblem prob;
    prob.values = {0.8, 0.5, 0.1};
    prob.weights = {0.25, 1.0 / 3.0, 5.0 / 12.0};
    prob.budget_rate = 1.0 / 3.0;
    AllocationSolution sol = solve_lp(prob);
    CHECK(sol.psi[0] == doctest::Approx(1.0));
    CHECK(sol.psi[1] == doctest::Approx(0.25));
    CHECK(sol.psi[2] == doctest::Approx(0.0));
    CHECK(sol.threshold_index == 1);

    double obj = objective(sol.psi, prob.weights, prob.values);
    CHECK(obj >= grid_oracle(prob.values, prob.weights, prob.budget_rate, 20) - 1e-9);
    CHECK(obj == doctest::Approx(vertex_oracle(prob.values, prob.weights, prob.budget_rate)));
}

TEST_CASE("budget extremes") {
    AllocationProblem prob;
    prob.values = {0.8, 0.5, 0.1};
    prob.weights = {0.25, 1.0 / 3.0, 5.0 / 12.0};

    prob.budget_rate = 1.0;
    for (double psi : solve_lp(prob).psi) CHECK(psi == doctest::Approx(1.0));

    prob.budget_rate = 0.0;
    for (double psi : solve_lp(prob).psi) CHECK(psi == doctest::Approx(0.0));
}

TEST_CASE("unsorted values rejected") {
    AllocationProblem prob;
    prob.values = {0.1, 0.9};
    prob.weights = {0.5, 0.5};
    prob.budget_rate = 0.5;
    CHECK_THROWS_AS(solve_lp(prob), std::invalid_argument);
}

TEST_CASE("costed variant") {
    SUBCASE("unit costs reduce to the plain LP") {
        std::vector<double> d = {0.7, 0.4, 0.2}, c = {1, 1, 1}, w = {0.3, 0.3, 0.4};
        AllocationSolution a = solve_lp_costed(d, c, w, 0.45);
        AllocationProblem prob{d, w, 0.45};
        AllocationSolution b = solve_lp(prob);
        for (int i = 0; i < 3; ++i) CHECK(a.psi[i] == doctest::Approx(b.psi[i]));
    }

    SUBCASE("cheaper subgroup accepted first at equal value") {
        std::vector<double> d = {0.8, 0.8}, c = {2.0, 1.0}, w = {0.5, 0.5};
        AllocationSolution sol = solve_lp_costed(d, c, w, 0.5);
        CHECK(sol.psi[0] == doctest::Approx(0.0));
        CHECK(sol.psi[1] == doctest::Approx(1.0));
        // grid oracle on the weighted problem confirms the objective
        std::vector<double> wc = {w[0] * c[0], w[1] * c[1]};
        std::vector<double> dc = {d[0] / c[0], d[1] / c[1]};
        double obj = 0.0;
        for (int i = 0; i < 2; ++i) obj += sol.psi[i] * wc[i] * dc[i];
        CHECK(obj >= grid_oracle(dc, wc, 0.5, 100) - 1e-9);
    }

    SUBCASE("budget covering all weighted arrivals accepts everyone") {
        std::vector<double> d = {0.8, 0.3}, c = {2.0, 3.0}, w = {0.5, 0.5};
        AllocationSolution sol = solve_lp_costed(d, c, w, 2.5 + 1e-9);
        CHECK(sol.psi[0] == doctest::Approx(1.0));
        CHECK(sol.psi[1] == doctest::Approx(1.0));
    }

    SUBCASE("non-positive cost rejected") {
        CHECK_THROWS_AS(solve_lp_costed({0.5}, {0.0}, {1.0}, 0.5), std::invalid_argument);
    }
}

TEST_CASE("random instances match the vertex oracle") {
    std::mt19937_64 rng = make_stream(41, 0);
    for (int trial = 0; trial < 300; ++trial) {
        int n = 2 + int(uniform01(rng) * 5.0);
        std::vector<double> d(n), w(n);
        for (int i = 0; i < n; ++i) {
            d[i] = uniform01(rng);
            w[i] = 0.05 + uniform01(rng);
        }
        std::sort(d.begin(), d.end(), std::greater<>());
        double wsum = 0.0;
        for (double& x : w) wsum += x;
        for (double& x : w) x /= wsum;
        double rho = uniform01(rng);

        AllocationProblem prob{d, w, rho};
        AllocationSolution sol = solve_lp(prob);

        // feasibility, box constraints, at most one fractional coordinate
        double used = 0.0;
        for (int i = 0; i < n; ++i) {
            CHECK(sol.psi[i] >= 0.0);
            CHECK(sol.psi[i] <= 1.0);
            used += sol.psi[i] * w[i];
        }
        CHECK(used <= rho + 1e-12);
        CHECK(fractional_count(sol.psi) <= 1);

        double obj = objective(sol.psi, w, d);
        double best = vertex_oracle(d, w, rho);
        CHECK(obj == doctest::Approx(best).epsilon(1e-9));
    }
}

TEST_CASE("objective is monotone in the budget rate") {
    std::vector<double> d = {0.9, 0.6, 0.3, 0.1};
    std::vector<double> w = {0.2, 0.3, 0.25, 0.25};
    double prev = -1.0;
    for (double rho = 0.0; rho <= 1.01; rho += 0.05) {
        AllocationProblem prob{d, w, rho};
        double obj = objective(solve_lp(prob).psi, w, d);
        CHECK(obj >= prev - 1e-12);
        prev = obj;
    }
}

TEST_CASE("remaining budget ratio") {
    CHECK(remaining_ratio(400, 1200) == doctest::Approx(1.0 / 3.0));
    CHECK(remaining_ratio(77, 77) == doctest::Approx(1.0));
    CHECK(remaining_ratio(0, 10) == doctest::Approx(0.0));
    CHECK(remaining_ratio(50, 10) == doctest::Approx(1.0)); // capped
    CHECK_THROWS_AS(remaining_ratio(5, 0), std::invalid_argument);
}
