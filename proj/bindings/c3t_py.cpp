#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <random>

#include "c3t/budget_lp.hpp"
#include "c3t/dose_tox.hpp"
#include "c3t/harness.hpp"
#include "c3t/policy.hpp"
#include "c3t/posterior.hpp"
#include "c3t/rng.hpp"
#include "c3t/scenario.hpp"

namespace py = pybind11;
using namespace c3t;

namespace {

py::dict summary_to_dict(const MetricsSummary& m) {
    py::dict d;
    d["policy"] = m.policy;
    d["replications"] = m.replications;
    py::list dose_error;
    for (const auto& e : m.dose_error) dose_error.append(py::make_tuple(e.value, e.stderr_));
    d["dose_error"] = dose_error;
    d["dose_error_total"] = py::make_tuple(m.dose_error_total.value, m.dose_error_total.stderr_);
    d["safe_dose_type1"] = py::make_tuple(m.safe_type1.value, m.safe_type1.stderr_);
    d["safe_dose_type2"] = py::make_tuple(m.safe_type2.value, m.safe_type2.stderr_);
    d["safe_dose_total"] = py::make_tuple(m.safe_total.value, m.safe_total.stderr_);
    d["efficacy_per_patient"] =
        py::make_tuple(m.efficacy_per_patient.value, m.efficacy_per_patient.stderr_);
    d["toxicity_per_patient"] =
        py::make_tuple(m.toxicity_per_patient.value, m.toxicity_per_patient.stderr_);
    py::list margin;
    for (const auto& e : m.toxicity_within_margin) margin.append(py::make_tuple(e.value, e.stderr_));
    d["toxicity_within_margin"] = margin;
    d["recruitment"] = m.recruitment;
    d["efficacy_mse"] = m.efficacy_mse;
    d["zero_treated_reps"] = m.zero_treated_reps;
    d["prior_safe_cells"] = m.prior_safe_cells;
    return d;
}

} // namespace

PYBIND11_MODULE(_c3t, m) {
    m.doc() = "Budget- and safety-constrained dose-finding bandit simulator";

    py::class_<PolicyConfig>(m, "PolicyConfig")
        .def(py::init<>())
        .def_readwrite("exploration_c", &PolicyConfig::exploration_c)
        .def_readwrite("radius_const", &PolicyConfig::radius_const)
        .def_readwrite("radius_exponent", &PolicyConfig::radius_exponent)
        .def_readwrite("credible_phi", &PolicyConfig::credible_phi)
        .def_readwrite("a_min", &PolicyConfig::a_min)
        .def_readwrite("a_max", &PolicyConfig::a_max)
        .def_readwrite("recommend_rule", &PolicyConfig::recommend_rule);

    py::class_<Scenario>(m, "Scenario")
        .def_readonly("num_subgroups", &Scenario::num_subgroups)
        .def_readonly("num_doses", &Scenario::num_doses)
        .def_readonly("efficacy", &Scenario::efficacy)
        .def_readonly("toxicity", &Scenario::toxicity)
        .def_readonly("arrival", &Scenario::arrival)
        .def_readonly("budget", &Scenario::budget)
        .def_readonly("horizon", &Scenario::horizon)
        .def_readonly("mtd_threshold", &Scenario::mtd_threshold)
        .def_readonly("efficacy_threshold", &Scenario::efficacy_threshold)
        .def_readonly("safety_confidence", &Scenario::safety_confidence)
        .def_readonly("cost", &Scenario::cost)
        .def_readonly("skeleton", &Scenario::skeleton)
        .def_readonly("policy", &Scenario::policy);

    py::class_<GroundTruth>(m, "GroundTruth")
        .def_readonly("safe_boundary", &GroundTruth::safe_boundary)
        .def_readonly("candidate_set", &GroundTruth::candidate_set)
        .def_readonly("optimal_dose", &GroundTruth::optimal_dose);

    m.def("load_scenario", &load_scenario, py::arg("path"));
    m.def("scenario_from_json", &scenario_from_json, py::arg("text"));
    m.def("derive_ground_truth", &derive_ground_truth, py::arg("scenario"));

    m.def("skeleton_to_levels", &skeleton_to_levels, py::arg("p0"));
    m.def("toxicity_at", &toxicity_at, py::arg("level"), py::arg("a"));
    m.def("fit_parameter", &fit_parameter, py::arg("level"), py::arg("observed_mean"),
          py::arg("a_min") = 0.05, py::arg("a_max") = 20.0);
    m.def("aggregate_parameter", &aggregate_parameter, py::arg("fits"), py::arg("counts"));
    m.def("confidence_radius", &confidence_radius, py::arg("n_arrivals"), py::arg("delta"),
          py::arg("radius_const"), py::arg("radius_exponent"), py::arg("num_doses"));

    m.def("beta_cdf", &beta_cdf, py::arg("x"), py::arg("a"), py::arg("b"));
    m.def("beta_quantile", &beta_quantile, py::arg("prob"), py::arg("a"), py::arg("b"));
    m.def("interval_width", &interval_width, py::arg("phi"), py::arg("a"), py::arg("b"));
    m.def(
        "expected_improvement",
        [](double q_bar, double alpha, double beta, double phi) {
            return expected_improvement(q_bar, BetaPosterior{alpha, beta}, phi);
        },
        py::arg("q_bar"), py::arg("alpha"), py::arg("beta"), py::arg("phi") = 0.9);

    m.def(
        "solve_lp",
        [](const std::vector<double>& values, const std::vector<double>& weights, double rho) {
            AllocationSolution sol = solve_lp(AllocationProblem{values, weights, rho});
            return py::make_tuple(sol.psi, sol.threshold_index);
        },
        py::arg("values"), py::arg("weights"), py::arg("rho"));
    m.def(
        "solve_lp_costed",
        [](const std::vector<double>& values, const std::vector<double>& costs,
           const std::vector<double>& weights, double rho) {
            AllocationSolution sol = solve_lp_costed(values, costs, weights, rho);
            return py::make_tuple(sol.psi, sol.threshold_index);
        },
        py::arg("values"), py::arg("costs"), py::arg("weights"), py::arg("rho"));
    m.def("remaining_ratio", &remaining_ratio, py::arg("remaining_budget"),
          py::arg("remaining_rounds"));

    m.def(
        "virtual_arrivals",
        [](const std::vector<long long>& counts, int length, std::uint64_t seed) {
            std::mt19937_64 rng = make_stream(seed, 0);
            return virtual_arrivals(counts, length, rng);
        },
        py::arg("counts"), py::arg("length"), py::arg("seed"));

    m.def("ucb_index", &ucb_index, py::arg("q_bar"), py::arg("n_arrivals"), py::arg("n_allocated"),
          py::arg("exploration_c"));
    m.def("kl_ucb_index", &kl_ucb_index, py::arg("q_bar"), py::arg("n_arrivals"),
          py::arg("n_allocated"));
    m.def("policy_names", []() { return policy_names(); });

    m.def(
        "run_trial",
        [](const Scenario& sc, const std::string& policy_name, std::uint64_t seed) {
            auto policy = make_policy(policy_name);
            TrialTrace tr = run_trial(sc, *policy, seed);
            py::dict d;
            d["policy"] = tr.policy_name;
            d["recommendation"] = tr.recommendation;
            d["treated"] = tr.treated_count();
            std::vector<py::tuple> rounds;
            rounds.reserve(tr.rounds.size());
            for (const auto& r : tr.rounds)
                rounds.push_back(py::make_tuple(r.subgroup, r.action, int(r.efficacy),
                                                int(r.toxicity), r.remaining_budget));
            d["rounds"] = rounds;
            return d;
        },
        py::arg("scenario"), py::arg("policy"), py::arg("seed"));

    m.def(
        "run_experiment",
        [](const Scenario& sc, const std::vector<std::string>& policies, int reps,
           std::uint64_t seed, int threads) {
            auto summaries = run_experiment(sc, policies, reps, seed, threads);
            py::list out;
            for (const auto& s : summaries) out.append(summary_to_dict(s));
            return out;
        },
        py::arg("scenario"), py::arg("policies"), py::arg("reps"), py::arg("seed"),
        py::arg("threads") = 0);

    m.def(
        "sweep",
        [](const Scenario& sc, const std::string& parameter, const std::vector<double>& grid,
           const std::vector<std::string>& policies, int reps, std::uint64_t seed, int threads) {
            auto rows = sweep(sc, parameter, grid, policies, reps, seed, threads);
            py::list out;
            for (const auto& row : rows) {
                py::dict d = summary_to_dict(row.summary);
                d["grid_value"] = row.grid_value;
                d["budget"] = row.budget;
                d["horizon"] = row.horizon;
                out.append(d);
            }
            return out;
        },
        py::arg("scenario"), py::arg("parameter"), py::arg("grid"), py::arg("policies"),
        py::arg("reps"), py::arg("seed"), py::arg("threads") = 0);
}
