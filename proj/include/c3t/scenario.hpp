#ifndef C3T_SCENARIO_HPP
#define C3T_SCENARIO_HPP

#include <random>
#include <string>
#include <vector>

namespace c3t {

// Knobs shared by the learning policies. Defaults are the documented ones;
// a scenario file may override them in its "policy" block.
struct PolicyConfig {
    double exploration_c = 2.0;   // UCB bonus scale c
    double radius_const = 1.0;    // C in the toxicity confidence radius
    double radius_exponent = 1.0; // gamma
    double credible_phi = 0.9;    // credible-interval coverage
    double a_min = 0.05;          // working range for the toxicity parameter
    double a_max = 20.0;
    // "empirical": final candidate set from empirical means + fitted model.
    // "ucb": reuse the running UCB-based candidate set at T.
    std::string recommend_rule = "empirical";
};

// Ground-truth environment of one synthetic trial.
struct Scenario {
    int num_subgroups = 0; // S
    int num_doses = 0;     // K
    std::vector<std::vector<double>> efficacy; // q[s][k]
    std::vector<std::vector<double>> toxicity; // p[s][k], non-decreasing in k
    std::vector<double> arrival;               // pi[s], sums to 1
    int budget = 0;  // B (patients)
    int horizon = 0; // T (rounds), T >= B
    double mtd_threshold = 0.0;      // zeta
    double efficacy_threshold = 0.0; // theta
    std::vector<double> safety_confidence; // delta[s]
    std::vector<double> cost;              // c[s]
    std::vector<double> skeleton;          // p0[k], strictly increasing
    PolicyConfig policy;
};

struct GroundTruth {
    std::vector<int> safe_boundary;               // U[s]: max dose with p < zeta, 0 if none
    std::vector<std::vector<int>> candidate_set;  // K_s, 1-based dose indices
    std::vector<int> optimal_dose;                // kstar[s] in {0..K}, 0 = no dose
};

// Parses and validates a scenario file (JSON). Throws std::runtime_error with
// the offending field named.
Scenario load_scenario(const std::string& path);
Scenario scenario_from_json(const std::string& text);

// Validates type invariants; throws on violation. load_scenario calls this.
void validate_scenario(const Scenario& sc);

GroundTruth derive_ground_truth(const Scenario& sc);

// Subgroup of the arriving patient, distributed pi.
int sample_arrival(const Scenario& sc, std::mt19937_64& rng);

struct Outcome {
    bool efficacy = false;
    bool toxicity = false;
};

// Bernoulli(q[s][k]), Bernoulli(p[s][k]) drawn independently; k is 1-based.
Outcome sample_outcome(const Scenario& sc, int subgroup, int dose, std::mt19937_64& rng);
Outcome outcome_from_uniforms(const Scenario& sc, int subgroup, int dose, double u_eff, double u_tox);

// i.i.d. arrival stream of `length` draws from counts/total (sequential
// recruitment reduction). Throws if all counts are zero.
std::vector<int> virtual_arrivals(const std::vector<long long>& counts, int length,
                                  std::mt19937_64& rng);

} // namespace c3t

#endif
