#ifndef C3T_HARNESS_HPP
#define C3T_HARNESS_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "c3t/policy.hpp"
#include "c3t/scenario.hpp"

namespace c3t {

// Per-round log of one replication plus the final learning state.
struct TrialTrace {
    std::string policy_name;

    struct Round {
        int subgroup = 0;      // 0-based
        int action = 0;        // 0 = skip, 1..K = dose
        signed char efficacy = -1; // -1 when skipped
        signed char toxicity = -1;
        double remaining_budget = 0.0;
    };
    std::vector<Round> rounds;

    std::vector<int> recommendation; // per subgroup, 0 = no dose
    LearningSnapshot final_state;
    std::uint64_t seed = 0;

    long long treated_count() const;
};

// Simulates T rounds with four independent sub-streams (arrival, efficacy,
// toxicity, policy) derived from the seed. Outcome uniforms are drawn every
// round so that policy decisions never shift the environment streams.
TrialTrace run_trial(const Scenario& sc, Policy& policy, std::uint64_t seed);

struct MetricValue {
    double value = 0.0;
    double stderr_ = 0.0;
};

struct MetricsSummary {
    std::string policy;
    int replications = 0;

    std::vector<MetricValue> dose_error; // per subgroup
    MetricValue dose_error_total;
    MetricValue safe_type1, safe_type2, safe_total;
    MetricValue efficacy_per_patient;
    MetricValue toxicity_per_patient;
    // Fraction of replications whose average treated-patient toxicity stays
    // within safety_margin of the MTD threshold, per subgroup.
    std::vector<MetricValue> toxicity_within_margin;

    std::vector<std::vector<double>> recruitment;  // [s][t] mean cumulative treated
    std::vector<std::vector<double>> efficacy_mse; // [s][t]

    std::vector<long long> zero_treated_reps; // per subgroup, excluded from margin stat
    long long prior_safe_cells = 0;           // baseline doses classified safe with no data
};

// Aggregates traces from one scenario. safety_margin is the slack added to
// zeta for toxicity_within_margin.
MetricsSummary compute_metrics(const Scenario& sc, const GroundTruth& truth,
                               const std::vector<TrialTrace>& traces,
                               double safety_margin = 0.05);

// Runs `reps` seeded replications per policy; replication r of policy p uses
// derive_seed(base_seed, p, r). threads = 0 picks hardware concurrency.
std::vector<MetricsSummary> run_experiment(const Scenario& sc,
                                           const std::vector<std::string>& policies, int reps,
                                           std::uint64_t base_seed, int threads = 0);

struct SweepRow {
    double grid_value = 0.0;
    int budget = 0;
    int horizon = 0;
    MetricsSummary summary;
};

// parameter: "budget" (T scaled to keep B/T fixed) or "horizon-ratio"
// (B fixed, T = ratio * B). Non-integer horizons are rounded to nearest.
std::vector<SweepRow> sweep(const Scenario& sc, const std::string& parameter,
                            const std::vector<double>& grid,
                            const std::vector<std::string>& policies, int reps,
                            std::uint64_t base_seed, int threads = 0);

// CSV / metadata writers (plain UTF-8, header row, fixed formatting so equal
// inputs give byte-identical files).
void write_summary_csv(const std::string& path, const std::vector<MetricsSummary>& summaries);
void write_curves_csv(const std::string& path, const std::vector<MetricsSummary>& summaries);
void write_sweep_csv(const std::string& path, const std::string& parameter,
                     const std::map<std::string, std::vector<SweepRow>>& rows_by_policy);
void write_meta(const std::string& path, const Scenario& sc, const std::vector<std::string>& policies,
                int reps, std::uint64_t base_seed, const std::vector<MetricsSummary>& summaries,
                const std::string& extra = "");

} // namespace c3t

#endif
