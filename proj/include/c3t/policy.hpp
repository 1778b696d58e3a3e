#ifndef C3T_POLICY_HPP
#define C3T_POLICY_HPP

#include <memory>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "c3t/scenario.hpp"

namespace c3t {

// What a policy is allowed to know about the trial. No true efficacies or
// toxicities in here.
struct TrialSettings {
    int num_subgroups = 0;
    int num_doses = 0;
    double mtd_threshold = 0.0;
    double efficacy_threshold = 0.0;
    std::vector<double> arrival;
    std::vector<double> safety_confidence;
    std::vector<double> cost;
    std::vector<double> skeleton;
    int budget = 0;
    int horizon = 0;
};

TrialSettings settings_of(const Scenario& sc);

// Arrival / allocation counts and outcome sums, shared by every policy.
struct ObservationTable {
    std::vector<long long> arrivals;                // N_s
    std::vector<std::vector<long long>> allocated;  // N_{s,k}
    std::vector<std::vector<long long>> eff_sum;    // sum of efficacy bits
    std::vector<std::vector<long long>> tox_sum;    // sum of toxicity bits

    void reset(int subgroups, int doses);
    double q_bar(int s, int k) const; // empirical mean, 0 when unallocated
    double p_bar(int s, int k) const;
    long long allocated_total(int s) const;
};

// End-of-trial state used by the metrics layer.
struct LearningSnapshot {
    ObservationTable obs;
    std::vector<double> a_hat;  // aggregated toxicity fit per subgroup
    bool has_toxicity_model = false;
};

// UCB index q_bar + sqrt(c log N_s / N_sk); +infinity when N_sk = 0.
double ucb_index(double q_bar, long long n_arrivals, long long n_allocated, double exploration_c);

// Bernoulli KL-UCB upper index, bisection to 1e-9.
double kl_ucb_index(double q_bar, long long n_arrivals, long long n_allocated);

// Behavioral contract shared by all six algorithms. Dose actions are 1-based;
// 0 means the patient is skipped. choose() must return 0 once the budget is
// exhausted; record() is called exactly once per round with the chosen action.
class Policy {
  public:
    virtual ~Policy() = default;
    virtual void reset(const TrialSettings& settings, const PolicyConfig& cfg) = 0;
    virtual int choose(int round, int subgroup, double remaining_budget, int remaining_rounds,
                       std::mt19937_64& rng) = 0;
    virtual void record(int round, int subgroup, int action, const std::optional<Outcome>& outcome) = 0;
    virtual std::vector<int> recommend(std::mt19937_64& rng) const = 0;
    virtual std::string_view name() const = 0;
    virtual LearningSnapshot snapshot() const = 0;
};

// Known policy names: c3t-budget, c3t-budget-e, c-ucb, c-kl-ucb, c-indep-ts, c-3p3.
const std::vector<std::string>& policy_names();
std::unique_ptr<Policy> make_policy(std::string_view name);

} // namespace c3t

#endif
