#include <algorithm>
#include <limits>
#include <stdexcept>

#include "c3t/policy.hpp"
#include "c3t/posterior.hpp"

namespace c3t {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Common state for the contextual baselines: one independent learner per
// subgroup, every arriving patient treated while budget remains.
class BaselinePolicy : public Policy {
  public:
    void reset(const TrialSettings& settings, const PolicyConfig& cfg) override {
        st_ = settings;
        cfg_ = cfg;
        obs_.reset(st_.num_subgroups, st_.num_doses);
        on_reset();
    }

    void record(int /*round*/, int subgroup, int action, const std::optional<Outcome>& outcome) override {
        obs_.arrivals[subgroup] += 1;
        if (action < 1) return;
        if (!outcome.has_value()) throw std::logic_error("baseline: treated round without outcome");
        int k = action - 1;
        obs_.allocated[subgroup][k] += 1;
        obs_.eff_sum[subgroup][k] += outcome->efficacy ? 1 : 0;
        obs_.tox_sum[subgroup][k] += outcome->toxicity ? 1 : 0;
        on_record(subgroup, k, *outcome);
    }

    // Filtered argmax over empirical means (supplementary recommendation rule).
    std::vector<int> recommend(std::mt19937_64& /*rng*/) const override {
        std::vector<int> rec(st_.num_subgroups, 0);
        for (int s = 0; s < st_.num_subgroups; ++s) {
            int best = 0;
            double best_q = -1.0;
            for (int k = 0; k < st_.num_doses; ++k) {
                if (obs_.allocated[s][k] == 0) continue;
                if (obs_.p_bar(s, k) > st_.mtd_threshold) continue;
                if (obs_.q_bar(s, k) < st_.efficacy_threshold) continue;
                if (obs_.q_bar(s, k) > best_q) {
                    best_q = obs_.q_bar(s, k);
                    best = k + 1;
                }
            }
            rec[s] = best;
        }
        return rec;
    }

    LearningSnapshot snapshot() const override {
        LearningSnapshot snap;
        snap.obs = obs_;
        snap.has_toxicity_model = false;
        return snap;
    }

  protected:
    virtual void on_reset() {}
    virtual void on_record(int /*subgroup*/, int /*dose0*/, const Outcome& /*outcome*/) {}

    TrialSettings st_;
    PolicyConfig cfg_;
    ObservationTable obs_;
};

class CUcbPolicy final : public BaselinePolicy {
  public:
    int choose(int /*round*/, int subgroup, double remaining_budget, int /*remaining_rounds*/,
               std::mt19937_64& /*rng*/) override {
        if (remaining_budget <= 0.0) return 0;
        long long n_s = obs_.arrivals[subgroup] + 1;
        int best = 1;
        double best_index = -kInf;
        for (int k = 0; k < st_.num_doses; ++k) {
            double index =
                ucb_index(obs_.q_bar(subgroup, k), n_s, obs_.allocated[subgroup][k], cfg_.exploration_c);
            if (index > best_index) {
                best_index = index;
                best = k + 1;
            }
        }
        return best;
    }

    std::string_view name() const override { return "c-ucb"; }
};

class CKlUcbPolicy final : public BaselinePolicy {
  public:
    int choose(int /*round*/, int subgroup, double remaining_budget, int /*remaining_rounds*/,
               std::mt19937_64& /*rng*/) override {
        if (remaining_budget <= 0.0) return 0;
        long long n_s = obs_.arrivals[subgroup] + 1;
        int best = 1;
        double best_index = -kInf;
        for (int k = 0; k < st_.num_doses; ++k) {
            double index = kl_ucb_index(obs_.q_bar(subgroup, k), n_s, obs_.allocated[subgroup][k]);
            if (index > best_index) {
                best_index = index;
                best = k + 1;
            }
        }
        return best;
    }

    std::string_view name() const override { return "c-kl-ucb"; }
};

class CIndepTsPolicy final : public BaselinePolicy {
  public:
    int choose(int /*round*/, int subgroup, double remaining_budget, int /*remaining_rounds*/,
               std::mt19937_64& rng) override {
        if (remaining_budget <= 0.0) return 0;
        int best = 1;
        double best_draw = -kInf;
        for (int k = 0; k < st_.num_doses; ++k) {
            BetaPosterior post{static_cast<double>(obs_.eff_sum[subgroup][k] + 1),
                               static_cast<double>(obs_.allocated[subgroup][k] -
                                                   obs_.eff_sum[subgroup][k] + 1)};
            double draw = sample(post, rng);
            if (draw > best_draw) {
                best_draw = draw;
                best = k + 1;
            }
        }
        return best;
    }

    // Posterior-mean filtered argmax. A single end-of-trial posterior draw is
    // noisy enough to flip the threshold filters, so the point estimate is
    // used instead.
    std::vector<int> recommend(std::mt19937_64& /*rng*/) const override {
        std::vector<int> rec(st_.num_subgroups, 0);
        for (int s = 0; s < st_.num_subgroups; ++s) {
            int best = 0;
            double best_q = -1.0;
            for (int k = 0; k < st_.num_doses; ++k) {
                long long n = obs_.allocated[s][k];
                if (n == 0) continue;
                double q_mean = static_cast<double>(obs_.eff_sum[s][k] + 1) / static_cast<double>(n + 2);
                double p_mean = static_cast<double>(obs_.tox_sum[s][k] + 1) / static_cast<double>(n + 2);
                if (p_mean > st_.mtd_threshold) continue;
                if (q_mean < st_.efficacy_threshold) continue;
                if (q_mean > best_q) {
                    best_q = q_mean;
                    best = k + 1;
                }
            }
            rec[s] = best;
        }
        return rec;
    }

    std::string_view name() const override { return "c-indep-ts"; }
};

// Classic 3+3 escalation, one machine per subgroup. Cohorts are evaluated on
// completion: 0/3 escalate, 1/3 expand, otherwise stop and recommend the
// previous dose; an expansion cohort escalates only when toxicity-free.
class ThreePlusThreePolicy final : public BaselinePolicy {
  public:
    int choose(int /*round*/, int subgroup, double remaining_budget, int /*remaining_rounds*/,
               std::mt19937_64& /*rng*/) override {
        if (remaining_budget <= 0.0) return 0;
        if (stopped_[subgroup]) return 0;
        return dose_[subgroup];
    }

    std::vector<int> recommend(std::mt19937_64& /*rng*/) const override {
        std::vector<int> rec(st_.num_subgroups, 0);
        for (int s = 0; s < st_.num_subgroups; ++s)
            rec[s] = stopped_[s] ? recommendation_[s] : dose_[s] - 1;
        return rec;
    }

    std::string_view name() const override { return "c-3p3"; }

  protected:
    void on_reset() override {
        dose_.assign(st_.num_subgroups, 1);
        expanded_.assign(st_.num_subgroups, 0);
        cohort_size_.assign(st_.num_subgroups, 0);
        cohort_tox_.assign(st_.num_subgroups, 0);
        stopped_.assign(st_.num_subgroups, 0);
        recommendation_.assign(st_.num_subgroups, 0);
    }

    void on_record(int s, int /*dose0*/, const Outcome& outcome) override {
        if (stopped_[s]) return;
        cohort_size_[s] += 1;
        cohort_tox_[s] += outcome.toxicity ? 1 : 0;
        if (cohort_size_[s] < 3) return;

        int tox = cohort_tox_[s];
        cohort_size_[s] = 0;
        cohort_tox_[s] = 0;
        if (!expanded_[s]) {
            if (tox == 0)
                escalate(s);
            else if (tox == 1)
                expanded_[s] = 1;
            else
                stop_at_previous(s);
        } else {
            expanded_[s] = 0;
            if (tox == 0)
                escalate(s);
            else
                stop_at_previous(s);
        }
    }

  private:
    void escalate(int s) {
        if (dose_[s] == st_.num_doses) {
            stopped_[s] = 1;
            recommendation_[s] = st_.num_doses;
        } else {
            dose_[s] += 1;
        }
    }

    void stop_at_previous(int s) {
        stopped_[s] = 1;
        recommendation_[s] = dose_[s] - 1;
    }

    std::vector<int> dose_;
    std::vector<signed char> expanded_;
    std::vector<int> cohort_size_;
    std::vector<int> cohort_tox_;
    std::vector<signed char> stopped_;
    std::vector<int> recommendation_;
};

} // namespace

std::unique_ptr<Policy> make_c3t_budget();
std::unique_ptr<Policy> make_c3t_budget_e();

const std::vector<std::string>& policy_names() {
    static const std::vector<std::string> names = {"c3t-budget", "c3t-budget-e", "c-ucb",
                                                   "c-kl-ucb",   "c-indep-ts",   "c-3p3"};
    return names;
}

std::unique_ptr<Policy> make_policy(std::string_view name) {
    if (name == "c3t-budget") return make_c3t_budget();
    if (name == "c3t-budget-e") return make_c3t_budget_e();
    if (name == "c-ucb") return std::make_unique<CUcbPolicy>();
    if (name == "c-kl-ucb") return std::make_unique<CKlUcbPolicy>();
    if (name == "c-indep-ts") return std::make_unique<CIndepTsPolicy>();
    if (name == "c-3p3") return std::make_unique<ThreePlusThreePolicy>();
    throw std::invalid_argument("unknown policy: " + std::string(name));
}

} // namespace c3t
