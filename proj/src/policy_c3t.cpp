#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>

#include "c3t/budget_lp.hpp"
#include "c3t/dose_tox.hpp"
#include "c3t/policy.hpp"
#include "c3t/posterior.hpp"
#include "c3t/rng.hpp"

namespace c3t {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// C3T-Budget and C3T-Budget-E share everything except the candidate-set
// efficacy screen and the LP score.
class C3TPolicy final : public Policy {
  public:
    enum class Variant { kBudget, kBudgetE };

    explicit C3TPolicy(Variant variant) : variant_(variant) {}

    void reset(const TrialSettings& settings, const PolicyConfig& cfg) override {
        st_ = settings;
        cfg_ = cfg;
        obs_.reset(st_.num_subgroups, st_.num_doses);
        fits_.assign(st_.num_subgroups, std::vector<double>(st_.num_doses, 1.0));
        levels_ = skeleton_to_levels(st_.skeleton);
        // dose k is model-safe at parameter a iff a >= safe_threshold_[k]
        safe_threshold_.resize(st_.num_doses);
        double ln_zeta = std::log(st_.mtd_threshold);
        for (int k = 0; k < st_.num_doses; ++k)
            safe_threshold_[k] = ln_zeta / std::log(st_.skeleton[k]);
        width_cache_.clear();
    }

    int choose(int /*round*/, int subgroup, double remaining_budget, int remaining_rounds,
               std::mt19937_64& rng) override {
        const int S = st_.num_subgroups, K = st_.num_doses;
        if (remaining_budget <= 0.0) return 0;

        long long arrivals_now = obs_.arrivals[subgroup] + 1;
        if (arrivals_now <= K) return static_cast<int>(arrivals_now); // initialization sweep

        std::vector<double> scores(S, -kInf);
        std::vector<int> chosen(S, 0);
        for (int u = 0; u < S; ++u) {
            long long n_u = obs_.arrivals[u] + (u == subgroup ? 1 : 0);
            double a_upper = aggregate_fit(u) + radius(u, n_u);

            int best = 0;
            double best_index = -kInf;
            double best_plausible = -kInf;
            for (int k = 0; k < K; ++k) {
                bool safe = !(a_upper < safe_threshold_[k]); // inf passes
                if (!safe) continue;
                double index = n_u >= 1 ? ucb_index(obs_.q_bar(u, k), n_u, obs_.allocated[u][k],
                                                    cfg_.exploration_c)
                                        : kInf;
                if (variant_ == Variant::kBudget && index < st_.efficacy_threshold) continue;
                if (index > best_index) {
                    best_index = index;
                    best = k + 1;
                }
                double plausible = static_cast<double>(obs_.eff_sum[u][k] + 1) /
                                   static_cast<double>(obs_.allocated[u][k] + 2);
                best_plausible = std::max(best_plausible, plausible);
            }
            chosen[u] = best;
            if (best == 0) continue; // empty candidate set

            if (variant_ == Variant::kBudgetE) {
                scores[u] = best_index;
            } else if (best_plausible >= st_.efficacy_threshold) {
                scores[u] = improvement_score(u, best - 1);
            }
            // else: no candidate dose remains plausibly effective; the subgroup
            // is settled and drops to the bottom of the recruitment order.
        }

        if (chosen[subgroup] == 0) return 0;

        double rho = remaining_ratio(remaining_budget, remaining_rounds);
        AllocationSolution sol = solve_lp_costed(scores, st_.cost, st_.arrival, rho);
        double psi = sol.psi[subgroup];
        if (psi >= 1.0) return chosen[subgroup];
        if (psi <= 0.0) return 0;
        return uniform01(rng) < psi ? chosen[subgroup] : 0;
    }

    void record(int /*round*/, int subgroup, int action, const std::optional<Outcome>& outcome) override {
        obs_.arrivals[subgroup] += 1;
        if (action < 1) return;
        if (!outcome.has_value()) throw std::logic_error("c3t: treated round without outcome");
        int k = action - 1;
        obs_.allocated[subgroup][k] += 1;
        obs_.eff_sum[subgroup][k] += outcome->efficacy ? 1 : 0;
        obs_.tox_sum[subgroup][k] += outcome->toxicity ? 1 : 0;
        fits_[subgroup][k] =
            fit_parameter(levels_[k], obs_.p_bar(subgroup, k), cfg_.a_min, cfg_.a_max);
    }

    std::vector<int> recommend(std::mt19937_64& /*rng*/) const override {
        const int S = st_.num_subgroups, K = st_.num_doses;
        std::vector<int> rec(S, 0);
        for (int s = 0; s < S; ++s) {
            if (obs_.allocated_total(s) == 0) continue;
            double a_hat = aggregate_fit(s);
            int best = 0;
            double best_q = -1.0;
            for (int k = 0; k < K; ++k) {
                if (!in_final_set(s, k, a_hat)) continue;
                double q = obs_.q_bar(s, k);
                if (q > best_q) {
                    best_q = q;
                    best = k + 1;
                }
            }
            rec[s] = best;
        }
        return rec;
    }

    std::string_view name() const override {
        return variant_ == Variant::kBudget ? "c3t-budget" : "c3t-budget-e";
    }

    LearningSnapshot snapshot() const override {
        LearningSnapshot snap;
        snap.obs = obs_;
        snap.has_toxicity_model = true;
        snap.a_hat.resize(st_.num_subgroups);
        for (int s = 0; s < st_.num_subgroups; ++s) snap.a_hat[s] = aggregate_fit(s);
        return snap;
    }

  private:
    double aggregate_fit(int s) const {
        if (obs_.allocated_total(s) == 0) return 1.0; // skeleton prior
        return aggregate_parameter(fits_[s], obs_.allocated[s]);
    }

    double radius(int s, long long n_arrivals) const {
        if (n_arrivals < 1) return kInf;
        return confidence_radius(n_arrivals, st_.safety_confidence[s], cfg_.radius_const,
                                 cfg_.radius_exponent, st_.num_doses);
    }

    // Eq.-5 improvement of the chosen dose's credible interval; widths cached
    // per (alpha, beta) pair (integer counts), phi fixed for the run.
    double improvement_score(int s, int k) {
        long long succ = obs_.eff_sum[s][k];
        long long n = obs_.allocated[s][k];
        double f0 = cached_width(succ + 1, n - succ + 1);
        double f_succ = cached_width(succ + 2, n - succ + 1);
        double f_fail = cached_width(succ + 1, n - succ + 2);
        double q = obs_.q_bar(s, k);
        return q * (f0 - f_succ) + (1.0 - q) * (f0 - f_fail);
    }

    double cached_width(long long alpha, long long beta) {
        std::uint64_t key = (static_cast<std::uint64_t>(alpha) << 32) |
                            static_cast<std::uint64_t>(beta);
        auto it = width_cache_.find(key);
        if (it != width_cache_.end()) return it->second;
        double w = interval_width(cfg_.credible_phi, static_cast<double>(alpha),
                                  static_cast<double>(beta));
        width_cache_.emplace(key, w);
        return w;
    }

    bool in_final_set(int s, int k, double a_hat) const {
        if (cfg_.recommend_rule == "ucb") {
            long long n_s = obs_.arrivals[s];
            double a_upper = a_hat + radius(s, n_s);
            if (a_upper < safe_threshold_[k]) return false;
            double index = n_s >= 1 ? ucb_index(obs_.q_bar(s, k), n_s, obs_.allocated[s][k],
                                                cfg_.exploration_c)
                                    : kInf;
            return index >= st_.efficacy_threshold;
        }
        if (obs_.allocated[s][k] == 0) return false; // no empirical mean for this dose
        if (obs_.q_bar(s, k) < st_.efficacy_threshold) return false;
        return toxicity_at(levels_[k], a_hat) <= st_.mtd_threshold;
    }

    Variant variant_;
    TrialSettings st_;
    PolicyConfig cfg_;
    ObservationTable obs_;
    std::vector<std::vector<double>> fits_; // per-dose toxicity parameter fits
    std::vector<double> levels_;
    std::vector<double> safe_threshold_;
    std::unordered_map<std::uint64_t, double> width_cache_;
};

} // namespace

std::unique_ptr<Policy> make_c3t_budget() {
    return std::make_unique<C3TPolicy>(C3TPolicy::Variant::kBudget);
}

std::unique_ptr<Policy> make_c3t_budget_e() {
    return std::make_unique<C3TPolicy>(C3TPolicy::Variant::kBudgetE);
}

} // namespace c3t
