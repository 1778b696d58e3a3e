#include "c3t/harness.hpp"

#include <atomic>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <thread>

#include "c3t/dose_tox.hpp"
#include "c3t/rng.hpp"

namespace c3t {

long long TrialTrace::treated_count() const {
    long long n = 0;
    for (const auto& r : rounds) n += r.action >= 1 ? 1 : 0;
    return n;
}

TrialTrace run_trial(const Scenario& sc, Policy& policy, std::uint64_t seed) {
    std::mt19937_64 arrival_rng = make_stream(seed, 0);
    std::mt19937_64 eff_rng = make_stream(seed, 1);
    std::mt19937_64 tox_rng = make_stream(seed, 2);
    std::mt19937_64 policy_rng = make_stream(seed, 3);

    policy.reset(settings_of(sc), sc.policy);

    TrialTrace trace;
    trace.policy_name = std::string(policy.name());
    trace.seed = seed;
    trace.rounds.reserve(sc.horizon);

    double budget = static_cast<double>(sc.budget);
    for (int t = 1; t <= sc.horizon; ++t) {
        int s = sample_arrival(sc, arrival_rng);
        // Outcome uniforms are consumed every round, treated or not, so the
        // environment stream is identical for every policy under one seed.
        double u_eff = uniform01(eff_rng);
        double u_tox = uniform01(tox_rng);

        int tau = sc.horizon - t + 1;
        int action = policy.choose(t, s, budget, tau, policy_rng);

        TrialTrace::Round row;
        row.subgroup = s;
        row.action = action;
        if (action >= 1) {
            if (budget <= 0.0)
                throw std::logic_error("policy \"" + trace.policy_name +
                                       "\" returned a dose with no remaining budget");
            if (action > sc.num_doses)
                throw std::logic_error("policy returned dose above K");
            Outcome o = outcome_from_uniforms(sc, s, action, u_eff, u_tox);
            budget -= sc.cost[s];
            policy.record(t, s, action, o);
            row.efficacy = o.efficacy ? 1 : 0;
            row.toxicity = o.toxicity ? 1 : 0;
        } else {
            policy.record(t, s, 0, std::nullopt);
        }
        row.remaining_budget = budget;
        trace.rounds.push_back(row);
    }

    trace.recommendation = policy.recommend(policy_rng);
    trace.final_state = policy.snapshot();
    return trace;
}

namespace {

MetricValue mean_and_se(const std::vector<double>& xs) {
    MetricValue mv;
    const std::size_t n = xs.size();
    if (n == 0) return mv;
    double sum = 0.0;
    for (double x : xs) sum += x;
    double mean = sum / static_cast<double>(n);
    double var = 0.0;
    for (double x : xs) var += (x - mean) * (x - mean);
    var = n > 1 ? var / static_cast<double>(n - 1) : 0.0;
    mv.value = mean;
    mv.stderr_ = std::sqrt(var / static_cast<double>(n));
    return mv;
}

void parallel_for(int count, int threads, const std::function<void(int)>& body) {
    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads <= 1 || count <= 1) {
        for (int i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    int workers = std::min(threads, count);
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace

MetricsSummary compute_metrics(const Scenario& sc, const GroundTruth& truth,
                               const std::vector<TrialTrace>& traces, double safety_margin) {
    if (traces.empty()) throw std::invalid_argument("compute_metrics: no traces");
    const int S = sc.num_subgroups, K = sc.num_doses, T = sc.horizon;
    for (const auto& tr : traces)
        if (static_cast<int>(tr.rounds.size()) != T ||
            static_cast<int>(tr.recommendation.size()) != S)
            throw std::invalid_argument("compute_metrics: trace does not match the scenario");

    MetricsSummary m;
    m.policy = traces.front().policy_name;
    m.replications = static_cast<int>(traces.size());
    const int R = m.replications;

    // --- recommendation errors ---
    std::vector<std::vector<double>> err_per_sub(S, std::vector<double>(R, 0.0));
    std::vector<double> err_total(R, 0.0);
    for (int r = 0; r < R; ++r) {
        int wrong = 0;
        for (int s = 0; s < S; ++s) {
            bool e = traces[r].recommendation[s] != truth.optimal_dose[s];
            err_per_sub[s][r] = e ? 1.0 : 0.0;
            wrong += e ? 1 : 0;
        }
        err_total[r] = static_cast<double>(wrong) / static_cast<double>(S);
    }
    m.dose_error.resize(S);
    for (int s = 0; s < S; ++s) m.dose_error[s] = mean_and_se(err_per_sub[s]);
    m.dose_error_total = mean_and_se(err_total);

    // --- safe-dose classification at trial end ---
    std::vector<double> t1(R, 0.0), t2(R, 0.0), tt(R, 0.0);
    long long prior_safe = 0;
    const std::vector<double> levels = skeleton_to_levels(sc.skeleton);
    for (int r = 0; r < R; ++r) {
        const LearningSnapshot& fin = traces[r].final_state;
        long long safe_cells = 0, unsafe_cells = 0, e1 = 0, e2 = 0;
        for (int s = 0; s < S; ++s) {
            for (int k = 0; k < K; ++k) {
                bool truly_safe = sc.toxicity[s][k] <= sc.mtd_threshold;
                bool est_safe;
                if (fin.has_toxicity_model && fin.obs.allocated_total(s) > 0) {
                    est_safe = toxicity_at(levels[k], fin.a_hat[s]) <= sc.mtd_threshold;
                } else if (fin.obs.allocated[s][k] > 0) {
                    est_safe = fin.obs.p_bar(s, k) <= sc.mtd_threshold;
                } else {
                    est_safe = true; // prior p_bar = 0 convention, flagged below
                    prior_safe += 1;
                }
                if (truly_safe) {
                    safe_cells += 1;
                    if (!est_safe) e1 += 1;
                } else {
                    unsafe_cells += 1;
                    if (est_safe) e2 += 1;
                }
            }
        }
        t1[r] = safe_cells > 0 ? static_cast<double>(e1) / static_cast<double>(safe_cells) : 0.0;
        t2[r] = unsafe_cells > 0 ? static_cast<double>(e2) / static_cast<double>(unsafe_cells) : 0.0;
        tt[r] = static_cast<double>(e1 + e2) / static_cast<double>(S * K);
    }
    m.safe_type1 = mean_and_se(t1);
    m.safe_type2 = mean_and_se(t2);
    m.safe_total = mean_and_se(tt);
    m.prior_safe_cells = prior_safe;

    // --- per-patient efficacy / toxicity and the safety-margin fraction ---
    std::vector<double> eff_pp, tox_pp;
    std::vector<std::vector<double>> margin_ok(S);
    m.zero_treated_reps.assign(S, 0);
    for (int r = 0; r < R; ++r) {
        long long treated = 0, eff_bits = 0, tox_bits = 0;
        std::vector<long long> treated_s(S, 0), tox_s(S, 0);
        for (const auto& row : traces[r].rounds) {
            if (row.action < 1) continue;
            treated += 1;
            eff_bits += row.efficacy;
            tox_bits += row.toxicity;
            treated_s[row.subgroup] += 1;
            tox_s[row.subgroup] += row.toxicity;
        }
        if (treated > 0) {
            eff_pp.push_back(static_cast<double>(eff_bits) / static_cast<double>(treated));
            tox_pp.push_back(static_cast<double>(tox_bits) / static_cast<double>(treated));
        }
        for (int s = 0; s < S; ++s) {
            if (treated_s[s] == 0) {
                m.zero_treated_reps[s] += 1;
                continue;
            }
            double avg = static_cast<double>(tox_s[s]) / static_cast<double>(treated_s[s]);
            margin_ok[s].push_back(avg <= sc.mtd_threshold + safety_margin ? 1.0 : 0.0);
        }
    }
    m.efficacy_per_patient = mean_and_se(eff_pp);
    m.toxicity_per_patient = mean_and_se(tox_pp);
    m.toxicity_within_margin.resize(S);
    for (int s = 0; s < S; ++s) m.toxicity_within_margin[s] = mean_and_se(margin_ok[s]);

    // --- round-indexed curves: cumulative recruitment and efficacy MSE ---
    m.recruitment.assign(S, std::vector<double>(T, 0.0));
    m.efficacy_mse.assign(S, std::vector<double>(T, 0.0));
    for (int r = 0; r < R; ++r) {
        std::vector<long long> cum(S, 0);
        std::vector<std::vector<long long>> n_sk(S, std::vector<long long>(K, 0));
        std::vector<std::vector<long long>> x_sk(S, std::vector<long long>(K, 0));
        for (int t = 0; t < T; ++t) {
            const auto& row = traces[r].rounds[t];
            if (row.action >= 1) {
                cum[row.subgroup] += 1;
                n_sk[row.subgroup][row.action - 1] += 1;
                x_sk[row.subgroup][row.action - 1] += row.efficacy;
            }
            for (int s = 0; s < S; ++s) {
                m.recruitment[s][t] += static_cast<double>(cum[s]);
                double se = 0.0;
                if (truth.optimal_dose[s] >= 1) {
                    int k = truth.optimal_dose[s] - 1;
                    double q_hat = n_sk[s][k] > 0 ? static_cast<double>(x_sk[s][k]) /
                                                        static_cast<double>(n_sk[s][k])
                                                  : 0.0;
                    double d = q_hat - sc.efficacy[s][k];
                    se = d * d;
                } else {
                    // no optimal dose: average over the truly safe doses
                    int count = 0;
                    for (int k = 0; k < K; ++k) {
                        if (sc.toxicity[s][k] > sc.mtd_threshold) continue;
                        double q_hat = n_sk[s][k] > 0 ? static_cast<double>(x_sk[s][k]) /
                                                            static_cast<double>(n_sk[s][k])
                                                      : 0.0;
                        double d = q_hat - sc.efficacy[s][k];
                        se += d * d;
                        count += 1;
                    }
                    if (count > 0) se /= count;
                }
                m.efficacy_mse[s][t] += se;
            }
        }
    }
    for (int s = 0; s < S; ++s)
        for (int t = 0; t < T; ++t) {
            m.recruitment[s][t] /= R;
            m.efficacy_mse[s][t] /= R;
        }

    return m;
}

std::vector<MetricsSummary> run_experiment(const Scenario& sc,
                                           const std::vector<std::string>& policies, int reps,
                                           std::uint64_t base_seed, int threads) {
    if (reps < 1) throw std::invalid_argument("run_experiment: reps must be >= 1");
    GroundTruth truth = derive_ground_truth(sc);

    std::vector<MetricsSummary> out;
    out.reserve(policies.size());
    for (const std::string& name : policies) {
        (void)make_policy(name); // validate the name before spending any work
        std::vector<TrialTrace> traces(reps);
        parallel_for(reps, threads, [&](int r) {
            auto policy = make_policy(name);
            traces[r] = run_trial(sc, *policy, derive_seed(base_seed, name, r));
        });
        MetricsSummary m = compute_metrics(sc, truth, traces);
        m.policy = name;
        out.push_back(std::move(m));
    }
    return out;
}

std::vector<SweepRow> sweep(const Scenario& sc, const std::string& parameter,
                            const std::vector<double>& grid,
                            const std::vector<std::string>& policies, int reps,
                            std::uint64_t base_seed, int threads) {
    if (grid.empty()) throw std::invalid_argument("sweep: empty grid");
    if (parameter != "budget" && parameter != "horizon-ratio")
        throw std::invalid_argument("sweep: parameter must be budget or horizon-ratio");

    std::vector<SweepRow> rows;
    for (double g : grid) {
        Scenario point = sc;
        if (parameter == "budget") {
            double ratio = static_cast<double>(sc.horizon) / static_cast<double>(sc.budget);
            point.budget = static_cast<int>(std::llround(g));
            point.horizon = static_cast<int>(std::llround(g * ratio));
        } else {
            point.budget = sc.budget;
            point.horizon = static_cast<int>(std::llround(g * sc.budget));
        }
        if (point.budget < 1 || point.horizon < point.budget)
            throw std::invalid_argument("sweep: grid point yields an invalid scenario");

        std::vector<MetricsSummary> summaries = run_experiment(point, policies, reps, base_seed, threads);
        for (auto& s : summaries) {
            SweepRow row;
            row.grid_value = g;
            row.budget = point.budget;
            row.horizon = point.horizon;
            row.summary = std::move(s);
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

} // namespace c3t
