// Acceptance suite: runs every gate criterion on the bundled scenario at full
// replication count and prints one pass/fail line per criterion.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "c3t/budget_lp.hpp"
#include "c3t/harness.hpp"
#include "c3t/policy.hpp"
#include "c3t/posterior.hpp"
#include "c3t/rng.hpp"
#include "c3t/scenario.hpp"

using namespace c3t;

namespace {

constexpr std::uint64_t kSeed = 20240801;
constexpr int kReps = 500;

int g_failures = 0;

struct Criterion {
    std::string label;
    bool ok = true;
    std::vector<std::string> notes;

    void check(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            notes.push_back("FAILED: " + what);
        }
    }
    void note(const std::string& what) { notes.push_back(what); }

    void report() const {
        std::printf("[%s] %s\n", ok ? "PASS" : "FAIL", label.c_str());
        for (const auto& n : notes) std::printf("       %s\n", n.c_str());
        if (!ok) ++g_failures;
    }
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

double pair_slack(const MetricValue& a, const MetricValue& b) {
    return 2.0 * std::sqrt(a.stderr_ * a.stderr_ + b.stderr_ * b.stderr_);
}

// ---------------------------------------------------------------- criterion 1
double lp_objective(const std::vector<double>& psi, const std::vector<double>& w,
                    const std::vector<double>& d) {
    double v = 0.0;
    for (std::size_t i = 0; i < psi.size(); ++i) v += psi[i] * w[i] * d[i];
    return v;
}

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

void criterion_lp_oracle() {
    Criterion c{"1. LP allocation matches the brute-force oracle on 1000 instances"};
    std::mt19937_64 rng = make_stream(kSeed, 10);
    int fractional_violations = 0;
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        int n = 2 + int(uniform01(rng) * 5.0);
        std::vector<double> d(n), w(n), costs(n);
        for (int i = 0; i < n; ++i) {
            d[i] = uniform01(rng);
            w[i] = 0.05 + uniform01(rng);
            costs[i] = 0.25 + 2.0 * uniform01(rng);
        }
        double wsum = 0.0;
        for (double x : w) wsum += x;
        for (double& x : w) x /= wsum;
        double rho = uniform01(rng);

        std::vector<double> sorted = d;
        std::sort(sorted.begin(), sorted.end(), std::greater<>());
        AllocationProblem prob{sorted, w, rho};
        AllocationSolution plain = solve_lp(prob);
        double obj = lp_objective(plain.psi, w, sorted);
        double best = vertex_oracle(sorted, w, rho);
        worst = std::max(worst, std::abs(obj - best) / std::max(1.0, best));

        int frac = 0;
        for (double psi : plain.psi) frac += psi > 1e-12 && psi < 1.0 - 1e-12 ? 1 : 0;
        fractional_violations += frac > 1 ? 1 : 0;

        // costed route: same oracle on values d/c with weights w*c
        AllocationSolution costed = solve_lp_costed(d, costs, w, rho);
        std::vector<double> dc(n), wc(n);
        for (int i = 0; i < n; ++i) {
            dc[i] = d[i] / costs[i];
            wc[i] = w[i] * costs[i];
        }
        double obj_c = lp_objective(costed.psi, wc, dc);
        double best_c = vertex_oracle(dc, wc, rho);
        worst = std::max(worst, std::abs(obj_c - best_c) / std::max(1.0, best_c));
        frac = 0;
        for (double psi : costed.psi) frac += psi > 1e-12 && psi < 1.0 - 1e-12 ? 1 : 0;
        fractional_violations += frac > 1 ? 1 : 0;
    }
    c.check(worst <= 1e-9, "objective relative error " + fmt(worst) + " > 1e-9");
    c.check(fractional_violations == 0, "solutions with more than one fractional coordinate");
    c.note("worst relative error " + std::to_string(worst));
    c.report();
}

// ---------------------------------------------------------------- criterion 2
double quantile_bisect(double prob, double a, double b) {
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 100; ++it) {
        double mid = 0.5 * (lo + hi);
        if (beta_cdf(mid, a, b) < prob)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

void criterion_quantiles() {
    Criterion c{"2. Beta quantile agrees with bisection on the CDF to 1e-6"};
    double worst = 0.0;
    const double params[] = {1, 1.5, 2, 3, 5, 8, 13, 25, 50, 100, 150, 200};
    const double probs[] = {0.025, 0.05, 0.25, 0.5, 0.75, 0.95, 0.975};
    for (double a : params)
        for (double b : params)
            for (double p : probs)
                worst = std::max(worst, std::abs(beta_quantile(p, a, b) - quantile_bisect(p, a, b)));
    std::mt19937_64 rng = make_stream(kSeed, 11);
    for (int trial = 0; trial < 300; ++trial) {
        double a = 1.0 + uniform01(rng) * 199.0;
        double b = 1.0 + uniform01(rng) * 199.0;
        double p = 0.01 + uniform01(rng) * 0.98;
        worst = std::max(worst, std::abs(beta_quantile(p, a, b) - quantile_bisect(p, a, b)));
    }
    c.check(worst <= 1e-6, "max quantile error " + std::to_string(worst));

    double f11 = interval_width(0.9, 1, 1);
    c.check(std::abs(f11 - 0.9) <= 1e-9, "f(0.9,1,1) = " + std::to_string(f11));
    double f21 = interval_width(0.9, 2, 1);
    double closed = std::sqrt(0.95) - std::sqrt(0.05);
    c.check(std::abs(f21 - closed) <= 1e-8, "f(0.9,2,1) = " + std::to_string(f21));
    c.report();
}

// ---------------------------------------------------------------- criterion 3
struct TableMachine {
    int K, dose = 1;
    bool expanded = false, stopped = false;
    int rec = 0;
    explicit TableMachine(int k) : K(k) {}
    void cohort(int toxic) {
        if (stopped) return;
        bool escalate, stop;
        if (!expanded) {
            escalate = toxic == 0;
            stop = toxic >= 2;
            expanded = toxic == 1;
        } else {
            escalate = toxic == 0;
            stop = toxic >= 1;
            expanded = false;
        }
        if (escalate) {
            if (dose == K) {
                stopped = true;
                rec = K;
            } else {
                dose += 1;
            }
        } else if (stop) {
            stopped = true;
            rec = dose - 1;
        }
    }
    int recommendation() const { return stopped ? rec : dose - 1; }
};

void criterion_three_plus_three() {
    Criterion c{"3. 3+3 machine matches the hand decision table on all 4-cohort sequences"};
    TrialSettings st;
    st.num_subgroups = 1;
    st.num_doses = 6;
    st.mtd_threshold = 0.35;
    st.efficacy_threshold = 0.2;
    st.arrival = {1.0};
    st.safety_confidence = {0.05};
    st.cost = {1.0};
    st.skeleton = {0.05, 0.1, 0.2, 0.3, 0.4, 0.5};
    st.budget = 1000;
    st.horizon = 1000;

    long long mismatches = 0, sequences = 0;
    for (int cohorts = 1; cohorts <= 4; ++cohorts) {
        int bits = 3 * cohorts;
        for (int word = 0; word < (1 << bits); ++word) {
            TableMachine table(st.num_doses);
            auto policy = make_policy("c-3p3");
            policy->reset(st, PolicyConfig{});
            std::mt19937_64 rng = make_stream(1, 3);
            int round = 1;
            for (int cohort = 0; cohort < cohorts; ++cohort) {
                int toxic = 0;
                for (int i = 0; i < 3; ++i) {
                    int bit = (word >> (3 * cohort + i)) & 1;
                    toxic += bit;
                    int a = policy->choose(round, 0, 900.0, 900, rng);
                    int expected = table.stopped ? 0 : table.dose;
                    if (a != expected) ++mismatches;
                    if (a >= 1)
                        policy->record(round++, 0, a, Outcome{false, bit != 0});
                    else
                        policy->record(round++, 0, 0, std::nullopt);
                }
                table.cohort(toxic);
            }
            if (policy->recommend(rng)[0] != table.recommendation()) ++mismatches;
            ++sequences;
        }
    }
    c.check(mismatches == 0, std::to_string(mismatches) + " mismatches");
    c.note(std::to_string(sequences) + " bit sequences enumerated");
    c.report();
}

// ------------------------------------------------------- criteria 4, 5, 6, 9
const MetricsSummary& find(const std::vector<MetricsSummary>& all, const std::string& name) {
    for (const auto& m : all)
        if (m.policy == name) return m;
    throw std::runtime_error("missing policy " + name);
}

void criterion_table3(const std::vector<MetricsSummary>& all) {
    Criterion c{"4. Recommendation error rates match the benchmark references"};
    const auto& budget = find(all, "c3t-budget");
    const auto& budget_e = find(all, "c3t-budget-e");
    const auto& ucb = find(all, "c-ucb");
    const auto& kl = find(all, "c-kl-ucb");
    const auto& ts = find(all, "c-indep-ts");
    const auto& p33 = find(all, "c-3p3");

    double b_total = budget.dose_error_total.value;
    c.check(std::abs(b_total - 0.047) <= 0.05,
            "c3t-budget total error " + fmt(b_total) + " outside 0.047 +/- 0.05");
    double p33_total = p33.dose_error_total.value;
    c.check(std::abs(p33_total - 0.800) <= 0.07,
            "c-3p3 total error " + fmt(p33_total) + " outside 0.800 +/- 0.07");

    auto leq = [&](const MetricsSummary& a, const MetricsSummary& b, const std::string& what) {
        double slack = pair_slack(a.dose_error_total, b.dose_error_total);
        c.check(a.dose_error_total.value <= b.dose_error_total.value + slack,
                what + " (" + fmt(a.dose_error_total.value) + " vs " +
                    fmt(b.dose_error_total.value) + ", slack " + fmt(slack) + ")");
    };
    leq(budget, budget_e, "c3t-budget < c3t-budget-e");
    leq(budget_e, ucb, "c3t-budget-e < c-ucb");
    leq(budget_e, ts, "c3t-budget-e < c-indep-ts");
    leq(ucb, kl, "c-ucb < c-kl-ucb");
    leq(ts, kl, "c-indep-ts < c-kl-ucb");
    leq(kl, p33, "c-kl-ucb < c-3p3");

    std::ostringstream totals;
    totals << "totals:";
    for (const auto& m : all) totals << ' ' << m.policy << '=' << fmt(m.dose_error_total.value);
    c.note(totals.str());
    c.report();
}

void criterion_table5(const std::vector<MetricsSummary>& all) {
    Criterion c{"5. Per-patient efficacy ordering and toxicity caps"};
    const auto& budget = find(all, "c3t-budget");
    const auto& budget_e = find(all, "c3t-budget-e");
    const auto& ucb = find(all, "c-ucb");
    const auto& kl = find(all, "c-kl-ucb");
    const auto& ts = find(all, "c-indep-ts");
    const auto& p33 = find(all, "c-3p3");

    double e_eff = budget_e.efficacy_per_patient.value;
    c.check(std::abs(e_eff - 0.579) <= 0.05,
            "c3t-budget-e efficacy " + fmt(e_eff) + " outside 0.579 +/- 0.05");
    c.check(e_eff > budget.efficacy_per_patient.value, "c3t-budget-e > c3t-budget efficacy");
    c.check(budget.efficacy_per_patient.value > ucb.efficacy_per_patient.value,
            "c3t-budget > c-ucb efficacy");
    c.check(budget.efficacy_per_patient.value > ts.efficacy_per_patient.value,
            "c3t-budget > c-indep-ts efficacy");
    c.check(std::min(ucb.efficacy_per_patient.value, ts.efficacy_per_patient.value) >
                p33.efficacy_per_patient.value,
            "bandit baselines > c-3p3 efficacy");

    for (const auto* m : {&budget, &budget_e}) {
        double tox = m->toxicity_per_patient.value;
        c.check(tox < 0.25, m->policy + " toxicity " + fmt(tox) + " >= 0.25");
        for (const auto* base : {&ucb, &kl, &ts})
            c.check(tox < base->toxicity_per_patient.value,
                    m->policy + " toxicity above " + base->policy);
    }
    std::ostringstream line;
    line << "efficacy:";
    for (const auto& m : all) line << ' ' << m.policy << '=' << fmt(m.efficacy_per_patient.value);
    line << "  toxicity:";
    for (const auto& m : all) line << ' ' << m.policy << '=' << fmt(m.toxicity_per_patient.value);
    c.note(line.str());
    c.report();
}

void criterion_safety(const std::vector<MetricsSummary>& all, const Scenario& sc) {
    Criterion c{"6. Average treated toxicity within zeta + 0.05 in >= 1 - delta - 0.03 of runs"};
    for (const char* name : {"c3t-budget", "c3t-budget-e"}) {
        const auto& m = find(all, name);
        for (int s = 0; s < sc.num_subgroups; ++s) {
            double fraction = m.toxicity_within_margin[s].value;
            double bound = 1.0 - sc.safety_confidence[s] - 0.03;
            c.check(fraction >= bound, std::string(name) + " subgroup " + std::to_string(s + 1) +
                                           " fraction " + fmt(fraction) + " < " + fmt(bound));
        }
        c.note(std::string(name) + " fractions: " + fmt(m.toxicity_within_margin[0].value) + " " +
               fmt(m.toxicity_within_margin[1].value) + " " + fmt(m.toxicity_within_margin[2].value));
    }
    c.report();
}

void criterion_recruitment(const std::vector<MetricsSummary>& all, const Scenario& sc) {
    Criterion c{"9. Recruitment shapes: subgroup-1 flattens, subgroup-2 largest; E favours subgroup 3"};
    const auto& budget = find(all, "c3t-budget");
    const auto& budget_e = find(all, "c3t-budget-e");
    const int T = sc.horizon;

    double final1 = budget.recruitment[0][T - 1];
    double third1 = budget.recruitment[0][2 * T / 3 - 1];
    double growth = final1 > 0 ? (final1 - third1) / final1 : 0.0;
    c.check(growth < 0.10, "c3t-budget subgroup-1 final-third growth " + fmt(growth));

    double f1 = budget.recruitment[0][T - 1], f2 = budget.recruitment[1][T - 1],
           f3 = budget.recruitment[2][T - 1];
    c.check(f2 > f1 && f2 > f3, "c3t-budget largest final count not subgroup 2 (" + fmt(f1) + "/" +
                                    fmt(f2) + "/" + fmt(f3) + ")");

    double e1 = budget_e.recruitment[0][T - 1], e2 = budget_e.recruitment[1][T - 1],
           e3 = budget_e.recruitment[2][T - 1];
    c.check(e3 > e1 && e3 > e2, "c3t-budget-e largest final count not subgroup 3 (" + fmt(e1) +
                                    "/" + fmt(e2) + "/" + fmt(e3) + ")");
    c.note("c3t-budget finals " + fmt(f1) + "/" + fmt(f2) + "/" + fmt(f3) + ", growth " +
           fmt(growth) + "; c3t-budget-e finals " + fmt(e1) + "/" + fmt(e2) + "/" + fmt(e3));
    c.report();
}

// ---------------------------------------------------------------- criterion 7
void criterion_budget_sweep(const Scenario& sc) {
    Criterion c{"7. Budget sweep: error non-increasing, < 0.02 at B=500, crossover at B=40"};
    std::vector<double> grid = {40, 80, 200, 400, 500};
    auto rows = sweep(sc, "budget", grid, {"c3t-budget", "c3t-budget-e"}, kReps, kSeed, 0);

    std::map<std::string, std::vector<const SweepRow*>> by_policy;
    for (const auto& row : rows) by_policy[row.summary.policy].push_back(&row);

    const auto& budget_rows = by_policy["c3t-budget"];
    for (std::size_t i = 1; i < budget_rows.size(); ++i) {
        const auto& prev = budget_rows[i - 1]->summary.dose_error_total;
        const auto& curr = budget_rows[i]->summary.dose_error_total;
        c.check(curr.value <= prev.value + pair_slack(prev, curr),
                "error increased from B=" + std::to_string(budget_rows[i - 1]->budget) + " to B=" +
                    std::to_string(budget_rows[i]->budget));
    }
    double at500 = budget_rows.back()->summary.dose_error_total.value;
    c.check(at500 < 0.02, "c3t-budget error at B=500 is " + fmt(at500));

    double b40 = budget_rows.front()->summary.dose_error_total.value;
    double e40 = by_policy["c3t-budget-e"].front()->summary.dose_error_total.value;
    c.check(e40 <= b40, "at B=40 c3t-budget-e (" + fmt(e40) + ") > c3t-budget (" + fmt(b40) + ")");

    std::ostringstream line;
    line << "c3t-budget errors:";
    for (const auto* row : budget_rows)
        line << " B=" << row->budget << ":" << fmt(row->summary.dose_error_total.value);
    c.note(line.str());
    c.report();
}

// ---------------------------------------------------------------- criterion 8
void criterion_horizon_sweep(const Scenario& sc) {
    Criterion c{"8. Horizon sweep: budget error falls, E error rises, identical at T/B = 1"};
    std::vector<double> grid = {1, 2, 3, 4, 5};
    auto rows = sweep(sc, "horizon-ratio", grid, {"c3t-budget", "c3t-budget-e"}, kReps, kSeed, 0);

    std::map<std::string, std::vector<const SweepRow*>> by_policy;
    for (const auto& row : rows) by_policy[row.summary.policy].push_back(&row);
    const auto& b_rows = by_policy["c3t-budget"];
    const auto& e_rows = by_policy["c3t-budget-e"];

    for (std::size_t i = 1; i < b_rows.size(); ++i) {
        const auto& prev = b_rows[i - 1]->summary.dose_error_total;
        const auto& curr = b_rows[i]->summary.dose_error_total;
        c.check(curr.value <= prev.value + pair_slack(prev, curr),
                "c3t-budget error increased at ratio " + std::to_string(i + 1));
    }
    for (std::size_t i = 1; i < e_rows.size(); ++i) {
        const auto& prev = e_rows[i - 1]->summary.dose_error_total;
        const auto& curr = e_rows[i]->summary.dose_error_total;
        c.check(curr.value >= prev.value - pair_slack(prev, curr),
                "c3t-budget-e error decreased at ratio " + std::to_string(i + 1));
    }

    const auto& b1 = b_rows.front()->summary;
    const auto& e1 = e_rows.front()->summary;
    c.check(std::abs(b1.dose_error_total.value - e1.dose_error_total.value) <=
                pair_slack(b1.dose_error_total, e1.dose_error_total) + 1e-12,
            "errors differ at T/B = 1");
    c.check(std::abs(b1.efficacy_per_patient.value - e1.efficacy_per_patient.value) <=
                pair_slack(b1.efficacy_per_patient, e1.efficacy_per_patient) + 1e-12,
            "efficacies differ at T/B = 1");

    std::ostringstream line;
    line << "c3t-budget:";
    for (const auto* r : b_rows) line << ' ' << fmt(r->summary.dose_error_total.value);
    line << "  c3t-budget-e:";
    for (const auto* r : e_rows) line << ' ' << fmt(r->summary.dose_error_total.value);
    c.note(line.str());
    c.report();
}

// --------------------------------------------------------------- criterion 10
std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void criterion_determinism(const Scenario& sc) {
    Criterion c{"10. Repeated runs are byte-identical and every trace conserves the budget"};
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "c3t_acceptance";
    fs::create_directories(dir);

    auto emit = [&](const std::string& tag) {
        auto summaries = run_experiment(sc, {"c3t-budget", "c-ucb"}, 25, kSeed, 0);
        std::string s = (dir / ("summary_" + tag + ".csv")).string();
        std::string k = (dir / ("curves_" + tag + ".csv")).string();
        write_summary_csv(s, summaries);
        write_curves_csv(k, summaries);
        return slurp(s) + slurp(k);
    };
    c.check(emit("a") == emit("b"), "CSV outputs differ between identical runs");

    for (const auto& name : policy_names()) {
        for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
            auto policy = make_policy(name);
            TrialTrace tr = run_trial(sc, *policy, seed);
            double remaining = tr.rounds.back().remaining_budget;
            if (std::abs(double(tr.treated_count()) + remaining - double(sc.budget)) > 1e-9) {
                c.check(false, "budget not conserved for " + name);
                break;
            }
        }
    }
    c.report();
}

} // namespace

int main() {
    Scenario sc = load_scenario(C3T_SCENARIO_FILE);

    criterion_lp_oracle();
    criterion_quantiles();
    criterion_three_plus_three();

    auto all = run_experiment(sc, policy_names(), kReps, kSeed, 0);
    criterion_table3(all);
    criterion_table5(all);
    criterion_safety(all, sc);
    criterion_budget_sweep(sc);
    criterion_horizon_sweep(sc);
    criterion_recruitment(all, sc);
    criterion_determinism(sc);

    if (g_failures == 0) {
        std::printf("all criteria passed\n");
        return 0;
    }
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
}
