#include "c3t/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "c3t/rng.hpp"
#include <json.hpp>

namespace c3t {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw std::runtime_error("scenario: " + msg); }

std::vector<double> get_vector(const json& j, const std::string& key, std::size_t expect) {
    if (!j.at(key).is_array()) fail("field \"" + key + "\" must be an array");
    std::vector<double> v = j.at(key).get<std::vector<double>>();
    if (v.size() != expect)
        fail("field \"" + key + "\" must have " + std::to_string(expect) + " entries, got " +
             std::to_string(v.size()));
    return v;
}

std::vector<std::vector<double>> get_matrix(const json& j, const std::string& key, int rows,
                                            int cols) {
    std::vector<std::vector<double>> m;
    if (!j.at(key).is_array() || j.at(key).size() != static_cast<std::size_t>(rows))
        fail("field \"" + key + "\" must be an array of " + std::to_string(rows) + " rows");
    for (const auto& row : j.at(key)) {
        std::vector<double> r = row.get<std::vector<double>>();
        if (r.size() != static_cast<std::size_t>(cols))
            fail("field \"" + key + "\" rows must have " + std::to_string(cols) + " entries");
        m.push_back(std::move(r));
    }
    return m;
}

const std::vector<double> kDefaultSkeleton = {0.01, 0.05, 0.10, 0.20, 0.35, 0.50};

} // namespace

void validate_scenario(const Scenario& sc) {
    const int S = sc.num_subgroups, K = sc.num_doses;
    if (S < 1) fail("num_subgroups must be positive");
    if (K < 1) fail("num_doses must be positive");
    if (sc.budget < 1) fail("budget (B) must be >= 1");
    if (sc.horizon < sc.budget) fail("horizon (T) must satisfy T >= B");
    if (!(sc.mtd_threshold > 0.0 && sc.mtd_threshold < 1.0)) fail("mtd_threshold must be in (0,1)");
    if (sc.efficacy_threshold < 0.0 || sc.efficacy_threshold > 1.0)
        fail("efficacy_threshold must be in [0,1]");

    auto check_prob_matrix = [&](const std::vector<std::vector<double>>& m, const char* name) {
        if (m.size() != static_cast<std::size_t>(S)) fail(std::string(name) + " must have S rows");
        for (const auto& row : m) {
            if (row.size() != static_cast<std::size_t>(K)) fail(std::string(name) + " rows must have K entries");
            for (double v : row)
                if (v < 0.0 || v > 1.0) fail(std::string(name) + " entries must be probabilities");
        }
    };
    check_prob_matrix(sc.efficacy, "efficacy");
    check_prob_matrix(sc.toxicity, "toxicity");
    for (int s = 0; s < S; ++s)
        for (int k = 1; k < K; ++k)
            if (sc.toxicity[s][k] < sc.toxicity[s][k - 1])
                fail("toxicity must be non-decreasing in the dose index (row " + std::to_string(s + 1) + ")");

    if (sc.arrival.size() != static_cast<std::size_t>(S)) fail("arrival (pi) must have S entries");
    double total = 0.0;
    for (double v : sc.arrival) {
        if (v < 0.0) fail("arrival (pi) entries must be >= 0");
        total += v;
    }
    if (std::abs(total - 1.0) > 1e-12) fail("arrival (pi) must sum to 1");

    if (sc.safety_confidence.size() != static_cast<std::size_t>(S))
        fail("safety_confidence (delta) must have S entries");
    for (double v : sc.safety_confidence)
        if (!(v > 0.0 && v < 1.0)) fail("safety_confidence (delta) entries must be in (0,1)");

    if (sc.cost.size() != static_cast<std::size_t>(S)) fail("cost must have S entries");
    for (double v : sc.cost)
        if (!(v > 0.0)) fail("cost entries must be positive");

    if (sc.skeleton.size() != static_cast<std::size_t>(K)) fail("skeleton (p0) must have K entries");
    for (int k = 0; k < K; ++k) {
        if (!(sc.skeleton[k] > 0.0 && sc.skeleton[k] < 1.0)) fail("skeleton (p0) entries must be in (0,1)");
        if (k > 0 && sc.skeleton[k] <= sc.skeleton[k - 1]) fail("skeleton (p0) must be strictly increasing");
    }

    if (!(sc.policy.exploration_c >= 0.0)) fail("policy.exploration_c must be >= 0");
    if (!(sc.policy.radius_const >= 0.0)) fail("policy.radius_const must be >= 0");
    if (!(sc.policy.radius_exponent > 0.0)) fail("policy.radius_exponent must be > 0");
    if (!(sc.policy.credible_phi > 0.0 && sc.policy.credible_phi < 1.0))
        fail("policy.credible_phi must be in (0,1)");
    if (!(sc.policy.a_min > 0.0 && sc.policy.a_min < sc.policy.a_max))
        fail("policy parameter range requires 0 < a_min < a_max");
    if (sc.policy.recommend_rule != "empirical" && sc.policy.recommend_rule != "ucb")
        fail("policy.recommend_rule must be \"empirical\" or \"ucb\"");
}

Scenario scenario_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        fail(std::string("parse failure: ") + e.what());
    }

    static const char* known[] = {"num_subgroups", "num_doses",     "efficacy",
                                  "toxicity",      "arrival",       "budget",
                                  "horizon",       "mtd_threshold", "efficacy_threshold",
                                  "safety_confidence", "cost",      "skeleton",
                                  "policy"};
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : known) ok = ok || it.key() == k;
        if (!ok) fail("unknown field \"" + it.key() + "\"");
    }

    Scenario sc;
    try {
        sc.num_subgroups = j.at("num_subgroups").get<int>();
        sc.num_doses = j.at("num_doses").get<int>();
        if (sc.num_subgroups < 1 || sc.num_doses < 1) fail("dimensions must be positive");
        const int S = sc.num_subgroups, K = sc.num_doses;

        sc.efficacy = get_matrix(j, "efficacy", S, K);
        sc.toxicity = get_matrix(j, "toxicity", S, K);
        sc.arrival = get_vector(j, "arrival", S);
        sc.budget = j.at("budget").get<int>();
        sc.horizon = j.at("horizon").get<int>();
        sc.mtd_threshold = j.at("mtd_threshold").get<double>();
        sc.efficacy_threshold = j.at("efficacy_threshold").get<double>();

        sc.safety_confidence = j.contains("safety_confidence")
                                   ? get_vector(j, "safety_confidence", S)
                                   : std::vector<double>(S, 0.05);
        sc.cost = j.contains("cost") ? get_vector(j, "cost", S) : std::vector<double>(S, 1.0);
        if (j.contains("skeleton")) {
            sc.skeleton = get_vector(j, "skeleton", K);
        } else if (K == static_cast<int>(kDefaultSkeleton.size())) {
            sc.skeleton = kDefaultSkeleton;
        } else {
            fail("skeleton (p0) required when num_doses != " + std::to_string(kDefaultSkeleton.size()));
        }

        if (j.contains("policy")) {
            const json& p = j.at("policy");
            static const char* pknown[] = {"exploration_c", "radius_const",  "radius_exponent",
                                           "credible_phi",  "a_min",         "a_max",
                                           "recommend_rule"};
            for (auto it = p.begin(); it != p.end(); ++it) {
                bool ok = false;
                for (const char* k : pknown) ok = ok || it.key() == k;
                if (!ok) fail("unknown policy field \"" + it.key() + "\"");
            }
            if (p.contains("exploration_c")) sc.policy.exploration_c = p.at("exploration_c").get<double>();
            if (p.contains("radius_const")) sc.policy.radius_const = p.at("radius_const").get<double>();
            if (p.contains("radius_exponent")) sc.policy.radius_exponent = p.at("radius_exponent").get<double>();
            if (p.contains("credible_phi")) sc.policy.credible_phi = p.at("credible_phi").get<double>();
            if (p.contains("a_min")) sc.policy.a_min = p.at("a_min").get<double>();
            if (p.contains("a_max")) sc.policy.a_max = p.at("a_max").get<double>();
            if (p.contains("recommend_rule")) sc.policy.recommend_rule = p.at("recommend_rule").get<std::string>();
        }
    } catch (const json::exception& e) {
        fail(std::string("schema: ") + e.what());
    }

    validate_scenario(sc);
    return sc;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("cannot open file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return scenario_from_json(buf.str());
}

GroundTruth derive_ground_truth(const Scenario& sc) {
    GroundTruth gt;
    const int S = sc.num_subgroups, K = sc.num_doses;
    gt.safe_boundary.assign(S, 0);
    gt.candidate_set.resize(S);
    gt.optimal_dose.assign(S, 0);
    for (int s = 0; s < S; ++s) {
        for (int k = 0; k < K; ++k)
            if (sc.toxicity[s][k] < sc.mtd_threshold) gt.safe_boundary[s] = k + 1;
        int best = 0;
        double best_q = -1.0;
        for (int k = 0; k < K; ++k) {
            if (sc.efficacy[s][k] >= sc.efficacy_threshold && sc.toxicity[s][k] <= sc.mtd_threshold) {
                gt.candidate_set[s].push_back(k + 1);
                if (sc.efficacy[s][k] > best_q) { // ties keep the lowest dose
                    best_q = sc.efficacy[s][k];
                    best = k + 1;
                }
            }
        }
        gt.optimal_dose[s] = best;
    }
    return gt;
}

int sample_arrival(const Scenario& sc, std::mt19937_64& rng) {
    double u = uniform01(rng);
    double acc = 0.0;
    for (int s = 0; s < sc.num_subgroups; ++s) {
        acc += sc.arrival[s];
        if (u < acc) return s;
    }
    return sc.num_subgroups - 1;
}

Outcome outcome_from_uniforms(const Scenario& sc, int subgroup, int dose, double u_eff,
                              double u_tox) {
    if (dose < 1 || dose > sc.num_doses) throw std::invalid_argument("dose must be in 1..K");
    Outcome o;
    o.efficacy = u_eff < sc.efficacy[subgroup][dose - 1];
    o.toxicity = u_tox < sc.toxicity[subgroup][dose - 1];
    return o;
}

Outcome sample_outcome(const Scenario& sc, int subgroup, int dose, std::mt19937_64& rng) {
    double u_eff = uniform01(rng);
    double u_tox = uniform01(rng);
    return outcome_from_uniforms(sc, subgroup, dose, u_eff, u_tox);
}

std::vector<int> virtual_arrivals(const std::vector<long long>& counts, int length,
                                  std::mt19937_64& rng) {
    long long total = 0;
    for (long long c : counts) {
        if (c < 0) throw std::invalid_argument("virtual_arrivals: counts must be >= 0");
        total += c;
    }
    if (total <= 0) throw std::invalid_argument("virtual_arrivals: all counts are zero");

    std::vector<double> cum(counts.size());
    double acc = 0.0;
    for (std::size_t s = 0; s < counts.size(); ++s) {
        acc += static_cast<double>(counts[s]) / static_cast<double>(total);
        cum[s] = acc;
    }
    std::vector<int> seq(length);
    for (int t = 0; t < length; ++t) {
        double u = uniform01(rng);
        int chosen = static_cast<int>(counts.size()) - 1;
        for (std::size_t s = 0; s < cum.size(); ++s) {
            if (u < cum[s]) {
                chosen = static_cast<int>(s);
                break;
            }
        }
        seq[t] = chosen;
    }
    return seq;
}

} // namespace c3t
