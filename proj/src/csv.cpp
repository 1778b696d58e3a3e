#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "c3t/harness.hpp"

namespace c3t {

namespace {

constexpr const char* kVersion = "0.1.0";

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary); // no platform newline translation
    if (!out) throw std::runtime_error("cannot write " + path);
    return out;
}

void write_metric_row(std::ofstream& out, const std::string& policy, const std::string& metric,
                      const MetricValue& mv) {
    out << policy << ',' << metric << ',' << fmt(mv.value) << ',' << fmt(mv.stderr_) << '\n';
}

} // namespace

void write_summary_csv(const std::string& path, const std::vector<MetricsSummary>& summaries) {
    std::ofstream out = open_out(path);
    out << "policy,metric,value,stderr\n";
    for (const auto& m : summaries) {
        for (std::size_t s = 0; s < m.dose_error.size(); ++s)
            write_metric_row(out, m.policy, "dose_error_sg" + std::to_string(s + 1), m.dose_error[s]);
        write_metric_row(out, m.policy, "dose_error_total", m.dose_error_total);
        write_metric_row(out, m.policy, "safe_dose_type1", m.safe_type1);
        write_metric_row(out, m.policy, "safe_dose_type2", m.safe_type2);
        write_metric_row(out, m.policy, "safe_dose_total", m.safe_total);
        write_metric_row(out, m.policy, "efficacy_per_patient", m.efficacy_per_patient);
        write_metric_row(out, m.policy, "toxicity_per_patient", m.toxicity_per_patient);
        for (std::size_t s = 0; s < m.toxicity_within_margin.size(); ++s)
            write_metric_row(out, m.policy, "toxicity_within_margin_sg" + std::to_string(s + 1),
                             m.toxicity_within_margin[s]);
    }
}

void write_curves_csv(const std::string& path, const std::vector<MetricsSummary>& summaries) {
    std::ofstream out = open_out(path);
    std::size_t subgroups = summaries.empty() ? 0 : summaries.front().recruitment.size();
    out << "policy,round";
    for (std::size_t s = 1; s <= subgroups; ++s) out << ",recruited_sg" << s;
    for (std::size_t s = 1; s <= subgroups; ++s) out << ",efficacy_mse_sg" << s;
    out << '\n';
    for (const auto& m : summaries) {
        std::size_t rounds = m.recruitment.empty() ? 0 : m.recruitment.front().size();
        for (std::size_t t = 0; t < rounds; ++t) {
            out << m.policy << ',' << (t + 1);
            for (std::size_t s = 0; s < subgroups; ++s) out << ',' << fmt(m.recruitment[s][t]);
            for (std::size_t s = 0; s < subgroups; ++s) out << ',' << fmt(m.efficacy_mse[s][t]);
            out << '\n';
        }
    }
}

void write_sweep_csv(const std::string& path, const std::string& parameter,
                     const std::map<std::string, std::vector<SweepRow>>& rows_by_policy) {
    std::ofstream out = open_out(path);
    out << "parameter,grid_value,budget,horizon,policy,dose_error_total,dose_error_total_se,"
           "efficacy_per_patient,efficacy_per_patient_se,toxicity_per_patient,toxicity_per_patient_se\n";
    for (const auto& [policy, rows] : rows_by_policy) {
        for (const auto& row : rows) {
            const MetricsSummary& m = row.summary;
            out << parameter << ',' << fmt(row.grid_value) << ',' << row.budget << ','
                << row.horizon << ',' << policy << ',' << fmt(m.dose_error_total.value) << ','
                << fmt(m.dose_error_total.stderr_) << ',' << fmt(m.efficacy_per_patient.value)
                << ',' << fmt(m.efficacy_per_patient.stderr_) << ','
                << fmt(m.toxicity_per_patient.value) << ',' << fmt(m.toxicity_per_patient.stderr_)
                << '\n';
        }
    }
}

void write_meta(const std::string& path, const Scenario& sc, const std::vector<std::string>& policies,
                int reps, std::uint64_t base_seed, const std::vector<MetricsSummary>& summaries,
                const std::string& extra) {
    std::ofstream out = open_out(path);
    out << "version: " << kVersion << '\n';
    out << "subgroups: " << sc.num_subgroups << '\n';
    out << "doses: " << sc.num_doses << '\n';
    out << "budget: " << sc.budget << '\n';
    out << "horizon: " << sc.horizon << '\n';
    out << "mtd_threshold: " << fmt(sc.mtd_threshold) << '\n';
    out << "efficacy_threshold: " << fmt(sc.efficacy_threshold) << '\n';
    out << "policy_config: exploration_c=" << fmt(sc.policy.exploration_c)
        << " radius_const=" << fmt(sc.policy.radius_const)
        << " radius_exponent=" << fmt(sc.policy.radius_exponent)
        << " credible_phi=" << fmt(sc.policy.credible_phi) << " a_min=" << fmt(sc.policy.a_min)
        << " a_max=" << fmt(sc.policy.a_max) << " recommend_rule=" << sc.policy.recommend_rule
        << '\n';
    out << "replications: " << reps << '\n';
    out << "base_seed: " << base_seed << '\n';
    out << "policies:";
    for (const auto& p : policies) out << ' ' << p;
    out << '\n';
    out << "averaging: per-patient quantities divide by treated count; replications with zero "
           "treated patients in a subgroup recommend no dose for it and are excluded from the "
           "toxicity-margin fraction\n";
    for (const auto& m : summaries) {
        out << "policy " << m.policy << ": replications=" << m.replications
            << " prior_safe_cells=" << m.prior_safe_cells << " zero_treated_reps=";
        for (std::size_t s = 0; s < m.zero_treated_reps.size(); ++s) {
            if (s) out << '/';
            out << m.zero_treated_reps[s];
        }
        out << '\n';
    }
    if (!extra.empty()) out << extra << '\n';
}

} // namespace c3t
