#include "qrnet/report.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace qrnet::report {

using nlohmann::json;

namespace {

template <typename T>
json optional_json(const std::optional<T>& v) {
    return v ? json(*v) : json(nullptr);
}

std::string optional_cell(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

}  // namespace

std::string format_number(double x) {
    if (!std::isfinite(x)) {
        return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
    }
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return std::string(buf.data(), ptr);
}

std::string format_number(std::int64_t x) { return std::to_string(x); }

json to_json(const timing::FeasibilityResult& r) {
    json j{{"feasible", r.feasible}, {"slack", r.slack}};
    j["binding_index"] = optional_json(r.binding_index);
    return j;
}

json to_json(const engine::RunSummary& s) {
    json links = json::array();
    for (const auto& d : s.re_tcoh_product) {
        links.push_back({{"link", d.endpoints}, {"value", d.re_tcoh_product}});
    }
    return json{{"n_trials", s.n_trials},
                {"successes", s.successes},
                {"success_rate", s.success_rate},
                {"mean_t_dist", optional_json(s.mean_t_dist)},
                {"f_end_mean", optional_json(s.f_end_mean)},
                {"f_end_min", optional_json(s.f_end_min)},
                {"mean_slots_used", s.mean_slots_used},
                {"failure_counts",
                 {{"memory_expired", s.memory_expired},
                  {"message_late", s.message_late},
                  {"horizon_exceeded", s.horizon_exceeded}}},
                {"re_tcoh_product", std::move(links)},
                {"t_dist_origin", "first_attempt"}};
}

json to_json(const adversary::DetectionReport& r) {
    // Infinite z-scores (zero-variance baseline) serialise as null.
    return json{{"baseline_mean_qber", r.baseline_mean_qber},
                {"observed_mean_qber", r.observed_mean_qber},
                {"z_score", std::isfinite(r.z_score) ? json(r.z_score) : json(nullptr)},
                {"z_score_sign", r.z_score > 0 ? 1 : (r.z_score < 0 ? -1 : 0)},
                {"flagged", r.flagged},
                {"threshold_sigma", r.threshold_sigma}};
}

void write_trials_csv(std::ostream& os, const std::vector<engine::TrialOutcome>& trials) {
    os << "trial_index,success,failure_reason,slots_used,t_dist_s,f_end\n";
    for (std::size_t i = 0; i < trials.size(); ++i) {
        const auto& t = trials[i];
        os << i << ',' << (t.success ? "true" : "false") << ','
           << (t.failure_reason ? engine::to_string(*t.failure_reason) : "") << ',' << t.slots_used << ','
           << optional_cell(t.t_dist) << ','
           << (t.f_end ? format_number(t.f_end->value()) : std::string()) << '\n';
    }
}

void write_sweep_csv(std::ostream& os, const std::vector<engine::SweepRow>& rows) {
    os << "value,n_trials,success_rate,mean_t_dist_s,f_end_mean,f_end_min,mean_slots_used\n";
    for (const auto& r : rows) {
        const auto& s = r.summary;
        os << format_number(r.value) << ',' << s.n_trials << ',' << format_number(s.success_rate) << ','
           << optional_cell(s.mean_t_dist) << ',' << optional_cell(s.f_end_mean) << ','
           << optional_cell(s.f_end_min) << ',' << format_number(s.mean_slots_used) << '\n';
    }
}

}  // namespace qrnet::report
