#pragma once

// CSV and JSON renderings of results. Numbers use the shortest decimal form
// that round-trips; absent optionals are empty CSV cells and JSON nulls.

#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qrnet/adversary.hpp"
#include "qrnet/engine.hpp"
#include "qrnet/timing.hpp"

namespace qrnet::report {

std::string format_number(double x);
std::string format_number(std::int64_t x);

nlohmann::json to_json(const timing::FeasibilityResult& r);
nlohmann::json to_json(const engine::RunSummary& s);
nlohmann::json to_json(const adversary::DetectionReport& r);

void write_trials_csv(std::ostream& os, const std::vector<engine::TrialOutcome>& trials);
void write_sweep_csv(std::ostream& os, const std::vector<engine::SweepRow>& rows);

}  // namespace qrnet::report
