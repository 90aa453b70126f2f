#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "platoon/engine.hpp"
#include "platoon/model.hpp"
#include "platoon/scheduler.hpp"

namespace platoon {

/// Malformed scenario document. The message names the offending field (and
/// line/column for syntax errors).
class ScenarioFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Scenario document:
//   { "road": {L, Delta, vM, um, uM, vnom, sigma0},
//     "vehicles": [{"x0": .., "v0": .., "tau": ..?}, ...],
//     "tau_mode": {"explicit"} | {"im", A}   (written as {"mode": "...", "A": ..}),
//     "dt": .., "t_end": .., "seed": ..? }
Scenario scenario_from_json(const nlohmann::json& doc);
nlohmann::json scenario_to_json(const Scenario& s);
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::filesystem::path& path);

/// CSV with header "t,j,x,v,u,sigma,mode"; one row per vehicle per sample,
/// j is 1-based, sigma is empty for vehicle 1, mode is 0 or 1.
void write_trace_csv(std::ostream& os, const SimTrace& trace);

nlohmann::json summary_to_json(const SimSummary& s);
nlohmann::json schedule_to_json(const ScheduleReport& r);
nlohmann::json tiat_to_json(const TiatReport& r);

}  // namespace platoon
