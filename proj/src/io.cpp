#include "platoon/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace platoon {

using nlohmann::json;

namespace {

double number(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw ScenarioFormatError(where + "." + key + ": missing");
  const auto& v = obj.at(key);
  if (!v.is_number()) throw ScenarioFormatError(where + "." + key + ": expected a number");
  return v.get<double>();
}

json optional_number(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string status_name(RunStatus s) {
  switch (s) {
    case RunStatus::kComplete: return "complete";
    case RunStatus::kIncomplete: return "incomplete";
    case RunStatus::kSafetyViolation: return "safety_violation";
  }
  return "unknown";
}

}  // namespace

Scenario scenario_from_json(const json& doc) {
  if (!doc.is_object()) throw ScenarioFormatError("document: expected an object");
  Scenario s;

  if (!doc.contains("road") || !doc["road"].is_object()) {
    throw ScenarioFormatError("road: missing or not an object");
  }
  const auto& r = doc["road"];
  s.road.L = number(r, "L", "road");
  s.road.Delta = number(r, "Delta", "road");
  s.road.vM = number(r, "vM", "road");
  s.road.um = number(r, "um", "road");
  s.road.uM = number(r, "uM", "road");
  s.road.vnom = number(r, "vnom", "road");
  s.road.sigma0 = number(r, "sigma0", "road");

  if (!doc.contains("vehicles") || !doc["vehicles"].is_array()) {
    throw ScenarioFormatError("vehicles: missing or not an array");
  }
  const auto& vs = doc["vehicles"];
  for (std::size_t i = 0; i < vs.size(); ++i) {
    const std::string where = "vehicles[" + std::to_string(i) + "]";
    if (!vs[i].is_object()) throw ScenarioFormatError(where + ": expected an object");
    VehicleState v;
    v.x = number(vs[i], "x0", where);
    v.v = number(vs[i], "v0", where);
    if (vs[i].contains("tau") && !vs[i]["tau"].is_null()) v.tau = number(vs[i], "tau", where);
    s.vehicles.push_back(v);
  }

  if (!doc.contains("tau_mode")) throw ScenarioFormatError("tau_mode: missing");
  const auto& tm = doc["tau_mode"];
  std::string mode;
  if (tm.is_string()) {
    mode = tm.get<std::string>();
  } else if (tm.is_object() && tm.contains("mode") && tm["mode"].is_string()) {
    mode = tm["mode"].get<std::string>();
  } else {
    throw ScenarioFormatError("tau_mode: expected \"explicit\" or {\"mode\": \"im\", \"A\": ...}");
  }
  if (mode == "explicit") {
    s.tau_policy = {TauMode::kExplicit, 0.0};
  } else if (mode == "im") {
    if (!tm.is_object()) throw ScenarioFormatError("tau_mode.A: missing");
    s.tau_policy = {TauMode::kIntersectionManager, number(tm, "A", "tau_mode")};
  } else {
    throw ScenarioFormatError("tau_mode.mode: unknown value \"" + mode + "\"");
  }

  s.dt = number(doc, "dt", "document");
  s.t_end = number(doc, "t_end", "document");
  if (doc.contains("seed") && !doc["seed"].is_null()) {
    const auto& seed = doc["seed"];
    if (!seed.is_number_integer() || (!seed.is_number_unsigned() && seed.get<std::int64_t>() < 0)) {
      throw ScenarioFormatError("document.seed: expected a nonnegative integer");
    }
    s.seed = doc["seed"].get<std::uint64_t>();
  }
  return s;
}

json scenario_to_json(const Scenario& s) {
  json doc;
  doc["road"] = {{"L", s.road.L},       {"Delta", s.road.Delta}, {"vM", s.road.vM},
                 {"um", s.road.um},     {"uM", s.road.uM},       {"vnom", s.road.vnom},
                 {"sigma0", s.road.sigma0}};
  json vs = json::array();
  for (const auto& v : s.vehicles) {
    json o = {{"x0", v.x}, {"v0", v.v}};
    if (v.tau) o["tau"] = *v.tau;
    vs.push_back(o);
  }
  doc["vehicles"] = vs;
  if (s.tau_policy.mode == TauMode::kExplicit) {
    doc["tau_mode"] = {{"mode", "explicit"}};
  } else {
    doc["tau_mode"] = {{"mode", "im"}, {"A", s.tau_policy.A}};
  }
  doc["dt"] = s.dt;
  doc["t_end"] = s.t_end;
  if (s.seed) doc["seed"] = *s.seed;
  return doc;
}

Scenario parse_scenario(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ScenarioFormatError("syntax error at line " + std::to_string(line) + ", column " +
                              std::to_string(col) + ": " + e.what());
  }
  return scenario_from_json(doc);
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioFormatError("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

void write_trace_csv(std::ostream& os, const SimTrace& trace) {
  os << "t,j,x,v,u,sigma,mode\n";
  for (const auto& row : trace.steps) {
    for (std::size_t j = 0; j < row.vehicles.size(); ++j) {
      const auto& v = row.vehicles[j];
      os << fmt(row.t) << ',' << (j + 1) << ',' << fmt(v.x) << ',' << fmt(v.v) << ','
         << (std::isnan(v.u) ? std::string() : fmt(v.u)) << ','
         << (std::isnan(v.sigma) ? std::string() : fmt(v.sigma)) << ','
         << static_cast<int>(v.mode) << '\n';
    }
  }
}

json summary_to_json(const SimSummary& s) {
  json Ta = json::array();
  json Texit = json::array();
  for (const auto& t : s.Ta) Ta.push_back(optional_number(t));
  for (const auto& t : s.Texit) Texit.push_back(optional_number(t));
  json doc;
  doc["status"] = status_name(s.status);
  doc["complete"] = s.status == RunStatus::kComplete;
  doc["taus"] = s.taus;
  doc["Ta"] = Ta;
  doc["Texit"] = Texit;
  doc["tau_occ"] = optional_number(s.tau_occ);
  doc["fuel_cost"] = s.fuel_cost;
  doc["fuel_total"] = s.fuel_total;
  doc["time_cost"] = optional_number(s.time_cost);
  doc["seed"] = s.seed ? json(*s.seed) : json(nullptr);
  doc["violations"] = s.violations;
  doc["min_sigma"] = std::isfinite(s.min_sigma) ? json(s.min_sigma) : json(nullptr);
  doc["cohesion"] = optional_number(s.cohesion);
  doc["regime_warnings"] = s.regime_warnings;
  return doc;
}

json schedule_to_json(const ScheduleReport& r) {
  return {{"Te1", r.Te1},   {"taus", r.taus},           {"taue", r.taue}, {"Tnom", r.Tnom},
          {"Tiat", r.Tiat}, {"occ_bound", r.occ_bound}, {"A", r.A}};
}

json tiat_to_json(const TiatReport& r) {
  return {{"Tnom", r.Tnom},
          {"v_lower", r.v_lower},
          {"Tiat_numeric", r.Tiat_numeric},
          {"Tiat_analytic", r.Tiat_analytic},
          {"Tfol_plus_variant", r.Tfol_plus_variant},
          {"occ_bound", r.occ_bound},
          {"N", r.n}};
}

}  // namespace platoon
