#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "platoon/engine.hpp"
#include "platoon/io.hpp"
#include "platoon/model.hpp"
#include "platoon/scheduler.hpp"

namespace platoon::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Common {
  std::string scenario;
  std::optional<std::uint64_t> seed;
  std::optional<double> dt;
  std::optional<double> t_end;
  std::string out = "out";
  bool force = false;
};

// Reported as exit code 1 by the caller.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("scenario", c.scenario, "Scenario JSON file");
  cmd->add_option("--seed", c.seed, "Use the generated scenario for this seed instead of a file");
  cmd->add_option("--dt", c.dt, "Integration step [s]")->check(CLI::PositiveNumber);
  cmd->add_option("--t-end", c.t_end, "Simulation horizon [s]")->check(CLI::PositiveNumber);
  cmd->add_option("--out", c.out, "Output root directory");
  cmd->add_flag("--force", c.force, "Overwrite existing output");
}

std::string stem_of(const Common& c) {
  if (!c.scenario.empty()) return fs::path(c.scenario).stem().string();
  return "seed-" + std::to_string(*c.seed);
}

Scenario load(const Common& c) {
  Scenario s;
  if (!c.scenario.empty()) {
    s = load_scenario(c.scenario);
  } else if (c.seed) {
    s = generate_scenario(table1_params(), *c.seed);
  } else {
    throw UsageError("a scenario file or --seed is required");
  }
  if (c.dt) s.dt = *c.dt;
  if (c.t_end) s.t_end = *c.t_end;
  return s;
}

// out/<stem>/<command>, refusing to reuse a non-empty directory unless forced.
fs::path prepare_dir(const Common& c, const std::string& command) {
  const fs::path dir = fs::path(c.out) / stem_of(c) / command;
  if (fs::exists(dir) && !fs::is_empty(dir)) {
    if (!c.force) throw UsageError(dir.string() + " exists; pass --force to overwrite");
    fs::remove_all(dir);
  }
  fs::create_directories(dir);
  return dir;
}

void write_json(const fs::path& path, const json& doc) {
  std::ofstream f(path);
  f << doc.dump(2) << '\n';
}

void print_violations(const std::vector<Violation>& vs, std::ostream& err) {
  for (const auto& v : vs) {
    if (v.vehicle > 0) {
      err << "vehicle " << v.vehicle << ": " << v.condition << '\n';
    } else {
      err << v.condition << '\n';
    }
  }
}

int exit_for(RunStatus s) {
  switch (s) {
    case RunStatus::kComplete: return kOk;
    case RunStatus::kSafetyViolation: return kSafetyViolation;
    case RunStatus::kIncomplete: return kIncomplete;
  }
  return kBadInput;
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> grid;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double a = 0.0;
    try {
      a = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size() || !(a >= 0.0 && a <= 1.0)) {
      throw UsageError("--A-grid: bad entry \"" + item + "\" (expected numbers in [0, 1])");
    }
    grid.push_back(a);
  }
  if (grid.empty()) throw UsageError("--A-grid: empty");
  std::sort(grid.begin(), grid.end());
  return grid;
}

int cmd_simulate(const Common& c, std::ostream& out, std::ostream& err) {
  const Scenario s = load(c);
  if (const auto problems = validate_scenario(s); !problems.empty()) {
    print_violations(problems, err);
    return kBadInput;
  }
  const SimResult r = run(s);
  const fs::path dir = prepare_dir(c, "simulate");
  {
    std::ofstream f(dir / "trace.csv");
    write_trace_csv(f, r.trace);
  }
  write_json(dir / "summary.json", summary_to_json(r.summary));
  for (const auto& v : r.summary.violations) err << v << '\n';
  out << "wrote " << (dir / "trace.csv").string() << " and " << (dir / "summary.json").string()
      << '\n';
  return exit_for(r.summary.status);
}

int cmd_schedule(const Common& c, std::optional<double> A, std::ostream& out,
                 std::ostream& err) {
  Scenario s = load(c);
  if (A) {
    s.tau_policy = {TauMode::kIntersectionManager, *A};
  } else if (s.tau_policy.mode != TauMode::kIntersectionManager) {
    err << "schedule: scenario uses explicit approach times; pass --A\n";
    return kBadInput;
  }
  if (const auto problems = validate_scenario(s); !problems.empty()) {
    print_violations(problems, err);
    return kBadInput;
  }
  const json doc = schedule_to_json(make_schedule(s, s.tau_policy.A));
  const fs::path dir = prepare_dir(c, "schedule");
  write_json(dir / "schedule.json", doc);
  out << doc.dump(2) << '\n';
  return kOk;
}

struct SweepRow {
  double A = 0.0;
  std::optional<double> tau1;
  std::optional<double> tau_occ;
  std::optional<double> time_cost;
  std::optional<double> fuel;
  std::string status;
};

SweepRow sweep_row(Scenario s, double A) {
  SweepRow row;
  row.A = A;
  s.tau_policy = {TauMode::kIntersectionManager, A};
  try {
    const SimResult r = run(s);
    row.tau1 = r.summary.taus.front();
    row.tau_occ = r.summary.tau_occ;
    row.time_cost = r.summary.time_cost;
    row.fuel = r.summary.fuel_total;
    switch (r.summary.status) {
      case RunStatus::kComplete: row.status = "complete"; break;
      case RunStatus::kIncomplete: row.status = "incomplete"; break;
      case RunStatus::kSafetyViolation: row.status = "safety_violation"; break;
    }
  } catch (const std::exception& e) {
    row.status = std::string("error: ") + e.what();
  }
  return row;
}

std::string cell(const std::optional<double>& v) {
  if (!v) return "";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", *v);
  return buf;
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + '"';
}

int cmd_sweep(const Common& c, const std::string& grid_text, std::ostream& out,
              std::ostream& err) {
  const std::vector<double> grid = parse_grid(grid_text);
  Scenario s = load(c);
  s.tau_policy = {TauMode::kIntersectionManager, grid.front()};
  if (const auto problems = validate_scenario(s); !problems.empty()) {
    print_violations(problems, err);
    return kBadInput;
  }
  const fs::path dir = prepare_dir(c, "sweep");

  std::vector<std::future<SweepRow>> jobs;
  for (double A : grid) jobs.push_back(std::async(std::launch::async, sweep_row, s, A));
  std::vector<SweepRow> rows;
  for (auto& j : jobs) rows.push_back(j.get());

  {
    std::ofstream f(dir / "sweep.csv");
    f << "A,tau1,tau_occ,C_T,fuel,status\n";
    for (const auto& r : rows) {
      f << cell(r.A) << ',' << cell(r.tau1) << ',' << cell(r.tau_occ) << ','
        << cell(r.time_cost) << ',' << cell(r.fuel) << ',' << csv_quote(r.status) << '\n';
    }
  }

  // Event times jitter at the step scale, hence the 2 dt tolerance.
  const double tol = 2.0 * s.dt;
  std::vector<std::string> trend;
  for (std::size_t k = 1; k < rows.size(); ++k) {
    const auto& a = rows[k - 1];
    const auto& b = rows[k];
    if (a.tau1 && b.tau1 && *b.tau1 > *a.tau1 + tol) {
      trend.push_back("tau1 increases from A=" + cell(a.A) + " to A=" + cell(b.A));
    }
    if (a.tau_occ && b.tau_occ && *b.tau_occ < *a.tau_occ - tol) {
      trend.push_back("tau_occ decreases from A=" + cell(a.A) + " to A=" + cell(b.A));
    }
  }
  json report;
  report["rows"] = rows.size();
  report["failed_rows"] = std::count_if(rows.begin(), rows.end(),
                                        [](const SweepRow& r) { return r.status != "complete"; });
  report["trend_violations"] = trend;
  write_json(dir / "sweep_report.json", report);
  for (const auto& r : rows) {
    if (r.status != "complete") err << "A=" << cell(r.A) << ": " << r.status << '\n';
  }
  for (const auto& t : trend) err << "trend: " << t << '\n';
  out << "wrote " << (dir / "sweep.csv").string() << '\n';
  return kOk;
}

int cmd_validate(const Common& c, std::ostream& out, std::ostream& err) {
  const Scenario s = load(c);
  const auto problems = validate_scenario(s);
  if (problems.empty()) {
    out << "valid\n";
    return kOk;
  }
  print_violations(problems, err);
  return kBadInput;
}

int cmd_tiat(const std::string& scenario, int n, std::ostream& out) {
  const RoadParams road = scenario.empty() ? table1_params() : load_scenario(scenario).road;
  road.require_valid();
  out << tiat_to_json(tiat_report(road, n)).dump(2) << '\n';
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Platoon approach simulator"};
  app.require_subcommand(1);

  Common sim, sched, sweep, val;
  auto* simulate = app.add_subcommand("simulate", "Run a scenario; write trace.csv and summary.json");
  add_common(simulate, sim);

  std::optional<double> A;
  auto* schedule = app.add_subcommand("schedule", "Compute the intersection-manager schedule");
  add_common(schedule, sched);
  schedule->add_option("--A", A, "Aggressiveness in [0, 1]")->check(CLI::Range(0.0, 1.0));

  std::string grid = "0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1";
  auto* sweep_cmd = app.add_subcommand("sweep", "Schedule and simulate over a grid of A");
  add_common(sweep_cmd, sweep);
  sweep_cmd->add_option("--A-grid", grid, "Comma-separated aggressiveness values");

  auto* validate = app.add_subcommand("validate", "Check scenario preconditions");
  add_common(validate, val);

  std::string tiat_scenario;
  int n = 8;
  auto* tiat = app.add_subcommand("tiat", "Print Tnom, v_lower, Tiat (both forms) and the occupancy bound");
  tiat->add_option("scenario", tiat_scenario, "Scenario file supplying road parameters (default: reference values)");
  tiat->add_option("-N,--N", n, "String length")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kBadInput;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(sim, out, err);
    if (schedule->parsed()) return cmd_schedule(sched, A, out, err);
    if (sweep_cmd->parsed()) return cmd_sweep(sweep, grid, out, err);
    if (validate->parsed()) return cmd_validate(val, out, err);
    if (tiat->parsed()) return cmd_tiat(tiat_scenario, n, out);
  } catch (const ScenarioFormatError& e) {
    err << "malformed scenario: " << e.what() << '\n';
  } catch (const UsageError& e) {
    err << e.what() << '\n';
  } catch (const DomainError& e) {
    err << e.what() << '\n';
  } catch (const fs::filesystem_error& e) {
    err << e.what() << '\n';
  }
  return kBadInput;
}

}  // namespace platoon::cli
