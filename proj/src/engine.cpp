#include "platoon/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "platoon/safety.hpp"
#include "platoon/scheduler.hpp"
#include "platoon/uncoupled.hpp"

namespace platoon {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kSpeedFloorTol = 1e-6;

// Uniform in [0, 1) from the raw 64-bit engine output, so generated scenarios
// do not depend on the standard library's distribution implementation.
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double uniform(std::mt19937_64& rng, double lo, double hi) { return lo + (hi - lo) * unit(rng); }

std::optional<double> crossing(const SimTrace& trace, std::size_t j, double level) {
  const auto& steps = trace.steps;
  for (std::size_t k = 0; k + 1 < steps.size(); ++k) {
    const double x0 = steps[k].vehicles[j].x;
    const double x1 = steps[k + 1].vehicles[j].x;
    if (x0 < level && x1 >= level) {
      return steps[k].t + (steps[k + 1].t - steps[k].t) * (level - x0) / (x1 - x0);
    }
  }
  if (!steps.empty() && steps.front().vehicles[j].x >= level) return steps.front().t;
  return std::nullopt;
}

TraceStep record(std::span<const VehicleState> states, double t,
                 const std::vector<ControlDecision>* controls, const RoadParams& road) {
  TraceStep row;
  row.t = t;
  row.vehicles.resize(states.size());
  for (std::size_t i = 0; i < states.size(); ++i) {
    auto& out = row.vehicles[i];
    out.x = states[i].x;
    out.v = states[i].v;
    out.sigma = kNaN;
    if (i > 0 && states[i - 1].x > states[i].x) {
      out.sigma = safety_ratio(states[i - 1].x, states[i].x, states[i - 1].v, states[i].v, road);
    }
    if (controls) {
      const auto& c = (*controls)[i];
      out.u = c.accel;
      out.mode = c.mode;
      out.feasible = c.feasible;
    } else {
      out.u = kNaN;
    }
  }
  return row;
}

}  // namespace

Advance advance(double x, double v, double u, double dt, const RoadParams& road) {
  Advance a{x, v, u == 0.0 ? 0.0 : dt};
  if (u > 0.0 && v + u * dt > road.vM) {
    const double ts = std::max(0.0, (road.vM - v) / u);
    a.x = x + v * ts + 0.5 * u * ts * ts + road.vM * (dt - ts);
    a.v = road.vM;
    a.active = ts;
  } else if (u < 0.0 && v + u * dt < 0.0) {
    const double ts = std::max(0.0, -v / u);
    a.x = x + v * ts + 0.5 * u * ts * ts;
    a.v = 0.0;
    a.active = ts;
  } else {
    a.x = x + v * dt + 0.5 * u * dt * dt;
    a.v = std::clamp(v + u * dt, 0.0, road.vM);
  }
  return a;
}

StepOutput step(std::span<const VehicleState> states, double t, const RoadParams& road,
                double dt) {
  if (!(dt > 0.0)) throw DomainError("step: dt must be positive");
  StepOutput out;
  out.controls.reserve(states.size());
  out.next.assign(states.begin(), states.end());
  for (std::size_t i = 0; i < states.size(); ++i) {
    const auto& veh = states[i];
    if (!veh.tau) throw DomainError("step: prescribed approach time unset");
    std::optional<LeaderInfo> leader;
    if (i > 0) leader = LeaderInfo{states[i - 1].x, states[i - 1].v, out.controls[i - 1].accel};
    out.controls.push_back(local_control(*veh.tau, t, veh.x, veh.v, leader, road, dt,
                                         static_cast<int>(i) + 1));
  }
  for (std::size_t i = 0; i < states.size(); ++i) {
    double v = states[i].v;
    if (std::abs(v - road.vM) <= kSpeedCapTol) v = road.vM;
    const auto a = advance(states[i].x, v, out.controls[i].accel, dt, road);
    out.next[i].x = a.x;
    out.next[i].v = a.v;
  }
  return out;
}

Events detect_events(const SimTrace& trace, const RoadParams& road) {
  Events ev;
  const std::size_t n = trace.steps.empty() ? 0 : trace.steps.front().vehicles.size();
  for (std::size_t j = 0; j < n; ++j) {
    ev.Ta.push_back(crossing(trace, j, 0.0));
    ev.Texit.push_back(crossing(trace, j, road.Delta + road.L));
  }
  return ev;
}

FuelCost fuel_cost(const SimTrace& trace, std::span<const std::optional<double>> Texit) {
  FuelCost fc;
  const std::size_t n = trace.steps.empty() ? 0 : trace.steps.front().vehicles.size();
  fc.per_vehicle.assign(n, 0.0);
  for (std::size_t k = 0; k + 1 < trace.steps.size(); ++k) {
    const auto& now = trace.steps[k];
    const auto& nxt = trace.steps[k + 1];
    for (std::size_t j = 0; j < n; ++j) {
      const double u = std::abs(now.vehicles[j].u);
      if (!(u > 0.0)) continue;
      double window = nxt.t - now.t;
      if (j < Texit.size() && Texit[j]) window = std::min(window, *Texit[j] - now.t);
      if (window <= 0.0) continue;
      // Speed change over the step is |u| times the time u was in force.
      const double dv = std::abs(nxt.vehicles[j].v - now.vehicles[j].v);
      fc.per_vehicle[j] += std::min(dv, u * window);
    }
  }
  for (double c : fc.per_vehicle) fc.total += c;
  return fc;
}

std::vector<double> resolve_taus(const Scenario& s) {
  if (s.tau_policy.mode == TauMode::kIntersectionManager) {
    return make_schedule(s, s.tau_policy.A).taus;
  }
  std::vector<double> taus;
  for (const auto& veh : s.vehicles) {
    if (!veh.tau) throw DomainError("explicit scenario lacks a prescribed approach time");
    taus.push_back(*veh.tau);
  }
  return taus;
}

SimResult run(const Scenario& s) {
  if (const auto problems = validate_scenario(s); !problems.empty()) {
    std::ostringstream os;
    os << "invalid scenario:";
    for (const auto& p : problems) os << " [vehicle " << p.vehicle << "] " << p.condition << ';';
    throw DomainError(os.str());
  }
  const RoadParams& road = s.road;
  const std::size_t n = s.vehicles.size();

  SimResult res;
  auto& trace = res.trace;
  auto& sum = res.summary;
  trace.dt = s.dt;
  sum.seed = s.seed;
  sum.taus = resolve_taus(s);

  std::vector<VehicleState> states = s.vehicles;
  for (std::size_t i = 0; i < n; ++i) states[i].tau = sum.taus[i];

  const double exit_line = road.Delta + road.L;
  for (long long k = 0;; ++k) {
    const double t = static_cast<double>(k) * s.dt;
    StepOutput out;
    try {
      out = step(states, t, road, s.dt);
    } catch (const SafetyViolation& e) {
      trace.steps.push_back(record(states, t, nullptr, road));
      sum.status = RunStatus::kSafetyViolation;
      std::ostringstream os;
      os << "t=" << t << ": " << e.what();
      sum.violations.push_back(os.str());
      break;
    }
    trace.steps.push_back(record(states, t, &out.controls, road));
    const bool all_out = std::all_of(states.begin(), states.end(),
                                     [&](const VehicleState& v) { return v.x >= exit_line; });
    if (all_out) break;
    if (t >= s.t_end) {
      sum.status = RunStatus::kIncomplete;
      sum.violations.push_back("t_end reached before every vehicle exited");
      break;
    }
    states = std::move(out.next);
  }

  const Events ev = detect_events(trace, road);
  sum.Ta = ev.Ta;
  sum.Texit = ev.Texit;
  const FuelCost fc = fuel_cost(trace, ev.Texit);
  sum.fuel_cost = fc.per_vehicle;
  sum.fuel_total = fc.total;
  if (n > 0 && sum.Ta.front() && sum.Texit.back()) {
    sum.tau_occ = *sum.Texit.back() - *sum.Ta.front();
    sum.time_cost = sum.taus.front() + *sum.tau_occ;
  }

  sum.min_sigma = std::numeric_limits<double>::infinity();
  for (const auto& row : trace.steps) {
    for (std::size_t j = 1; j < n; ++j) sum.min_sigma = std::min(sum.min_sigma, row.vehicles[j].sigma);
  }

  for (std::size_t j = 0; j < n; ++j) {
    const int idx = static_cast<int>(j) + 1;
    if (sum.Ta[j] && *sum.Ta[j] < sum.taus[j] - 2.0 * s.dt) {
      std::ostringstream os;
      os << "vehicle " << idx << " approached at " << *sum.Ta[j] << " before its prescribed time "
         << sum.taus[j];
      sum.violations.push_back(os.str());
    }
    if (!sum.Ta[j]) continue;
    const double until = sum.Texit[j].value_or(std::numeric_limits<double>::infinity());
    for (const auto& row : trace.steps) {
      if (row.t < *sum.Ta[j] || row.t > until) continue;
      if (row.vehicles[j].v < road.vnom - kSpeedFloorTol) {
        std::ostringstream os;
        os << "vehicle " << idx << " below vnom after approach (v=" << row.vehicles[j].v
           << " at t=" << row.t << ")";
        sum.violations.push_back(os.str());
        break;
      }
    }
  }

  // A follower whose last exit from the coupling set happened while no
  // uncoupled plan existed should reach the target at the speed cap. Exits
  // followed by a re-entry are sampling chatter at sigma = sigma0 and are
  // not counted.
  for (std::size_t j = 1; j < n; ++j) {
    bool watching = false;
    for (std::size_t k = 1; k < trace.steps.size(); ++k) {
      const auto& prev = trace.steps[k - 1].vehicles[j];
      const auto& cur = trace.steps[k].vehicles[j];
      if (cur.x >= 0.0) {
        if (watching && std::abs(cur.v - road.vM) > 1e-6) ++sum.regime_warnings;
        break;
      }
      if (prev.mode == Mode::kSafeFollowing && cur.mode == Mode::kUncoupled) {
        watching = !prev.feasible;
      } else if (cur.mode == Mode::kSafeFollowing) {
        watching = false;
      }
    }
  }

  if (n > 0 && sum.Ta.back()) {
    for (const auto& row : trace.steps) {
      if (row.t < *sum.Ta.back()) continue;
      double lo = std::numeric_limits<double>::infinity();
      double hi = -lo;
      for (const auto& v : row.vehicles) {
        lo = std::min(lo, v.v);
        hi = std::max(hi, v.v);
      }
      sum.cohesion = hi - lo;
      break;
    }
  }
  return res;
}

Scenario generate_scenario(const RoadParams& road, std::uint64_t seed,
                           const GeneratorOptions& opt) {
  std::mt19937_64 rng(seed);
  Scenario s;
  s.road = road;
  s.dt = opt.dt;
  s.t_end = opt.t_end;
  s.seed = seed;
  s.tau_policy = opt.tau_policy;

  const int n = std::max(opt.n, 1);
  std::vector<double> v(n);
  for (auto& vj : v) vj = uniform(rng, 0.3, 0.9) * road.vM;
  std::vector<double> x(n, 0.0);
  for (int j = 1; j < n; ++j) {
    x[j] = x[j - 1] - safe_following_distance(v[j - 1], v[j], road) * uniform(rng, 1.05, 3.0);
  }
  const double head = suff_cond_threshold(road) - uniform(rng, 0.0, opt.extra_offset_max);
  for (int j = n - 1; j >= 0; --j) x[j] += head;

  s.vehicles.resize(n);
  for (int j = 0; j < n; ++j) {
    s.vehicles[j].x = x[j];
    s.vehicles[j].v = v[j];
    if (opt.tau_policy.mode == TauMode::kExplicit) {
      s.vehicles[j].tau =
          tau_earliest(x[j], v[j], road) + uniform(rng, 0.0, opt.explicit_tau_spread);
    }
  }
  return s;
}

}  // namespace platoon
