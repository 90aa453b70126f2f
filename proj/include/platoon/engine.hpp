#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "platoon/following.hpp"
#include "platoon/model.hpp"

namespace platoon {

struct VehicleSample {
  double x = 0.0;
  double v = 0.0;
  double u = 0.0;       // acceleration applied over [t, t + dt]
  double sigma = 0.0;   // NaN for vehicle 1
  Mode mode = Mode::kUncoupled;
  bool feasible = false;  // whether an uncoupled plan existed at t
};

struct TraceStep {
  double t = 0.0;
  std::vector<VehicleSample> vehicles;
};

/// Samples at t_k = k dt. The last step is the terminal state; its controls
/// were evaluated but never applied.
struct SimTrace {
  double dt = 0.0;
  std::vector<TraceStep> steps;
};

enum class RunStatus { kComplete, kIncomplete, kSafetyViolation };

struct SimSummary {
  RunStatus status = RunStatus::kComplete;
  std::vector<double> taus;
  std::vector<std::optional<double>> Ta;
  std::vector<std::optional<double>> Texit;
  std::optional<double> tau_occ;
  std::vector<double> fuel_cost;
  double fuel_total = 0.0;
  std::optional<double> time_cost;  // tau_1 + tau_occ
  std::optional<std::uint64_t> seed;
  std::vector<std::string> violations;
  double min_sigma = 0.0;          // over all followers and samples
  std::optional<double> cohesion;  // max pairwise speed gap at the last approach
  int regime_warnings = 0;         // capped-speed exits from the coupling set not observed
};

struct SimResult {
  SimTrace trace;
  SimSummary summary;
};

/// Exact motion under constant acceleration `u` for `dt`, with the speed
/// clamped to [0, vM]: the acceleration drops to 0 at the instant a bound is
/// reached and the position integral is split there.
struct Advance {
  double x = 0.0;
  double v = 0.0;
  double active = 0.0;  // time during which `u` was actually in force
};
Advance advance(double x, double v, double u, double dt, const RoadParams& road);

struct StepOutput {
  std::vector<VehicleState> next;
  std::vector<ControlDecision> controls;
};

/// One sampled step of the whole string. Controllers are evaluated in
/// ascending vehicle order (each follower sees its leader's applied
/// acceleration), then every vehicle is advanced exactly. Throws
/// SafetyViolation when a safety ratio is below 1.
StepOutput step(std::span<const VehicleState> states, double t, const RoadParams& road,
                double dt);

struct Events {
  std::vector<std::optional<double>> Ta;
  std::vector<std::optional<double>> Texit;
};

/// Approach (x = 0) and exit (x = Delta + L) times by linear interpolation
/// between the samples that bracket each crossing.
Events detect_events(const SimTrace& trace, const RoadParams& road);

struct FuelCost {
  std::vector<double> per_vehicle;
  double total = 0.0;
};

/// Integral of |u| up to each vehicle's exit time (or over the whole trace
/// if the vehicle never exits). Each step contributes |u| times the time the
/// acceleration was actually in force, so the value equals the speed's total
/// variation.
FuelCost fuel_cost(const SimTrace& trace, std::span<const std::optional<double>> Texit);

/// Simulates the scenario until every vehicle has left the target region or
/// t_end is reached. Intersection-manager scenarios are scheduled first with
/// tau_1 = Te1. Throws DomainError when the scenario fails validation.
SimResult run(const Scenario& s);

/// Per-vehicle approach times prescribed for a scenario (explicit or
/// scheduled).
std::vector<double> resolve_taus(const Scenario& s);

struct GeneratorOptions {
  int n = 8;
  TauPolicy tau_policy{TauMode::kIntersectionManager, 1.0};
  double dt = 0.01;
  double t_end = 150.0;
  double extra_offset_max = 20.0;    // head placed this much (at most) before the threshold
  double explicit_tau_spread = 10.0; // explicit mode: tau_j = taue_j + U[0, spread]
};

/// Random valid scenario: speeds U[0.3, 0.9] vM, gaps D(v_lead, v_fol)
/// U[1.05, 3], and the whole string shifted behind the feasibility threshold.
Scenario generate_scenario(const RoadParams& road, std::uint64_t seed,
                           const GeneratorOptions& opt = {});

}  // namespace platoon
