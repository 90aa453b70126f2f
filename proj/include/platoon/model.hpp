#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace platoon {

/// Thrown when an argument lies outside the domain of a function
/// (negative speed, overlapped vehicles, broken controller regime).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Shared physical and regulatory constants of the road and the fleet.
/// SI units throughout.
struct RoadParams {
  double L = 4.0;          // vehicle length
  double Delta = 12.0;     // target region length
  double vM = 16.667;      // speed limit
  double um = -4.0;        // minimum (braking) acceleration, strictly negative
  double uM = 3.0;         // maximum acceleration, strictly positive
  double vnom = 13.333;    // minimum speed at and after approach
  double sigma0 = 1.2;     // coupling-set threshold on the safety ratio

  /// Returns a description of every violated invariant; empty when valid.
  std::vector<std::string> problems() const;
  /// Throws DomainError listing the problems, if any.
  void require_valid() const;
};

/// The parameter set used throughout the simulations of the reference design.
inline RoadParams table1_params() { return RoadParams{}; }

struct VehicleState {
  double x = 0.0;                // front position, negative before the target
  double v = 0.0;                // speed
  std::optional<double> tau;     // prescribed approach time, unset until scheduled
};

enum class TauMode { kExplicit, kIntersectionManager };

struct TauPolicy {
  TauMode mode = TauMode::kExplicit;
  double A = 1.0;  // aggressiveness, only used by the intersection manager
};

struct Scenario {
  RoadParams road;
  std::vector<VehicleState> vehicles;  // [0] is vehicle 1, closest to the target
  TauPolicy tau_policy;
  double dt = 0.01;
  double t_end = 60.0;
  std::optional<std::uint64_t> seed;
};

/// Inputs of the switching law for a follower: (leader speed, follower speed,
/// safety ratio).
struct CouplingState {
  double v_lead = 0.0;
  double v_fol = 0.0;
  double sigma = 1.0;
};

/// One constant-acceleration piece of a velocity profile.
struct PlanSegment {
  double duration = 0.0;
  double accel = 0.0;
};

/// Piecewise-constant-rate velocity profile starting at `v0` at relative
/// time 0. Segments of zero duration are never stored.
class VelocityPlan {
 public:
  VelocityPlan() = default;
  explicit VelocityPlan(double v0) : v0_(v0) {}

  void append(double duration, double accel);

  double initial_speed() const { return v0_; }
  double terminal_speed() const;
  double duration() const;
  /// Distance covered over the whole plan.
  double distance() const;
  /// Total variation of the speed, equal to the integral of |u|.
  double cost() const;
  /// Acceleration in force at relative time `s` (right-continuous); 0 past the end.
  double accel_at(double s) const;
  double speed_at(double s) const;
  double distance_at(double s) const;
  /// (time, speed) pairs at every segment boundary, starting at (0, v0).
  std::vector<std::pair<double, double>> breakpoints() const;
  const std::vector<PlanSegment>& segments() const { return segments_; }
  bool empty() const { return segments_.empty(); }

 private:
  double v0_ = 0.0;
  std::vector<PlanSegment> segments_;
};

/// A violated scenario precondition. `vehicle` is 1-based; 0 means the
/// problem is not tied to a single vehicle.
struct Violation {
  int vehicle = 0;
  std::string condition;
};

/// Position below which a vehicle can always stop, wait arbitrarily long and
/// re-accelerate to the minimum approach speed before reaching the target.
double suff_cond_threshold(const RoadParams& road);

/// Checks every scenario hypothesis of the safety and approach-time
/// guarantees. Never throws; violations are returned as data.
std::vector<Violation> validate_scenario(const Scenario& s);

}  // namespace platoon
