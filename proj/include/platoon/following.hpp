#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "platoon/model.hpp"

namespace platoon {

/// Serialized as 0 / 1 in traces.
enum class Mode : int { kUncoupled = 0, kSafeFollowing = 1 };

/// Raised when a follower's safety ratio has dropped below 1.
class SafetyViolation : public std::runtime_error {
 public:
  SafetyViolation(int vehicle, double sigma, const std::string& what)
      : std::runtime_error(what), vehicle_(vehicle), sigma_(sigma) {}
  int vehicle() const { return vehicle_; }
  double sigma() const { return sigma_; }

 private:
  int vehicle_;
  double sigma_;
};

/// Safety ratios in [1 - kSigmaSlack, 1) are rounding noise of the sampled
/// simulation and are treated as 1; anything lower is a violation.
inline constexpr double kSigmaSlack = 1e-6;

/// Speeds within this distance of vM are snapped onto vM before the
/// switching law is evaluated.
inline constexpr double kSpeedCapTol = 1e-9;

/// Unsaturated safe-following controller. Holds the safety ratio constant
/// while the follower is at least as fast as its leader:
///   v_fol = 0: u_lead
///   v_fol > 0: ((v_lead / v_fol) (1 + sigma u_lead / -um) - 1) (-um / sigma)
/// Requires v_fol >= v_lead >= 0, u_lead in [um, uM], sigma in [1, sigma0];
/// throws DomainError otherwise.
double g_us(const CouplingState& z, double u_lead, const RoadParams& road);

/// Safe-following controller: min{g_uc, g_us}. `dt` is forwarded to g_uc.
double g_sf(double tau, double t, double x, const CouplingState& z, double u_lead,
            const RoadParams& road, double dt = 0.0);

/// What a follower knows about its leader within one control step.
struct LeaderInfo {
  double x = 0.0;
  double v = 0.0;
  double u = 0.0;  // leader's applied acceleration for the same step
};

struct ControlDecision {
  double accel = 0.0;
  Mode mode = Mode::kUncoupled;
  std::optional<double> sigma;  // unset for the head of the string
  bool feasible = false;        // an uncoupled plan exists from the current state
};

/// Switching law of one vehicle. Uses g_sf inside the coupling set and g_uc
/// outside it; at the speed cap the result is clamped to [um, 0]. Throws
/// SafetyViolation (with vehicle index `vehicle`) when sigma < 1 - kSigmaSlack.
ControlDecision local_control(double tau, double t, double x_fol, double v_fol,
                              const std::optional<LeaderInfo>& leader,
                              const RoadParams& road, double dt = 0.0,
                              int vehicle = 0);

}  // namespace platoon
