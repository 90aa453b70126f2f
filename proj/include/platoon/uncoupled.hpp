#pragma once

#include <stdexcept>

#include "platoon/model.hpp"

namespace platoon {

class NoFeasiblePlan : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Reachable-distance window for a horizon with terminal speed in [vnom, vM].
/// When no profile fits the horizon, `feasible` is false and the window is
/// empty (d_min = +inf, d_max = -inf).
struct FeasibilityResult {
  bool feasible = false;
  double d_min = 0.0;
  double d_max = 0.0;
};

/// Earliest time to cover `d` from speed `v`: full acceleration until vM,
/// then cruise.
double earliest_approach_time(double d, double v, const RoadParams& road);

/// Earliest approach time of a vehicle starting at x0 < 0 with speed v0.
double tau_earliest(double x0, double v0, const RoadParams& road);

/// Whether some admissible profile covers exactly `d` in time `h` and ends at
/// a speed in [vnom, vM]. `slack` widens the window on both sides; the
/// receding-horizon controller uses it to absorb sub-step discretization error.
FeasibilityResult feasibility(double d, double v, double h, const RoadParams& road,
                              double slack = 0.0);

/// Minimum-fuel profile (fuel = integral of |u| = total speed variation) over
/// the family "ramp to a cruise speed c, hold, ramp up to max(c, vnom)".
/// Throws NoFeasiblePlan when `feasibility` fails. Distances inside the slack
/// band are clamped onto the window before planning.
VelocityPlan plan(double d, double v, double h, const RoadParams& road,
                  double slack = 0.0);

/// Distance slack used by g_uc when replanning from a simulated state.
inline constexpr double kReplanSlack = 1e-3;

/// Receding-horizon uncoupled controller. With dt == 0 it returns the initial
/// acceleration of the optimal plan from (t, x, v) to (tau, 0); with dt > 0 it
/// returns the plan's mean acceleration over [t, t + dt], which is what a
/// sampled controller holding u constant over the step must apply to stay on
/// the plan. When no plan exists (including past tau or past the target) the
/// result is uM.
double g_uc(double tau, double t, double x, double v, const RoadParams& road,
            double dt = 0.0);

/// True when a plan from (t, x, v) to (tau, 0) exists, using kReplanSlack.
bool uncoupled_feasible(double tau, double t, double x, double v,
                        const RoadParams& road);

}  // namespace platoon
