#include "platoon/following.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "platoon/safety.hpp"
#include "platoon/uncoupled.hpp"

namespace platoon {

double g_us(const CouplingState& z, double u_lead, const RoadParams& road) {
  if (!(z.v_lead >= 0.0 && z.v_fol >= z.v_lead)) {
    throw DomainError("g_us: requires v_fol >= v_lead >= 0");
  }
  if (!(u_lead >= road.um && u_lead <= road.uM)) {
    throw DomainError("g_us: leader acceleration outside [um, uM]");
  }
  if (!(z.sigma >= 1.0 && z.sigma <= road.sigma0)) {
    throw DomainError("g_us: safety ratio outside [1, sigma0]");
  }
  if (z.v_fol == 0.0) return u_lead;
  // Same expression rearranged as a convex combination of u_lead and um/sigma
  // with weight r = v_lead / v_fol in [0, 1].
  const double r = z.v_lead / z.v_fol;
  return r * u_lead + (1.0 - r) * (road.um / z.sigma);
}

double g_sf(double tau, double t, double x, const CouplingState& z, double u_lead,
            const RoadParams& road, double dt) {
  return std::min(g_uc(tau, t, x, z.v_fol, road, dt), g_us(z, u_lead, road));
}

ControlDecision local_control(double tau, double t, double x_fol, double v_fol,
                              const std::optional<LeaderInfo>& leader,
                              const RoadParams& road, double dt, int vehicle) {
  if (std::abs(v_fol - road.vM) <= kSpeedCapTol) v_fol = road.vM;
  const bool capped = v_fol >= road.vM;

  ControlDecision out;
  bool coupled = false;
  CouplingState z;
  if (leader) {
    double v_lead = leader->v;
    if (std::abs(v_lead - road.vM) <= kSpeedCapTol) v_lead = road.vM;
    const double sigma = safety_ratio(leader->x, x_fol, v_lead, v_fol, road);
    out.sigma = sigma;
    if (sigma < 1.0 - kSigmaSlack) {
      std::ostringstream os;
      os << "safety ratio of vehicle " << vehicle << " dropped to " << sigma;
      throw SafetyViolation(vehicle, sigma, os.str());
    }
    z = {v_lead, v_fol, std::max(sigma, 1.0)};
    coupled = in_coupling_set(z, road);
  }

  double u = coupled ? g_sf(tau, t, x_fol, z, leader->u, road, dt)
                     : g_uc(tau, t, x_fol, v_fol, road, dt);
  if (capped) u = std::clamp(u, road.um, 0.0);
  out.accel = u;
  out.feasible = uncoupled_feasible(tau, t, x_fol, v_fol, road);
  out.mode = coupled ? Mode::kSafeFollowing : Mode::kUncoupled;
  return out;
}

}  // namespace platoon
