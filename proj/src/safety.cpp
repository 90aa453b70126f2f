#include "platoon/safety.hpp"

#include <algorithm>

namespace platoon {

double mbm_stop_distance(double v, const RoadParams& road) {
  return v * v / (-2.0 * road.um);
}

double safe_following_distance(double v_lead, double v_fol, const RoadParams& road) {
  if (v_lead < 0.0 || v_fol < 0.0) {
    throw DomainError("safe_following_distance: negative velocity");
  }
  return road.L + std::max(0.0, (v_fol * v_fol - v_lead * v_lead) / (-2.0 * road.um));
}

double safety_ratio(double x_lead, double x_fol, double v_lead, double v_fol,
                    const RoadParams& road) {
  if (!(x_lead > x_fol)) {
    throw DomainError("safety_ratio: follower is not behind its leader");
  }
  return (x_lead - x_fol) / safe_following_distance(v_lead, v_fol, road);
}

bool in_coupling_set(const CouplingState& z, const RoadParams& road) {
  return z.v_fol >= z.v_lead && z.sigma >= 1.0 && z.sigma <= road.sigma0;
}

}  // namespace platoon
