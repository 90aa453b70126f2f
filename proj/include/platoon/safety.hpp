#pragma once

#include "platoon/model.hpp"

namespace platoon {

/// Distance covered under the maximum braking maneuver (u = um until stop).
double mbm_stop_distance(double v, const RoadParams& road);

/// Minimum gap, front to front, that lets both vehicles brake at um without
/// the follower reaching the leader's rear:
///   L + max{0, (v_fol^2 - v_lead^2) / (-2 um)}.
/// Non-decreasing in v_fol, non-increasing in v_lead, never below L.
double safe_following_distance(double v_lead, double v_fol, const RoadParams& road);

/// Actual gap over the safe-following distance. A value >= 1 is the safety
/// constraint. Throws DomainError if the follower is not strictly behind.
double safety_ratio(double x_lead, double x_fol, double v_lead, double v_fol,
                    const RoadParams& road);

/// Follower at least as fast as its leader with sigma in [1, sigma0].
bool in_coupling_set(const CouplingState& z, const RoadParams& road);

}  // namespace platoon
