#pragma once

#include <optional>
#include <span>
#include <vector>

#include "platoon/model.hpp"

namespace platoon {

/// Nominal safe inter-vehicle approach time D(vnom, vM) / vnom.
double t_nom(const RoadParams& road);

/// Leader speed below which a capped follower in the coupling set is never
/// asked to accelerate: -um vM / (-um + sigma0 uM).
double v_lower(const RoadParams& road);

/// Worst-case extra time a follower driving at vM needs to reach the target,
/// compared to the earliest arrival of its leader from distance d at speed v:
///   (d + sigma0 D(v, vM)) / vM - T(d, v).
double approach_lag(double d, double v, const RoadParams& road);

/// Closed form of the maximal approach_lag over the admissible region,
/// evaluated on its lower distance boundary d = (vnom^2 - v^2) / (2 uM):
///   (vnom^2 - v^2)/(2 uM vM) + sigma0 D(v, vM)/vM - (vnom - v)/uM.
double t_fol(double v, const RoadParams& road);

/// The same expression with "+ (vnom - v)/uM" as the last term. Only kept
/// for diagnostics; it does not match the numeric maximization.
double t_fol_plus_variant(double v, const RoadParams& road);

/// Upper bound on consecutive approach-time gaps, by direct search over the
/// region d >= (vnom^2 - v^2)/(2 uM), v in [v_lower, vnom]: a 200 x 200 grid
/// followed by nested golden-section refinement to 1e-6.
double t_iat_numeric(const RoadParams& road);

/// Same bound in closed form: max{sigma0 Tnom, t_fol(v_lower)}, or
/// sigma0 Tnom alone when v_lower > vnom.
double t_iat_analytic(const RoadParams& road);

/// Earliest approach time of a group: max_j {taue_j - (j-1) A Tnom}.
double group_earliest(std::span<const double> taue, double A, const RoadParams& road);

/// tau_j = tau1 + (j-1) A Tnom for j = 1..n.
std::vector<double> prescribe_taus(double tau1, int n, double A, const RoadParams& road);

/// Guaranteed occupancy time bound (n-1) Tiat + max{(L + Delta)/vnom, Tiat}.
double occupancy_bound(int n, const RoadParams& road);

struct ScheduleReport {
  double Te1 = 0.0;
  std::vector<double> taus;
  std::vector<double> taue;
  double Tnom = 0.0;
  double Tiat = 0.0;
  double occ_bound = 0.0;
  double A = 0.0;
};

/// Runs the intersection-manager layer for a scenario: earliest approach
/// times, group earliest time, prescribed times starting at `tau1` (default
/// Te1) and the occupancy bound. Throws DomainError if `tau1` < Te1.
ScheduleReport make_schedule(const Scenario& s, double A,
                             std::optional<double> tau1 = std::nullopt);

struct TiatReport {
  double Tnom = 0.0;
  double v_lower = 0.0;
  double Tiat_numeric = 0.0;
  double Tiat_analytic = 0.0;
  double Tfol_plus_variant = 0.0;  // diagnostic only
  double occ_bound = 0.0;
  int n = 1;
};

TiatReport tiat_report(const RoadParams& road, int n);

}  // namespace platoon
