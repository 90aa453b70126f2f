#include "platoon/uncoupled.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace platoon {

namespace {

// Every candidate profile is parametrized by its cruise speed c:
//   ramp v -> c (at um when slowing down, at uM when speeding up),
//   hold c,
//   ramp c -> max(c, vnom) at uM.
// The ramp time T(c) is V-shaped in c and the covered distance A(c) has
// derivative h - T(c) >= 0 wherever the profile fits the horizon, so the
// feasible cruise speeds form an interval on which A is monotone.
struct CruiseFamily {
  double v;
  double h;
  const RoadParams& road;

  double brake() const { return -road.um; }

  double first_ramp(double c) const {
    return c < v ? (v - c) / brake() : (c - v) / road.uM;
  }
  double last_ramp(double c) const { return std::max(0.0, road.vnom - c) / road.uM; }
  double ramp_time(double c) const { return first_ramp(c) + last_ramp(c); }

  double area(double c) const {
    const double rate = c < v ? brake() : road.uM;
    const double vf = std::max(c, road.vnom);
    return c * h + (v - c) * std::abs(v - c) / (2.0 * rate) +
           (vf - c) * (vf - c) / (2.0 * road.uM);
  }

  // Rounding tolerance: a state taken from the last ramp of a plan sits
  // exactly on ramp_time(v) == h.
  bool admits_any() const { return ramp_time(v) <= h + 1e-12 * std::max(1.0, h); }

  double c_high() const { return std::min(road.vM, v + road.uM * h); }

  double c_low() const {
    const double a = brake();
    if (v > road.vnom && (v - road.vnom) / a >= h) return v - a * h;
    const double m = std::min(v, road.vnom);
    const double c = (v / a + road.vnom / road.uM - h) / (1.0 / a + 1.0 / road.uM);
    return std::clamp(c, 0.0, m);
  }

  VelocityPlan build(double c) const {
    VelocityPlan p(v);
    const double t1 = first_ramp(c);
    const double t2 = last_ramp(c);
    p.append(t1, c < v ? road.um : road.uM);
    p.append(std::max(0.0, h - t1 - t2), 0.0);
    p.append(t2, road.uM);
    return p;
  }
};

}  // namespace

double earliest_approach_time(double d, double v, const RoadParams& road) {
  const double uM = road.uM;
  const double vM = road.vM;
  if (2.0 * uM * d <= vM * vM - v * v) {
    return (std::sqrt(2.0 * uM * d + v * v) - v) / uM;
  }
  return (vM - v) / uM + (2.0 * uM * d - vM * vM + v * v) / (2.0 * uM * vM);
}

double tau_earliest(double x0, double v0, const RoadParams& road) {
  return earliest_approach_time(-x0, v0, road);
}

FeasibilityResult feasibility(double d, double v, double h, const RoadParams& road,
                              double slack) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  FeasibilityResult r{false, kInf, -kInf};
  if (!(h >= 0.0) || !(v >= 0.0 && v <= road.vM)) return r;
  const CruiseFamily fam{v, h, road};
  if (!fam.admits_any()) return r;
  r.d_min = fam.area(fam.c_low());
  r.d_max = fam.area(fam.c_high());
  r.feasible = d >= r.d_min - slack && d <= r.d_max + slack;
  return r;
}

VelocityPlan plan(double d, double v, double h, const RoadParams& road, double slack) {
  const auto f = feasibility(d, v, h, road, slack);
  if (!f.feasible) throw NoFeasiblePlan("no admissible profile reaches the target at the prescribed time");
  const CruiseFamily fam{v, h, road};
  const double c_lo = fam.c_low();
  const double c_hi = fam.c_high();
  double lo = c_lo;
  double hi = c_hi;
  const double target = std::clamp(d, f.d_min, f.d_max);

  // Flat window: every cruise speed costs the same, stay closest to v.
  if (f.d_max - f.d_min <= 1e-12) return fam.build(std::clamp(v, lo, hi));

  for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (fam.area(mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  double c = 0.5 * (lo + hi);
  // A root within bisection noise of v or vnom would leave a ramp of ~1e-10 s
  // at full acceleration in front of the plan; snap onto the exact speed.
  for (double snap : {v, road.vnom}) {
    if (snap >= c_lo && snap <= c_hi && std::abs(c - snap) <= 1e-9 &&
        std::abs(fam.area(snap) - target) <= 1e-9 * std::max(1.0, h)) {
      c = snap;
      break;
    }
  }
  return fam.build(c);
}

bool uncoupled_feasible(double tau, double t, double x, double v, const RoadParams& road) {
  return feasibility(-x, v, tau - t, road, kReplanSlack).feasible;
}

double g_uc(double tau, double t, double x, double v, const RoadParams& road, double dt) {
  const double h = tau - t;
  const double d = -x;
  if (!feasibility(d, v, h, road, kReplanSlack).feasible) return road.uM;
  const VelocityPlan p = plan(d, v, h, road, kReplanSlack);
  double u;
  if (dt <= 0.0) {
    u = p.accel_at(0.0);
  } else if (dt <= h) {
    u = (p.speed_at(dt) - v) / dt;
  } else {
    // Past tau the plan no longer exists and the controller extends with uM.
    u = (p.terminal_speed() - v + road.uM * (dt - h)) / dt;
  }
  return std::clamp(u, road.um, road.uM);
}

}  // namespace platoon
