#include "platoon/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "platoon/safety.hpp"
#include "platoon/uncoupled.hpp"

namespace platoon {

namespace {

constexpr double kGolden = 0.6180339887498949;

// Maximum of f on [a, b] by golden-section search; also probes both ends so
// that boundary maxima are returned exactly.
template <typename F>
double golden_max(F&& f, double a, double b, double tol) {
  double best = std::max(f(a), f(b));
  double x1 = b - kGolden * (b - a);
  double x2 = a + kGolden * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  while (b - a > tol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kGolden * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kGolden * (b - a);
      f1 = f(x1);
    }
  }
  return std::max({best, f1, f2, f(a), f(b)});
}

double d_floor(double v, const RoadParams& road) {
  return std::max(0.0, (road.vnom * road.vnom - v * v) / (2.0 * road.uM));
}

// One meter into the region where approach_lag no longer depends on d.
double d_cap(double v, const RoadParams& road) {
  return (road.vM * road.vM - v * v) / (2.0 * road.uM) + 1.0;
}

}  // namespace

double t_nom(const RoadParams& road) {
  return safe_following_distance(road.vnom, road.vM, road) / road.vnom;
}

double v_lower(const RoadParams& road) {
  return -road.um * road.vM / (-road.um + road.sigma0 * road.uM);
}

double approach_lag(double d, double v, const RoadParams& road) {
  return (d + road.sigma0 * safe_following_distance(v, road.vM, road)) / road.vM -
         earliest_approach_time(d, v, road);
}

double t_fol(double v, const RoadParams& road) {
  return (road.vnom * road.vnom - v * v) / (2.0 * road.uM * road.vM) +
         road.sigma0 * safe_following_distance(v, road.vM, road) / road.vM -
         (road.vnom - v) / road.uM;
}

double t_fol_plus_variant(double v, const RoadParams& road) {
  return (road.vnom * road.vnom - v * v) / (2.0 * road.uM * road.vM) +
         road.sigma0 * safe_following_distance(v, road.vM, road) / road.vM +
         (road.vnom - v) / road.uM;
}

double t_iat_numeric(const RoadParams& road) {
  const double coupled = road.sigma0 * t_nom(road);
  const double v_lo = v_lower(road);
  const double v_hi = road.vnom;
  if (v_lo > v_hi) return coupled;

  constexpr int kGrid = 200;
  auto d_at = [&](double v, int k) {
    const double lo = d_floor(v, road);
    return lo + (d_cap(v, road) - lo) * k / (kGrid - 1);
  };
  auto v_at = [&](int i) { return v_lo + (v_hi - v_lo) * i / (kGrid - 1); };

  double best = -std::numeric_limits<double>::infinity();
  int best_i = 0;
  for (int i = 0; i < kGrid; ++i) {
    const double v = v_at(i);
    for (int k = 0; k < kGrid; ++k) {
      const double val = approach_lag(d_at(v, k), v, road);
      if (val > best) {
        best = val;
        best_i = i;
      }
    }
  }

  constexpr double kTol = 1e-6;
  auto best_over_d = [&](double v) {
    return golden_max([&](double d) { return approach_lag(d, v, road); },
                      d_floor(v, road), d_cap(v, road), kTol);
  };
  const double a = v_at(std::max(0, best_i - 1));
  const double b = v_at(std::min(kGrid - 1, best_i + 1));
  const double refined = golden_max(best_over_d, a, b, kTol);
  return std::max({coupled, best, refined});
}

double t_iat_analytic(const RoadParams& road) {
  const double coupled = road.sigma0 * t_nom(road);
  const double v_lo = v_lower(road);
  if (v_lo > road.vnom) return coupled;
  return std::max(coupled, t_fol(v_lo, road));
}

double group_earliest(std::span<const double> taue, double A, const RoadParams& road) {
  const double spacing = A * t_nom(road);
  double out = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < taue.size(); ++i) {
    out = std::max(out, taue[i] - static_cast<double>(i) * spacing);
  }
  return out;
}

std::vector<double> prescribe_taus(double tau1, int n, double A, const RoadParams& road) {
  const double spacing = A * t_nom(road);
  std::vector<double> out(static_cast<std::size_t>(std::max(n, 0)));
  for (int j = 0; j < n; ++j) out[j] = tau1 + j * spacing;
  return out;
}

double occupancy_bound(int n, const RoadParams& road) {
  const double tiat = t_iat_analytic(road);
  return (n - 1) * tiat + std::max((road.L + road.Delta) / road.vnom, tiat);
}

ScheduleReport make_schedule(const Scenario& s, double A, std::optional<double> tau1) {
  ScheduleReport r;
  r.A = A;
  r.taue.reserve(s.vehicles.size());
  for (const auto& veh : s.vehicles) r.taue.push_back(tau_earliest(veh.x, veh.v, s.road));
  r.Te1 = group_earliest(r.taue, A, s.road);
  if (tau1 && *tau1 < r.Te1) throw DomainError("make_schedule: tau_1 precedes the group earliest time");
  r.taus = prescribe_taus(tau1.value_or(r.Te1), static_cast<int>(s.vehicles.size()), A,
                          s.road);
  r.Tnom = t_nom(s.road);
  r.Tiat = t_iat_analytic(s.road);
  r.occ_bound = occupancy_bound(static_cast<int>(s.vehicles.size()), s.road);
  return r;
}

TiatReport tiat_report(const RoadParams& road, int n) {
  TiatReport r;
  r.n = n;
  r.Tnom = t_nom(road);
  r.v_lower = v_lower(road);
  r.Tiat_numeric = t_iat_numeric(road);
  r.Tiat_analytic = t_iat_analytic(road);
  r.Tfol_plus_variant = t_fol_plus_variant(std::min(r.v_lower, road.vnom), road);
  r.occ_bound = occupancy_bound(n, road);
  return r;
}

}  // namespace platoon
