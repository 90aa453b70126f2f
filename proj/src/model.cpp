#include "platoon/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "platoon/safety.hpp"

namespace platoon {

std::vector<std::string> RoadParams::problems() const {
  std::vector<std::string> out;
  auto finite = [](double v) { return std::isfinite(v); };
  if (!(finite(L) && finite(Delta) && finite(vM) && finite(um) && finite(uM) &&
        finite(vnom) && finite(sigma0))) {
    out.emplace_back("non-finite road parameter");
    return out;
  }
  if (!(L > 0.0)) out.emplace_back("L must be positive");
  if (!(Delta >= 0.0)) out.emplace_back("Delta must be nonnegative");
  if (!(vM > 0.0)) out.emplace_back("vM must be positive");
  if (!(um < 0.0)) out.emplace_back("um must be strictly negative");
  if (!(uM > 0.0)) out.emplace_back("uM must be strictly positive");
  if (!(vnom > 0.0 && vnom <= vM)) out.emplace_back("vnom must lie in (0, vM]");
  if (!(sigma0 > 1.0)) out.emplace_back("sigma0 must exceed 1");
  return out;
}

void RoadParams::require_valid() const {
  const auto p = problems();
  if (p.empty()) return;
  std::ostringstream os;
  os << "invalid road parameters:";
  for (const auto& s : p) os << ' ' << s << ';';
  throw DomainError(os.str());
}

void VelocityPlan::append(double duration, double accel) {
  if (!(duration > 0.0)) return;
  if (!segments_.empty() && segments_.back().accel == accel) {
    segments_.back().duration += duration;
    return;
  }
  segments_.push_back({duration, accel});
}

double VelocityPlan::terminal_speed() const {
  double v = v0_;
  for (const auto& s : segments_) v += s.accel * s.duration;
  return v;
}

double VelocityPlan::duration() const {
  double t = 0.0;
  for (const auto& s : segments_) t += s.duration;
  return t;
}

double VelocityPlan::distance() const {
  double v = v0_;
  double d = 0.0;
  for (const auto& s : segments_) {
    d += v * s.duration + 0.5 * s.accel * s.duration * s.duration;
    v += s.accel * s.duration;
  }
  return d;
}

double VelocityPlan::cost() const {
  double c = 0.0;
  for (const auto& s : segments_) c += std::abs(s.accel) * s.duration;
  return c;
}

double VelocityPlan::accel_at(double s) const {
  double t = 0.0;
  for (const auto& seg : segments_) {
    if (s < t + seg.duration) return seg.accel;
    t += seg.duration;
  }
  return 0.0;
}

double VelocityPlan::speed_at(double s) const {
  double t = 0.0;
  double v = v0_;
  for (const auto& seg : segments_) {
    if (s <= t + seg.duration) return v + seg.accel * (s - t);
    t += seg.duration;
    v += seg.accel * seg.duration;
  }
  return v;
}

double VelocityPlan::distance_at(double s) const {
  double t = 0.0;
  double v = v0_;
  double d = 0.0;
  for (const auto& seg : segments_) {
    const double h = std::min(seg.duration, s - t);
    if (h <= 0.0) break;
    d += v * h + 0.5 * seg.accel * h * h;
    if (h < seg.duration) return d;
    t += seg.duration;
    v += seg.accel * seg.duration;
  }
  if (s > t) d += v * (s - t);
  return d;
}

std::vector<std::pair<double, double>> VelocityPlan::breakpoints() const {
  std::vector<std::pair<double, double>> out{{0.0, v0_}};
  double t = 0.0;
  double v = v0_;
  for (const auto& seg : segments_) {
    t += seg.duration;
    v += seg.accel * seg.duration;
    out.emplace_back(t, v);
  }
  return out;
}

double suff_cond_threshold(const RoadParams& road) {
  return road.vM * road.vM / (2.0 * road.um) -
         road.vnom * road.vnom / (2.0 * road.uM);
}

std::vector<Violation> validate_scenario(const Scenario& s) {
  std::vector<Violation> out;
  for (const auto& p : s.road.problems()) out.push_back({0, p});
  if (!out.empty()) return out;

  if (s.vehicles.empty()) out.push_back({0, "no vehicles"});
  if (!(s.dt > 0.0) || !std::isfinite(s.dt)) out.push_back({0, "dt must be positive"});
  if (!(s.t_end > 0.0) || !std::isfinite(s.t_end)) {
    out.push_back({0, "t_end must be positive"});
  }
  const bool im = s.tau_policy.mode == TauMode::kIntersectionManager;
  if (im && !(s.tau_policy.A >= 0.0 && s.tau_policy.A <= 1.0)) {
    out.push_back({0, "aggressiveness A outside [0, 1]"});
  }

  const double threshold = suff_cond_threshold(s.road);
  for (std::size_t i = 0; i < s.vehicles.size(); ++i) {
    const int j = static_cast<int>(i) + 1;
    const auto& veh = s.vehicles[i];
    if (!(veh.x < 0.0)) out.push_back({j, "initial position nonnegative"});
    if (!(veh.v >= 0.0 && veh.v <= s.road.vM)) {
      out.push_back({j, "initial speed outside [0, vM]"});
    }
    if (im && !(veh.x <= threshold)) {
      out.push_back({j, "initial position violates the feasibility threshold"});
    }
    if (!im && !veh.tau) out.push_back({j, "prescribed approach time missing"});
    if (i == 0) continue;
    const auto& lead = s.vehicles[i - 1];
    if (!(lead.x > veh.x)) {
      out.push_back({j, "vehicles not ordered by decreasing position"});
      continue;
    }
    if (!(veh.v >= 0.0 && lead.v >= 0.0)) continue;
    const double sigma = safety_ratio(lead.x, veh.x, lead.v, veh.v, s.road);
    if (sigma < 1.0) {
      std::ostringstream os;
      os << "initial safety ratio sigma_" << j << "(0) < 1 (" << sigma << ")";
      out.push_back({j, os.str()});
    }
  }
  return out;
}

}  // namespace platoon
