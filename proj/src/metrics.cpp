#include "disasm/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace disasm {

double quaternion_angle(const Quat& q_t, const Quat& q_0) {
  require_unit_quaternion(q_t, 1e-6, "quaternion_angle(q_t)");
  require_unit_quaternion(q_0, 1e-6, "quaternion_angle(q_0)");
  double dot = std::abs(q_t.coeffs().dot(q_0.coeffs()));
  return 2.0 * std::acos(std::clamp(dot, 0.0, 1.0));
}

double pose_deviation(const PoseSample& sample, const PoseSample& initial) {
  return (sample.position - initial.position).norm() +
         quaternion_angle(sample.orientation, initial.orientation);
}

std::vector<PoseSample> normalize_timeline(const std::vector<PoseSample>& series,
                                           const TimelineParams& params) {
  if (series.size() < 2) throw ValidationError("normalize_timeline: need at least 2 samples");
  double t0 = series.front().t;
  double span = series.back().t - t0;
  if (!(span > 0.0)) throw ValidationError("normalize_timeline: series has zero time span");

  std::vector<PoseSample> scaled = series;
  for (PoseSample& s : scaled) s.t = (s.t - t0) / span * params.target_duration;
  scaled.front().t = 0.0;
  scaled.back().t = params.target_duration;

  int steps = static_cast<int>(std::llround(params.target_duration / params.sample_step));
  std::vector<PoseSample> out;
  out.reserve(steps + 1);
  std::size_t hi = 1;
  for (int k = 0; k <= steps; ++k) {
    double t = k == steps ? params.target_duration : k * params.sample_step;
    while (hi + 1 < scaled.size() && scaled[hi].t < t) ++hi;
    const PoseSample& a = scaled[hi - 1];
    const PoseSample& b = scaled[hi];
    double u = (t - a.t) / (b.t - a.t);
    u = std::clamp(u, 0.0, 1.0);
    PoseSample s;
    s.t = t;
    s.position = (1.0 - u) * a.position + u * b.position;
    s.orientation = a.orientation.slerp(u, b.orientation).normalized();
    out.push_back(s);
  }
  return out;
}

double success_rate(const std::vector<bool>& successes) {
  if (successes.empty()) throw ValidationError("success_rate: empty result list");
  double count = static_cast<double>(std::count(successes.begin(), successes.end(), true));
  return count / static_cast<double>(successes.size());
}

}  // namespace disasm
