#pragma once

#include "disasm/types.hpp"

#include <vector>

namespace disasm {

struct PoseSample {
  double t = 0.0;  // s
  Vec3 position{Vec3::Zero()};
  Quat orientation{Quat::Identity()};
};

/// Rotation angle 2 acos(|q_t . q_0|) in [0, pi]; the absolute value folds
/// the quaternion double cover.
double quaternion_angle(const Quat& q_t, const Quat& q_0);

/// ||delta p|| + theta, meters plus radians summed.
double pose_deviation(const PoseSample& sample, const PoseSample& initial);

struct TimelineParams {
  double target_duration = 16.0;  // s
  double sample_step = 0.1;       // s
};

/// Affine rescale of timestamps onto [0, target_duration], resampled at
/// sample_step with linear position and spherical orientation interpolation.
std::vector<PoseSample> normalize_timeline(const std::vector<PoseSample>& series,
                                           const TimelineParams& params = {});

/// successes / total over trial success flags.
double success_rate(const std::vector<bool>& successes);

}  // namespace disasm
