#pragma once

#include "disasm/types.hpp"

#include <string>
#include <vector>

namespace disasm {

enum class GripCommand { open, close };

/// One recorded frame of demonstrator hand keypoints in the camera frame.
struct HandKeypoints {
  double timestamp = 0.0;  // s
  Vec3 wrist{Vec3::Zero()};
  Vec3 index_base{Vec3::Zero()};
  Vec3 thumb_base{Vec3::Zero()};
  bool wrist_visible = true;
  bool index_visible = true;
  bool thumb_visible = true;
  GripCommand grip = GripCommand::open;

  [[nodiscard]] bool all_visible() const { return wrist_visible && index_visible && thumb_visible; }
};

/// Rigid camera-to-robot transform.
struct Calibration {
  Pose transform;  // camera -> robot

  void validate() const { require_unit_quaternion(transform.orientation, 1e-9, "Calibration"); }
};

/// Wrist-origin hand frame: x is the bisector of the wrist->index_base and
/// wrist->thumb_base directions, sign-corrected toward the index finger;
/// y is the camera depth axis; x is re-projected perpendicular to y; z = x cross y.
EndEffectorPose build_hand_frame(const HandKeypoints& kp, const Vec3& depth_axis);

EndEffectorPose camera_to_robot(const EndEffectorPose& pose, const Calibration& cal);

struct KeypointFilterParams {
  double ema_alpha = 0.5;
};

/// Drops frames with any invisible keypoint, then EMA-smooths positions.
std::vector<HandKeypoints> filter_stable_keypoints(const std::vector<HandKeypoints>& stream,
                                                   const KeypointFilterParams& params = {});

/// JSON Lines trajectory file, one record per frame:
/// {"t":..,"wrist":[x,y,z],"index_base":[..],"thumb_base":[..],"visible":[b,b,b],"grip":"open"|"close"}
std::vector<HandKeypoints> load_trajectory(const std::string& path);

/// Calibration JSON: {"rotation":[x,y,z,w],"translation":[x,y,z]}.
Calibration load_calibration(const std::string& path);

}  // namespace disasm
