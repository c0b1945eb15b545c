#include "disasm/hand_pose.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>

namespace disasm {

EndEffectorPose build_hand_frame(const HandKeypoints& kp, const Vec3& depth_axis) {
  if (!kp.all_visible()) throw ValidationError("build_hand_frame: keypoint not visible");
  for (const Vec3* p : {&kp.wrist, &kp.index_base, &kp.thumb_base}) {
    if (!p->allFinite()) throw ValidationError("build_hand_frame: non-finite keypoint");
  }

  Vec3 to_index = kp.index_base - kp.wrist;
  Vec3 to_thumb = kp.thumb_base - kp.wrist;
  if (to_index.norm() < 1e-9 || to_thumb.norm() < 1e-9) {
    throw ValidationError("build_hand_frame: keypoint coincides with wrist");
  }
  Vec3 bisector = to_index.normalized() + to_thumb.normalized();
  if (bisector.norm() < 1e-9) {
    throw ValidationError("build_hand_frame: degenerate frame, fingers opposed");
  }
  Vec3 raw_x = bisector.normalized();
  // directed from the thumb to the index finger
  if (raw_x.dot(kp.index_base - kp.thumb_base) < 0.0) raw_x = -raw_x;

  Vec3 y = depth_axis.normalized();
  if (std::abs(raw_x.dot(y)) > 0.99) {
    throw ValidationError("build_hand_frame: bisector nearly parallel to depth axis");
  }
  Vec3 x = (raw_x - raw_x.dot(y) * y).normalized();
  Vec3 z = x.cross(y);

  Mat3 r;
  r.col(0) = x;
  r.col(1) = y;
  r.col(2) = z;
  return {kp.wrist, Quat(r).normalized(), FrameId::camera};
}

EndEffectorPose camera_to_robot(const EndEffectorPose& pose, const Calibration& cal) {
  if (pose.frame_id != FrameId::camera) {
    throw ValidationError("camera_to_robot: pose is not in the camera frame");
  }
  Pose out = cal.transform * pose.pose();
  return {out.position, out.orientation.normalized(), FrameId::robot};
}

std::vector<HandKeypoints> filter_stable_keypoints(const std::vector<HandKeypoints>& stream,
                                                   const KeypointFilterParams& params) {
  std::vector<HandKeypoints> out;
  bool have_state = false;
  Vec3 wrist_ema, index_ema, thumb_ema;
  double alpha = params.ema_alpha;
  for (const HandKeypoints& kp : stream) {
    if (!kp.all_visible()) continue;
    HandKeypoints smoothed = kp;
    if (!have_state) {
      wrist_ema = kp.wrist;
      index_ema = kp.index_base;
      thumb_ema = kp.thumb_base;
      have_state = true;
    } else {
      wrist_ema = alpha * kp.wrist + (1.0 - alpha) * wrist_ema;
      index_ema = alpha * kp.index_base + (1.0 - alpha) * index_ema;
      thumb_ema = alpha * kp.thumb_base + (1.0 - alpha) * thumb_ema;
    }
    smoothed.wrist = wrist_ema;
    smoothed.index_base = index_ema;
    smoothed.thumb_base = thumb_ema;
    out.push_back(smoothed);
  }
  return out;
}

namespace {

Vec3 vec3_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 3) throw IoError("expected a 3-element array");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

}  // namespace

std::vector<HandKeypoints> load_trajectory(const std::string& path) {
  std::ifstream in(path);
  if (!in.good()) throw IoError("cannot open trajectory file: " + path);
  std::vector<HandKeypoints> out;
  std::string line;
  double last_t = -std::numeric_limits<double>::infinity();
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j = nlohmann::json::parse(line);
    HandKeypoints kp;
    kp.timestamp = j.at("t").get<double>();
    kp.wrist = vec3_from_json(j.at("wrist"));
    kp.index_base = vec3_from_json(j.at("index_base"));
    kp.thumb_base = vec3_from_json(j.at("thumb_base"));
    if (j.contains("visible")) {
      const auto& vis = j.at("visible");
      kp.wrist_visible = vis.at(0).get<bool>();
      kp.index_visible = vis.at(1).get<bool>();
      kp.thumb_visible = vis.at(2).get<bool>();
    }
    if (j.contains("grip")) {
      kp.grip = j.at("grip").get<std::string>() == "close" ? GripCommand::close : GripCommand::open;
    }
    if (kp.timestamp < last_t) throw IoError("trajectory timestamps not monotone: " + path);
    last_t = kp.timestamp;
    out.push_back(kp);
  }
  return out;
}

Calibration load_calibration(const std::string& path) {
  std::ifstream in(path);
  if (!in.good()) throw IoError("cannot open calibration file: " + path);
  nlohmann::json j;
  in >> j;
  const auto& rot = j.at("rotation");
  Calibration cal;
  cal.transform.orientation =
      Quat(rot.at(3).get<double>(), rot.at(0).get<double>(), rot.at(1).get<double>(), rot.at(2).get<double>());
  cal.transform.orientation.normalize();
  cal.transform.position = vec3_from_json(j.at("translation"));
  cal.validate();
  return cal;
}

}  // namespace disasm
