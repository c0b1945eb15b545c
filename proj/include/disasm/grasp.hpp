#pragma once

#include "disasm/mesh.hpp"

#include <optional>
#include <vector>

namespace disasm {

/// Parallel-jaw gripper geometry. The grasp frame convention used throughout:
/// x = closing axis (from contact_a toward contact_b), z = approach axis
/// (gripper body sits on the -z side, finger tips at the grasp center plane).
struct GripperSpec {
  double max_opening = 0.05;       // m
  double finger_length = 0.06;     // m, along the approach axis
  Vec3 finger_box{0.01, 0.02, 0.06};  // extents: thickness (closing), width, length
  Vec3 palm_box{0.09, 0.03, 0.04};    // extents
  double grip_force_limit = 60.0;  // N
  double contact_clearance = 1e-4; // m, gap between finger face and contact

  void validate() const;
};

struct GraspCandidate {
  Vec3 center{Vec3::Zero()};
  Quat orientation{Quat::Identity()};
  double jaw_width = 0.0;
  ContactPoint contact_a;
  ContactPoint contact_b;

  [[nodiscard]] Vec3 closing_axis() const { return orientation * Vec3::UnitX(); }
  [[nodiscard]] Vec3 approach_axis() const { return orientation * Vec3::UnitZ(); }
  [[nodiscard]] Pose pose() const { return {center, orientation}; }
};

struct SimilarityThresholds {
  double max_pos_diff = 0.05;  // m
  double max_ori_diff = 0.25;  // dimensionless, [0, 1]
};

struct GraspSamplingParams {
  double cluster_angle_tol = 0.05;   // rad
  double contact_spacing = 0.01;     // m
  double boundary_margin = 0.005;    // m
  int approach_rotations = 8;
  double antipodal_tol = 10.0 * M_PI / 180.0;  // rad
};

std::vector<GraspCandidate> generate_grasp_candidates(const TriMesh& target,
                                                      const GripperSpec& gripper,
                                                      const GraspSamplingParams& params);

std::vector<GraspCandidate> filter_colliding_candidates(const std::vector<GraspCandidate>& candidates,
                                                        const std::vector<TriMesh>& obstacles,
                                                        const GripperSpec& gripper);

/// Positional difference (Euclidean, m) and orientational difference mapped
/// linearly from the quaternion rotation angle so 0 deg -> 0 and 180 deg -> 1.
std::pair<double, double> grasp_similarity(const GraspCandidate& candidate,
                                           const EndEffectorPose& hand);

/// Returns the qualifying candidate minimizing pos_diff + ori_diff * max_pos_diff,
/// or nullopt when no candidate passes both thresholds.
std::optional<GraspCandidate> snap_to_grasp(const std::vector<GraspCandidate>& candidates,
                                            const EndEffectorPose& hand,
                                            const SimilarityThresholds& th);

/// Builds a grasp candidate from an antipodal contact pair and a rotation
/// index about the closing axis; orientation column convention as above.
GraspCandidate make_candidate(const ContactPoint& a, const ContactPoint& b, int rotation_index,
                              int rotation_count);

}  // namespace disasm
