#pragma once

#include "disasm/grasp.hpp"

#include <array>
#include <vector>

namespace disasm {

/// Oriented box: world pose of the center plus half extents.
struct Obb {
  Vec3 center{Vec3::Zero()};
  Mat3 rotation{Mat3::Identity()};  // columns are box axes in world
  Vec3 half_extents{Vec3::Zero()};
};

/// Exact oriented-box vs triangle overlap (separating axis test).
bool obb_triangle_overlap(const Obb& box, const Vec3& a, const Vec3& b, const Vec3& c);

/// The three boxes (two fingers + palm) swept by the gripper at a grasp pose.
std::array<Obb, 3> gripper_boxes(const GraspCandidate& grasp, const GripperSpec& spec);

/// True iff the posed gripper volume intersects any obstacle triangle.
/// AABB broad phase per box, exact SAT narrow phase.
bool check_gripper_collision(const std::vector<TriMesh>& obstacles, const GraspCandidate& grasp,
                             const GripperSpec& gripper);

Eigen::AlignedBox3d obb_bounds(const Obb& box);

}  // namespace disasm
