#include "disasm/collision.hpp"

#include "disasm/mesh.hpp"

#include <cmath>

namespace disasm {

namespace {

// Crossing-parity point-in-mesh test for watertight meshes. The ray direction
// is irrational in every component so it does not graze axis-aligned edges.
bool point_inside_mesh(const TriMesh& mesh, const Vec3& p) {
  const Vec3 dir = Vec3(0.5773502691896258, 0.5773702691896258, 0.5773302691896258).normalized();
  int crossings = 0;
  for (int f = 0; f < static_cast<int>(mesh.face_count()); ++f) {
    auto t = ray_triangle_intersect(p, dir, mesh.vertex(f, 0), mesh.vertex(f, 1), mesh.vertex(f, 2));
    if (t && *t > 0.0) ++crossings;
  }
  return crossings % 2 == 1;
}

// Akenine-Moller triangle vs axis-aligned box test, box centered at origin.
bool tri_aabb_overlap(const Vec3& h, Vec3 v0, Vec3 v1, Vec3 v2) {
  auto axis_test = [&](const Vec3& axis) {
    double p0 = v0.dot(axis), p1 = v1.dot(axis), p2 = v2.dot(axis);
    double r = h.x() * std::abs(axis.x()) + h.y() * std::abs(axis.y()) + h.z() * std::abs(axis.z());
    double lo = std::min({p0, p1, p2});
    double hi = std::max({p0, p1, p2});
    return !(lo > r || hi < -r);
  };

  // box face normals
  for (int i = 0; i < 3; ++i) {
    double lo = std::min({v0[i], v1[i], v2[i]});
    double hi = std::max({v0[i], v1[i], v2[i]});
    if (lo > h[i] || hi < -h[i]) return false;
  }
  // triangle normal
  Vec3 e0 = v1 - v0, e1 = v2 - v1, e2 = v0 - v2;
  if (!axis_test(e0.cross(e1))) return false;
  // edge cross products
  const Vec3 axes[3] = {Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitZ()};
  for (const Vec3& e : {e0, e1, e2}) {
    for (const Vec3& u : axes) {
      Vec3 axis = e.cross(u);
      if (axis.squaredNorm() < 1e-24) continue;
      if (!axis_test(axis)) return false;
    }
  }
  return true;
}

}  // namespace

bool obb_triangle_overlap(const Obb& box, const Vec3& a, const Vec3& b, const Vec3& c) {
  Mat3 rt = box.rotation.transpose();
  return tri_aabb_overlap(box.half_extents, rt * (a - box.center), rt * (b - box.center),
                          rt * (c - box.center));
}

Eigen::AlignedBox3d obb_bounds(const Obb& box) {
  Vec3 radius = box.rotation.cwiseAbs() * box.half_extents;
  return {box.center - radius, box.center + radius};
}

std::array<Obb, 3> gripper_boxes(const GraspCandidate& grasp, const GripperSpec& spec) {
  Mat3 r = grasp.orientation.toRotationMatrix();
  Vec3 x = r.col(0), z = r.col(2);

  double finger_offset = 0.5 * grasp.jaw_width + spec.contact_clearance + 0.5 * spec.finger_box.x();
  Vec3 finger_half(0.5 * spec.finger_box.x(), 0.5 * spec.finger_box.y(), 0.5 * spec.finger_length);
  Vec3 finger_center_z = -0.5 * spec.finger_length * z;

  Obb finger_a{grasp.center + finger_offset * x + finger_center_z, r, finger_half};
  Obb finger_b{grasp.center - finger_offset * x + finger_center_z, r, finger_half};
  Obb palm{grasp.center - (spec.finger_length + 0.5 * spec.palm_box.z()) * z, r,
           0.5 * spec.palm_box};
  return {finger_a, finger_b, palm};
}

bool check_gripper_collision(const std::vector<TriMesh>& obstacles, const GraspCandidate& grasp,
                             const GripperSpec& gripper) {
  auto boxes = gripper_boxes(grasp, gripper);
  std::array<Eigen::AlignedBox3d, 3> box_aabbs;
  for (int i = 0; i < 3; ++i) box_aabbs[i] = obb_bounds(boxes[i]);

  for (const TriMesh& mesh : obstacles) {
    Eigen::AlignedBox3d mesh_box = mesh.bounds();
    bool any = false;
    for (const auto& bb : box_aabbs) any = any || bb.intersects(mesh_box);
    if (!any) continue;
    for (int f = 0; f < static_cast<int>(mesh.face_count()); ++f) {
      Vec3 a = mesh.vertex(f, 0), b = mesh.vertex(f, 1), c = mesh.vertex(f, 2);
      Eigen::AlignedBox3d tri_box;
      tri_box.extend(a).extend(b).extend(c);
      for (int i = 0; i < 3; ++i) {
        if (!box_aabbs[i].intersects(tri_box)) continue;
        if (obb_triangle_overlap(boxes[i], a, b, c)) return true;
      }
    }
    // a box that meets no triangle can still be buried inside the solid
    for (int i = 0; i < 3; ++i) {
      if (!box_aabbs[i].intersects(mesh_box)) continue;
      if (point_inside_mesh(mesh, boxes[i].center)) return true;
    }
  }
  return false;
}

}  // namespace disasm
