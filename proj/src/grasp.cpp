#include "disasm/grasp.hpp"

#include "disasm/collision.hpp"

#include <algorithm>
#include <cmath>

namespace disasm {

void GripperSpec::validate() const {
  if (!(max_opening > 0.0) || !(finger_length > 0.0) || !(grip_force_limit > 0.0) ||
      !(finger_box.minCoeff() > 0.0) || !(palm_box.minCoeff() > 0.0)) {
    throw ValidationError("GripperSpec: all dimensions must be positive");
  }
}

GraspCandidate make_candidate(const ContactPoint& a, const ContactPoint& b, int rotation_index,
                              int rotation_count) {
  GraspCandidate cand;
  cand.contact_a = a;
  cand.contact_b = b;
  cand.center = 0.5 * (a.position + b.position);
  cand.jaw_width = (b.position - a.position).norm();

  Vec3 x = (b.position - a.position).normalized();
  Vec3 ref = any_perpendicular(x);
  double angle = 2.0 * M_PI * rotation_index / rotation_count;
  Vec3 z = Eigen::AngleAxisd(angle, x) * ref;
  Vec3 y = z.cross(x);
  Mat3 r;
  r.col(0) = x;
  r.col(1) = y;
  r.col(2) = z;
  cand.orientation = Quat(r).normalized();
  return cand;
}

std::vector<GraspCandidate> generate_grasp_candidates(const TriMesh& target,
                                                      const GripperSpec& gripper,
                                                      const GraspSamplingParams& params) {
  target.validate();
  gripper.validate();

  std::vector<ContactPoint> contacts;
  for (const FacetCluster& cluster : cluster_facets(target, params.cluster_angle_tol)) {
    auto pts = sample_contact_points(target, cluster, params.contact_spacing, params.boundary_margin);
    contacts.insert(contacts.end(), pts.begin(), pts.end());
  }
  std::stable_sort(contacts.begin(), contacts.end(),
                   [](const ContactPoint& a, const ContactPoint& b) { return a.face_id < b.face_id; });

  std::vector<TriMesh> self{target};
  std::vector<GraspCandidate> out;
  for (const ContactPoint& contact : contacts) {
    auto partner = ray_opposite_contact(target, contact, params.antipodal_tol);
    if (!partner) continue;
    double width = (partner->position - contact.position).norm();
    if (width > gripper.max_opening) continue;
    for (int k = 0; k < params.approach_rotations; ++k) {
      GraspCandidate cand = make_candidate(contact, *partner, k, params.approach_rotations);
      if (check_gripper_collision(self, cand, gripper)) continue;
      out.push_back(std::move(cand));
    }
  }
  return out;
}

std::vector<GraspCandidate> filter_colliding_candidates(const std::vector<GraspCandidate>& candidates,
                                                        const std::vector<TriMesh>& obstacles,
                                                        const GripperSpec& gripper) {
  std::vector<GraspCandidate> out;
  for (const GraspCandidate& cand : candidates) {
    if (!check_gripper_collision(obstacles, cand, gripper)) out.push_back(cand);
  }
  return out;
}

std::pair<double, double> grasp_similarity(const GraspCandidate& candidate,
                                           const EndEffectorPose& hand) {
  require_unit_quaternion(candidate.orientation, 1e-6, "grasp_similarity(candidate)");
  require_unit_quaternion(hand.orientation, 1e-6, "grasp_similarity(hand)");
  double pos_diff = (candidate.center - hand.position).norm();
  double dot = std::abs(candidate.orientation.coeffs().dot(hand.orientation.coeffs()));
  double angle = 2.0 * std::acos(std::clamp(dot, 0.0, 1.0));
  return {pos_diff, angle / M_PI};
}

std::optional<GraspCandidate> snap_to_grasp(const std::vector<GraspCandidate>& candidates,
                                            const EndEffectorPose& hand,
                                            const SimilarityThresholds& th) {
  std::optional<GraspCandidate> best;
  double best_score = std::numeric_limits<double>::infinity();
  for (const GraspCandidate& cand : candidates) {
    auto [pos_diff, ori_diff] = grasp_similarity(cand, hand);
    if (pos_diff > th.max_pos_diff || ori_diff > th.max_ori_diff) continue;
    double score = pos_diff + ori_diff * th.max_pos_diff;
    if (score < best_score) {
      best_score = score;
      best = cand;
    }
  }
  return best;
}

}  // namespace disasm
