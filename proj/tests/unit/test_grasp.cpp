#include "disasm/grasp.hpp"

#include "disasm/collision.hpp"
#include "helpers.hpp"

#include <doctest.h>

using namespace disasm;

namespace {

GripperSpec wide_gripper() {
  GripperSpec spec;
  spec.max_opening = 0.15;
  return spec;
}

GraspCandidate candidate_at(const Vec3& center, const Quat& q) {
  GraspCandidate cand;
  cand.center = center;
  cand.orientation = q;
  cand.jaw_width = 0.02;
  return cand;
}

}  // namespace

TEST_CASE("make_candidate satisfies the frame convention") {
  ContactPoint a, b;
  a.position = Vec3(0.01, 0.02, -0.03);
  a.normal = Vec3(-1.0, 0.0, 0.0);
  b.position = Vec3(0.07, 0.02, -0.03);
  b.normal = Vec3(1.0, 0.0, 0.0);

  for (int k = 0; k < 8; ++k) {
    GraspCandidate cand = make_candidate(a, b, k, 8);
    CHECK(cand.center.isApprox(0.5 * (a.position + b.position), 1e-12));
    CHECK(cand.jaw_width == doctest::Approx(0.06).epsilon(1e-12));
    CHECK(cand.closing_axis().isApprox((b.position - a.position).normalized(), 1e-12));
    Mat3 r = cand.orientation.toRotationMatrix();
    CHECK((r.transpose() * r).isApprox(Mat3::Identity(), 1e-12));
    CHECK(r.determinant() == doctest::Approx(1.0).epsilon(1e-12));
    // approach axis stays perpendicular to the closing axis
    CHECK(std::abs(cand.closing_axis().dot(cand.approach_axis())) < 1e-12);
  }
  // opposite rotation indices give opposite approach axes
  GraspCandidate k0 = make_candidate(a, b, 0, 8);
  GraspCandidate k4 = make_candidate(a, b, 4, 8);
  CHECK(k0.approach_axis().isApprox(-k4.approach_axis(), 1e-9));
}

TEST_CASE("box candidates satisfy antipodal invariants") {
  TriMesh box = load_mesh(fixture("meshes/box_grasp.stl"));  // 0.1 x 0.2 x 0.3
  auto candidates = generate_grasp_candidates(box, wide_gripper(), {});
  REQUIRE(!candidates.empty());
  for (const GraspCandidate& cand : candidates) {
    CHECK(cand.center.isApprox(0.5 * (cand.contact_a.position + cand.contact_b.position), 1e-9));
    CHECK(cand.jaw_width ==
          doctest::Approx((cand.contact_b.position - cand.contact_a.position).norm())
              .epsilon(1e-12));
    CHECK(cand.jaw_width <= 0.15);
    // only the 0.1 m dimension is graspable on this box
    CHECK(cand.jaw_width == doctest::Approx(0.1).epsilon(1e-6));
    CHECK(std::abs(cand.closing_axis().cwiseAbs().dot(Vec3::UnitX()) - 1.0) < 1e-9);
    // contact normals oppose each other within the antipodal tolerance
    CHECK(cand.contact_a.normal.dot(cand.contact_b.normal) <=
          -std::cos(10.0 * M_PI / 180.0) + 1e-12);
    // the posed gripper is collision-free against the part itself
    CHECK(!check_gripper_collision({box}, cand, wide_gripper()));
  }
}

TEST_CASE("filter_colliding_candidates preserves order and drops hits") {
  TriMesh box = load_mesh(fixture("meshes/box_grasp.stl"));
  auto candidates = generate_grasp_candidates(box, wide_gripper(), {});
  REQUIRE(candidates.size() > 4);

  // a faraway obstacle removes nothing
  TriMesh far_box = box.transformed({Vec3(10.0, 0.0, 0.0), Quat::Identity()});
  auto kept = filter_colliding_candidates(candidates, {far_box}, wide_gripper());
  REQUIRE(kept.size() == candidates.size());
  for (std::size_t i = 0; i < kept.size(); ++i) {
    CHECK(kept[i].center.isApprox(candidates[i].center, 1e-15));
  }

  // the part itself as obstacle collides with nothing (self-filtered already),
  // but an overlapping copy shifted into the gripper volume removes some
  TriMesh shifted = box.transformed({Vec3(0.0, 0.0, -0.3), Quat::Identity()});
  auto fewer = filter_colliding_candidates(candidates, {shifted}, wide_gripper());
  CHECK(fewer.size() < candidates.size());
  // order of the survivors is preserved (subsequence of the input)
  std::size_t cursor = 0;
  for (const GraspCandidate& cand : fewer) {
    while (cursor < candidates.size() &&
           !candidates[cursor].center.isApprox(cand.center, 1e-15)) {
      ++cursor;
    }
    CHECK(cursor < candidates.size());
  }
}

TEST_CASE("grasp_similarity frozen values") {
  GraspCandidate cand = candidate_at(Vec3(0.1, 0.0, 0.0), Quat::Identity());
  EndEffectorPose hand{Vec3(0.1, 0.03, 0.04), Quat::Identity(), FrameId::robot};
  auto [pos, ori] = grasp_similarity(cand, hand);
  CHECK(pos == doctest::Approx(0.05).epsilon(1e-12));
  CHECK(ori == doctest::Approx(0.0).epsilon(1e-12));

  // 90 degree rotation maps to 0.5 on the [0, 1] scale
  hand.position = cand.center;
  hand.orientation = Quat(Eigen::AngleAxisd(M_PI_2, Vec3::UnitZ()));
  auto [pos2, ori2] = grasp_similarity(cand, hand);
  CHECK(pos2 == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(ori2 == doctest::Approx(0.5).epsilon(1e-12));

  // quaternion sign flip does not change the measure
  hand.orientation.coeffs() = -hand.orientation.coeffs();
  CHECK(grasp_similarity(cand, hand).second == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("grasp_similarity validates quaternions") {
  GraspCandidate cand = candidate_at(Vec3::Zero(), Quat::Identity());
  EndEffectorPose hand;
  hand.orientation = Quat(2.0, 0.0, 0.0, 0.0);  // not unit
  CHECK_THROWS_AS(grasp_similarity(cand, hand), ValidationError);
}

TEST_CASE("snap_to_grasp picks the nearest qualifying candidate") {
  std::vector<GraspCandidate> candidates{
      candidate_at(Vec3(0.04, 0.0, 0.0), Quat::Identity()),
      candidate_at(Vec3(0.01, 0.0, 0.0), Quat::Identity()),
      candidate_at(Vec3(0.02, 0.0, 0.0), Quat::Identity()),
  };
  EndEffectorPose hand{Vec3::Zero(), Quat::Identity(), FrameId::robot};
  SimilarityThresholds th;  // 0.05 m, 0.25

  auto best = snap_to_grasp(candidates, hand, th);
  REQUIRE(best.has_value());
  CHECK(best->center.x() == doctest::Approx(0.01).epsilon(1e-12));

  // ties keep the earliest candidate
  std::vector<GraspCandidate> tied{candidate_at(Vec3(0.01, 0.0, 0.0), Quat::Identity()),
                                   candidate_at(Vec3(-0.01, 0.0, 0.0), Quat::Identity())};
  auto first = snap_to_grasp(tied, hand, th);
  REQUIRE(first.has_value());
  CHECK(first->center.x() == doctest::Approx(0.01).epsilon(1e-12));

  // out-of-threshold position: no snap
  hand.position = Vec3(1.0, 0.0, 0.0);
  CHECK(!snap_to_grasp(candidates, hand, th).has_value());

  // orientation over threshold: no snap even at zero distance
  hand.position = Vec3(0.01, 0.0, 0.0);
  hand.orientation = Quat(Eigen::AngleAxisd(M_PI_2, Vec3::UnitY()));
  CHECK(!snap_to_grasp(candidates, hand, th).has_value());
}

TEST_CASE("gripper spec validation") {
  GripperSpec spec;
  spec.max_opening = 0.0;
  CHECK_THROWS_AS(spec.validate(), ValidationError);
  spec = GripperSpec{};
  spec.finger_box.y() = -1.0;
  CHECK_THROWS_AS(spec.validate(), ValidationError);
}
