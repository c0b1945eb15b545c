#include "disasm/sim.hpp"

#include "disasm/collision.hpp"
#include "disasm/config.hpp"
#include "helpers.hpp"

#include <doctest.h>

using namespace disasm;

namespace {

// minimal one-hook scene: part and grasp at the origin, extraction along +x
Scene one_hook_scene() {
  Scene scene;
  SnapFitHook hook;
  hook.anchor = Vec3::Zero();
  hook.extraction_axis = Vec3::UnitX();
  scene.hooks = {hook};

  GraspCandidate grasp;
  grasp.center = Vec3::Zero();
  grasp.orientation = Quat::Identity();
  grasp.jaw_width = 0.02;
  scene.disassembly_grasp = grasp;
  scene.reset_state();
  return scene;
}

ControlTarget target_at(const Vec3& p) {
  EndEffectorPose ee{p, Quat::Identity(), FrameId::robot};
  return {ee, ee, ControlMode::position_only};
}

}  // namespace

TEST_CASE("axial pull settles at the series-spring equilibrium") {
  Scene scene = one_hook_scene();
  double n = 0.003;
  auto [settled, reaction] = step_scene(scene, target_at(Vec3(n, 0.0, 0.0)), GripCommand::close,
                                        1e-3);
  // k_grasp in series with k_out: d = n * k_g / (k_g + k_out)
  double expected = n * 5000.0 / (5000.0 + 1000.0);
  CHECK(settled.part_pose.position.x() == doctest::Approx(expected).epsilon(1e-6));
  CHECK(!settled.hook_states[0].released);
  // the reaction on the end effector opposes the pull
  double expected_force = n * 5000.0 * 1000.0 / 6000.0;
  CHECK(reaction.head<3>().norm() == doctest::Approx(expected_force).epsilon(1e-4));
  CHECK(reaction(0) == doctest::Approx(-expected_force).epsilon(1e-4));
}

TEST_CASE("in-plane displacement loads the k_in spring") {
  Scene scene = one_hook_scene();
  double m = 0.004;
  auto [settled, reaction] = step_scene(scene, target_at(Vec3(0.0, m, 0.0)), GripCommand::close,
                                        1e-3);
  double expected = m * 5000.0 / (5000.0 + 2000.0);
  CHECK(settled.part_pose.position.y() == doctest::Approx(expected).epsilon(1e-6));
  double expected_force = m * 5000.0 * 2000.0 / 7000.0;
  CHECK(reaction.head<3>().norm() == doctest::Approx(expected_force).epsilon(1e-4));
}

TEST_CASE("hook releases once the deflection threshold is crossed") {
  Scene scene = one_hook_scene();
  // equilibrium deflection n * 5/6 stays below the 5 mm threshold
  auto [held, r1] = step_scene(scene, target_at(Vec3(0.0059, 0.0, 0.0)), GripCommand::close, 1e-3);
  CHECK(!held.hook_states[0].released);
  // a deeper pull crosses it
  auto [released, r2] = step_scene(held, target_at(Vec3(0.0061, 0.0, 0.0)), GripCommand::close,
                                   1e-3);
  CHECK(released.hook_states[0].released);
  CHECK(released.all_released());
  // with the hook gone the part follows the end effector force-free
  auto [free, r3] = step_scene(released, target_at(Vec3(0.02, 0.0, 0.0)), GripCommand::close, 1e-3);
  CHECK(free.part_pose.position.x() == doctest::Approx(0.02).epsilon(1e-6));
  CHECK(r3.head<3>().norm() < 1e-3);
}

TEST_CASE("dual-arm fixation stiffens the part") {
  Scene scene = one_hook_scene();
  scene.dual_arm = true;  // fixation anchor defaults to the part origin
  double n = 0.003;
  auto [settled, reaction] = step_scene(scene, target_at(Vec3(n, 0.0, 0.0)), GripCommand::close,
                                        1e-3);
  double expected = n * 5000.0 / (5000.0 + 1000.0 + 4000.0);
  CHECK(settled.part_pose.position.x() == doctest::Approx(expected).epsilon(1e-6));
}

TEST_CASE("overloaded hook breaks instead of releasing") {
  Scene scene = one_hook_scene();
  scene.hooks[0].break_force = 3.0;
  auto [broken, reaction] = step_scene(scene, target_at(Vec3(0.0, 0.004, 0.0)), GripCommand::close,
                                       1e-3);
  CHECK(broken.hook_states[0].broken);
  CHECK(broken.hook_break_flag);
  CHECK(!broken.hook_states[0].released);
}

TEST_CASE("no grasp command leaves the scene untouched") {
  Scene scene = one_hook_scene();
  auto [same, reaction] = step_scene(scene, target_at(Vec3(0.01, 0.0, 0.0)), GripCommand::open,
                                     1e-3);
  CHECK(!same.grasp_established());
  CHECK(same.part_pose.position.norm() == 0.0);
  CHECK(reaction.norm() == 0.0);
}

TEST_CASE("non-convergent settle raises SceneConvergenceError") {
  Scene scene = one_hook_scene();
  scene.params.settle_iterations = 1;
  scene.params.force_residual_tol = 1e-12;
  CHECK_THROWS_AS(step_scene(scene, target_at(Vec3(0.004, 0.0, 0.0)), GripCommand::close, 1e-3),
                  SceneConvergenceError);
  CHECK_THROWS_AS(step_scene(scene, target_at(Vec3::Zero()), GripCommand::close, 0.0),
                  ValidationError);
}

TEST_CASE("detect_failure priorities and thresholds") {
  Scene scene = one_hook_scene();
  scene.grasp_in_part = Pose{};  // closing axis = +x
  EndEffectorPose ee{Vec3::Zero(), Quat::Identity(), FrameId::robot};

  Vec6 w = Vec6::Zero();
  CHECK(!detect_failure(scene, w, ee).has_value());

  w(1) = 50.0;  // tangential, above the 40 N slip limit
  CHECK(detect_failure(scene, w, ee) == FailureReason::slip);

  w.setZero();
  w(0) = 130.0;  // along the closing axis: no slip, above the 120 N mount limit
  CHECK(detect_failure(scene, w, ee) == FailureReason::mount_break);

  w.setZero();
  w(1) = 130.0;  // violates both; slip wins
  CHECK(detect_failure(scene, w, ee) == FailureReason::slip);

  w.setZero();
  ee.position = Vec3(2.0, 0.0, 0.0);
  CHECK(detect_failure(scene, w, ee) == FailureReason::workspace);
}

TEST_CASE("scene grasp candidates avoid the chassis") {
  SceneBundle bundle = load_scene(fixture("scene.json"));
  auto candidates = scene_grasp_candidates(bundle.scene, bundle.sampling);
  CHECK(!candidates.empty());
  for (const GraspCandidate& cand : candidates) {
    CHECK(!check_gripper_collision({bundle.scene.base}, cand, bundle.scene.gripper));
  }
}

TEST_CASE("run_trial extracts the cover in the reference scene") {
  SceneBundle bundle = load_scene(fixture("scene.json"));
  auto trajectory = load_trajectory(fixture("trajectories/straight_pull.jsonl"));
  Calibration cal = load_calibration(fixture("calibration.json"));

  TrialResult r = run_trial(bundle.scene, trajectory, cal, bundle.controller, true, {5, 0.002});
  CHECK(r.success);
  CHECK(r.released_hooks == 4);
  CHECK(!r.failure.has_value());
  CHECK(!r.aborted);
  CHECK(r.duration > 4.0);
  CHECK(r.duration < 10.0);
  CHECK(!r.deviation_series.empty());
  CHECK(r.deviation_series.front().deviation == 0.0);

  // identical inputs reproduce the result bit for bit
  TrialResult again = run_trial(bundle.scene, trajectory, cal, bundle.controller, true, {5, 0.002});
  CHECK(again.peak_contact_force == r.peak_contact_force);
  CHECK(again.duration == r.duration);
  REQUIRE(again.deviation_series.size() == r.deviation_series.size());
  for (std::size_t i = 0; i < r.deviation_series.size(); ++i) {
    CHECK(again.deviation_series[i].deviation == r.deviation_series[i].deviation);
  }
}

TEST_CASE("position-only control slips on the jerky demonstration") {
  SceneBundle bundle = load_scene(fixture("scene.json"));
  auto trajectory = load_trajectory(fixture("trajectories/jump_pull.jsonl"));
  Calibration cal = load_calibration(fixture("calibration.json"));

  ControllerConfig controller = bundle.controller;
  controller.mode = ControlMode::position_only;
  TrialResult pos = run_trial(bundle.scene, trajectory, cal, controller, false, {44, 0.002});
  CHECK(!pos.success);
  CHECK(pos.failure == FailureReason::slip);

  controller.mode = ControlMode::hybrid;
  TrialResult hyb = run_trial(bundle.scene, trajectory, cal, controller, false, {44, 0.002});
  CHECK(hyb.success);
  CHECK(hyb.peak_contact_force < pos.peak_contact_force);
}

TEST_CASE("run_trial rejects an empty trajectory") {
  SceneBundle bundle = load_scene(fixture("scene.json"));
  Calibration cal = load_calibration(fixture("calibration.json"));
  CHECK_THROWS_AS(run_trial(bundle.scene, {}, cal, bundle.controller, true, {}), ValidationError);
}
