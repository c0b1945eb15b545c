#include "disasm/sim.hpp"

#include <cmath>
#include <random>

namespace disasm {

void FailureLimits::validate() const {
  if (!(slip_force > 0.0 && mount_break_force > 0.0 && workspace_radius > 0.0)) {
    throw ValidationError("FailureLimits: all limits must be positive");
  }
}

void Scene::reset_state() {
  part_pose = initial_part_pose;
  hook_states.assign(hooks.size(), HookState{});
  grasp_in_part.reset();
  hook_break_flag = false;
  if (fixation_grasp) {
    fixation_in_part = initial_part_pose.inverse().apply(fixation_grasp->center);
  } else {
    fixation_in_part = Vec3::Zero();
  }
}

int Scene::released_count() const {
  int n = 0;
  for (const HookState& h : hook_states) n += h.released ? 1 : 0;
  return n;
}

bool Scene::all_released() const {
  return released_count() == static_cast<int>(hooks.size());
}

namespace {

struct WrenchAccumulator {
  Vec3 force{Vec3::Zero()};
  Vec3 torque{Vec3::Zero()};
  double k_t = 0.0;  // translational stiffness scale for the damped update
  double k_r = 0.0;  // rotational stiffness scale

  void add_point_force(const Vec3& f, const Vec3& point, const Vec3& about, double k) {
    force += f;
    torque += (point - about).cross(f);
    double r2 = (point - about).squaredNorm();
    k_t += k;
    k_r += k * r2;
  }

  void add_torque(const Vec3& tau, double k) {
    torque += tau;
    k_r += k;
  }
};

/// Net wrench on the part at its current pose; also returns the grasp spring
/// reaction so the caller can feed it back to the controller.
WrenchAccumulator part_wrench(const Scene& scene, const EndEffectorPose& ee, Vec6* reaction) {
  WrenchAccumulator acc;
  const Vec3 origin = scene.part_pose.position;
  const SimParams& sp = scene.params;

  // disassembly grasp spring
  Pose grasp_world = scene.part_pose * (*scene.grasp_in_part);
  Vec3 f_grasp = sp.k_grasp_t * (ee.position - grasp_world.position);
  Vec3 tau_grasp = sp.k_grasp_r * quat_log(ee.orientation * grasp_world.orientation.conjugate());
  acc.add_point_force(f_grasp, grasp_world.position, origin, sp.k_grasp_t);
  acc.add_torque(tau_grasp, sp.k_grasp_r);
  if (reaction) {
    reaction->head<3>() = -f_grasp;
    reaction->tail<3>() = -tau_grasp;
  }

  // snap-fit hooks
  Quat dq = scene.part_pose.orientation * scene.initial_part_pose.orientation.conjugate();
  Vec3 rot_err = quat_log(dq);
  for (std::size_t i = 0; i < scene.hooks.size(); ++i) {
    const HookState& hs = scene.hook_states[i];
    if (hs.released || hs.broken) continue;
    const SnapFitHook& hook = scene.hooks[i];
    Vec3 a_now = scene.part_pose.apply(hook.anchor);
    Vec3 a_init = scene.initial_part_pose.apply(hook.anchor);
    Vec3 delta = a_now - a_init;
    double out_of_plane = delta.dot(hook.extraction_axis);
    Vec3 in_plane = delta - out_of_plane * hook.extraction_axis;
    Vec3 f_hook = -hook.k_out * out_of_plane * hook.extraction_axis - hook.k_in * in_plane;
    acc.add_point_force(f_hook, a_now, origin, std::max(hook.k_in, hook.k_out));
    acc.add_torque(-hook.k_rot * rot_err, hook.k_rot);
  }

  // fixation anchor (dual-arm mode)
  if (scene.dual_arm && scene.fixation_in_part) {
    Vec3 p_now = scene.part_pose.apply(*scene.fixation_in_part);
    Vec3 p_init = scene.initial_part_pose.apply(*scene.fixation_in_part);
    acc.add_point_force(-sp.k_fix_t * (p_now - p_init), p_now, origin, sp.k_fix_t);
    acc.add_torque(-sp.k_fix_r * rot_err, sp.k_fix_r);
  }
  return acc;
}

}  // namespace

std::pair<Scene, Vec6> step_scene(Scene scene, const ControlTarget& ee_target, GripCommand grip,
                                  double dt) {
  if (!(dt > 0.0)) throw ValidationError("step_scene: dt must be positive");
  if (scene.hook_states.size() != scene.hooks.size()) scene.reset_state();

  const EndEffectorPose& ee = ee_target.reference;
  Vec6 reaction = Vec6::Zero();

  if (!scene.grasp_established()) {
    if (grip == GripCommand::close && scene.disassembly_grasp) {
      scene.grasp_in_part = scene.part_pose.inverse() * scene.disassembly_grasp->pose();
    } else {
      return {std::move(scene), reaction};
    }
  }

  for (int it = 0; it < scene.params.settle_iterations; ++it) {
    WrenchAccumulator acc = part_wrench(scene, ee, nullptr);
    if (acc.k_t <= 0.0) break;
    Vec3 dp = scene.params.settle_damping * acc.force / acc.k_t;
    scene.part_pose.position += dp;
    if (acc.k_r > 0.0) {
      Vec3 dr = scene.params.settle_damping * acc.torque / acc.k_r;
      scene.part_pose.orientation = (quat_exp(dr) * scene.part_pose.orientation).normalized();
    }
  }

  WrenchAccumulator residual = part_wrench(scene, ee, &reaction);
  if (residual.force.norm() > scene.params.force_residual_tol ||
      residual.torque.norm() > scene.params.torque_residual_tol) {
    throw SceneConvergenceError("step_scene: static balance did not converge");
  }

  // hook release / breakage at the settled pose
  for (std::size_t i = 0; i < scene.hooks.size(); ++i) {
    HookState& hs = scene.hook_states[i];
    if (hs.released || hs.broken) continue;
    const SnapFitHook& hook = scene.hooks[i];
    Vec3 delta = scene.part_pose.apply(hook.anchor) - scene.initial_part_pose.apply(hook.anchor);
    double out_of_plane = delta.dot(hook.extraction_axis);
    if (out_of_plane >= hook.release_deflection) {
      hs.released = true;
      continue;
    }
    Vec3 in_plane = delta - out_of_plane * hook.extraction_axis;
    double load = (hook.k_out * out_of_plane * hook.extraction_axis + hook.k_in * in_plane).norm();
    if (load > hook.break_force) {
      hs.broken = true;
      scene.hook_break_flag = true;
    }
  }
  return {std::move(scene), reaction};
}

std::optional<FailureReason> detect_failure(const Scene& scene, const Vec6& wrench,
                                            const EndEffectorPose& ee_pose) {
  scene.limits.validate();
  Vec3 force = wrench.head<3>();
  if (scene.grasp_established()) {
    Vec3 closing = (scene.part_pose * (*scene.grasp_in_part)).orientation * Vec3::UnitX();
    Vec3 tangential = force - force.dot(closing) * closing;
    if (tangential.norm() > scene.limits.slip_force) return FailureReason::slip;
  }
  if (force.norm() > scene.limits.mount_break_force) return FailureReason::mount_break;
  if (ee_pose.position.norm() > scene.limits.workspace_radius) return FailureReason::workspace;
  return std::nullopt;
}

std::vector<GraspCandidate> scene_grasp_candidates(const Scene& scene,
                                                   const GraspSamplingParams& params) {
  TriMesh part_world = scene.part.transformed(scene.initial_part_pose);
  auto candidates = generate_grasp_candidates(part_world, scene.gripper, params);
  return filter_colliding_candidates(candidates, {scene.base}, scene.gripper);
}

TrialResult run_trial(const Scene& scene_in, const std::vector<HandKeypoints>& trajectory,
                      const Calibration& cal, const ControllerConfig& controller, bool dual_arm,
                      const NoiseModel& noise,
                      const std::vector<GraspCandidate>* grasp_candidates) {
  if (trajectory.empty()) throw ValidationError("run_trial: empty trajectory");

  Scene scene = scene_in;
  scene.reset_state();
  scene.dual_arm = dual_arm;

  std::vector<GraspCandidate> generated;
  if (!grasp_candidates) {
    generated = scene_grasp_candidates(scene);
    grasp_candidates = &generated;
  }

  // seeded tracking noise on the recorded keypoints
  std::vector<HandKeypoints> noisy = trajectory;
  if (noise.sigma > 0.0) {
    std::mt19937_64 rng(noise.seed);
    std::normal_distribution<double> gauss(0.0, noise.sigma);
    for (HandKeypoints& kp : noisy) {
      for (Vec3* p : {&kp.wrist, &kp.index_base, &kp.thumb_base}) {
        for (int k = 0; k < 3; ++k) (*p)[k] += gauss(rng);
      }
    }
  }

  std::vector<HandKeypoints> frames = filter_stable_keypoints(noisy, controller.keypoint_filter);

  TrialResult result;
  const Pose initial_pose = scene.initial_part_pose;
  auto record = [&](double t) {
    PoseSample now{t, scene.part_pose.position, scene.part_pose.orientation};
    PoseSample init{0.0, initial_pose.position, initial_pose.orientation};
    result.deviation_series.push_back({t, scene.part_pose, pose_deviation(now, init)});
  };

  ImpedanceState imp_state;
  Vec6 wrench = Vec6::Zero();
  EndEffectorPose ee_actual{Vec3::Zero(), Quat::Identity(), FrameId::robot};
  bool grasped = false;
  Pose hand_at_snap;
  Pose grasp_pose;
  std::optional<double> completion_time;
  double sim_time = frames.empty() ? 0.0 : frames.front().timestamp;
  bool done = false;

  for (std::size_t i = 0; i < frames.size() && !done; ++i) {
    const HandKeypoints& frame = frames[i];
    sim_time = frame.timestamp;

    EndEffectorPose hand;
    try {
      hand = camera_to_robot(build_hand_frame(frame, controller.depth_axis), cal);
    } catch (const ValidationError&) {
      record(sim_time);
      continue;  // degenerate frame, skip
    }

    if (!grasped) {
      ee_actual = hand;
      if (auto fail = detect_failure(scene, Vec6::Zero(), ee_actual)) {
        result.failure = fail;
        record(sim_time);
        break;
      }
      if (frame.grip == GripCommand::close) {
        auto snap = snap_to_grasp(*grasp_candidates, hand, controller.snap_thresholds);
        if (snap) {
          scene.disassembly_grasp = *snap;
          grasp_pose = snap->pose();
          ee_actual = {grasp_pose.position, grasp_pose.orientation, FrameId::robot};
          ControlTarget establish{ee_actual, ee_actual, controller.mode};
          try {
            std::tie(scene, wrench) = step_scene(scene, establish, GripCommand::close,
                                                 scene.params.control_dt);
          } catch (const SceneConvergenceError&) {
            result.aborted = true;
            record(sim_time);
            break;
          }
          hand_at_snap = hand.pose();
          grasped = true;
          imp_state = ImpedanceState{};
        }
      }
      record(sim_time);
      continue;
    }

    // nominal target: demonstrated motion since the snap, applied to the grasp
    EndEffectorPose nominal;
    nominal.frame_id = FrameId::robot;
    nominal.position = grasp_pose.position + (hand.position - hand_at_snap.position);
    nominal.orientation =
        (hand.orientation * hand_at_snap.orientation.conjugate() * grasp_pose.orientation)
            .normalized();

    double frame_span = (i + 1 < frames.size()) ? frames[i + 1].timestamp - frame.timestamp
                                                : scene.params.control_dt;
    int substeps = std::max(1, static_cast<int>(std::llround(frame_span / scene.params.control_dt)));
    double beta = 1.0 - std::exp(-scene.params.control_dt / scene.params.servo_tau);

    for (int s = 0; s < substeps && !done; ++s) {
      auto [target, next_state] = hybrid_target(controller.mode, nominal, imp_state,
                                                controller.impedance, wrench,
                                                scene.params.control_dt);
      imp_state = next_state;
      ee_actual.position += beta * (target.reference.position - ee_actual.position);
      ee_actual.orientation =
          ee_actual.orientation.slerp(beta, target.reference.orientation).normalized();

      ControlTarget plant{nominal, ee_actual, controller.mode};
      try {
        std::tie(scene, wrench) = step_scene(scene, plant, GripCommand::close,
                                             scene.params.control_dt);
      } catch (const SceneConvergenceError&) {
        result.aborted = true;
        done = true;
        break;
      }
      result.peak_contact_force = std::max(result.peak_contact_force, wrench.head<3>().norm());

      if (auto fail = detect_failure(scene, wrench, ee_actual)) {
        result.failure = fail;
        done = true;
        break;
      }
      if (scene.hook_break_flag) {
        result.failure = FailureReason::hook_broken;
        done = true;
        break;
      }
      if (!completion_time && scene.all_released()) {
        completion_time = frame.timestamp + (s + 1) * scene.params.control_dt;
      }
    }
    record(sim_time);
  }

  result.released_hooks = scene.released_count();
  result.success = !result.failure && !result.aborted && scene.all_released() && grasped;
  result.duration = completion_time.value_or(sim_time);
  return result;
}

}  // namespace disasm
