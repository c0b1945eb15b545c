#pragma once

#include "disasm/grasp.hpp"
#include "disasm/hand_pose.hpp"
#include "disasm/impedance.hpp"
#include "disasm/metrics.hpp"
#include "disasm/snapfit.hpp"

#include <optional>
#include <vector>

namespace disasm {

enum class FailureReason { slip, mount_break, workspace, hook_broken };

struct FailureLimits {
  double slip_force = 40.0;         // N, tangential load at the grasp
  double mount_break_force = 120.0; // N
  double workspace_radius = 1.5;    // m

  void validate() const;
};

/// Solver and coupling constants of the quasi-static plant.
struct SimParams {
  double k_grasp_t = 5000.0;  // N/m, grasp spring
  double k_grasp_r = 50.0;    // N*m/rad
  double k_fix_t = 4000.0;    // N/m, fixation anchor spring (dual-arm mode)
  double k_fix_r = 300.0;     // N*m/rad
  double control_dt = 1e-3;   // s
  double servo_tau = 0.05;    // s, first-order end-effector tracking
  int settle_iterations = 50;
  double settle_damping = 0.5;
  double force_residual_tol = 1e-3;   // N
  double torque_residual_tol = 1e-4;  // N*m
};

struct HookState {
  bool released = false;
  bool broken = false;
};

struct Scene {
  TriMesh base;   // chassis, immobile
  TriMesh part;   // disassembly target, in its own local frame
  std::vector<SnapFitHook> hooks;  // anchors in the part's local frame
  Pose part_pose;                  // current world pose of the part
  Pose initial_part_pose;
  std::optional<GraspCandidate> fixation_grasp;
  std::optional<GraspCandidate> disassembly_grasp;
  GripperSpec gripper;
  FailureLimits limits;
  SimParams params;

  // runtime state
  std::vector<HookState> hook_states;
  std::optional<Pose> grasp_in_part;     // disassembly grasp frame, part coords
  std::optional<Vec3> fixation_in_part;  // fixation anchor point, part coords
  bool dual_arm = false;
  bool hook_break_flag = false;

  void reset_state();
  [[nodiscard]] int released_count() const;
  [[nodiscard]] bool all_released() const;
  [[nodiscard]] bool grasp_established() const { return grasp_in_part.has_value(); }
};

struct SceneConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// One quasi-static plant update. The grasped part is pulled toward the
/// target through the grasp spring, engaged hooks and (in dual-arm mode) the
/// fixation anchor push back, and the local static balance is solved by
/// damped fixed-point iteration. Returns the updated scene and the reaction
/// wrench (force, torque) the part exerts on the end effector.
std::pair<Scene, Vec6> step_scene(Scene scene, const ControlTarget& ee_target, GripCommand grip,
                                  double dt);

std::optional<FailureReason> detect_failure(const Scene& scene, const Vec6& wrench,
                                            const EndEffectorPose& ee_pose);

struct DeviationSample {
  double t = 0.0;
  Pose pose;
  double deviation = 0.0;  // m + rad
};

struct TrialResult {
  bool success = false;
  std::optional<FailureReason> failure;
  bool aborted = false;  // balance solver failed to converge
  std::vector<DeviationSample> deviation_series;
  int released_hooks = 0;
  double duration = 0.0;          // s, time of the final hook release
  double peak_contact_force = 0.0;  // N
};

struct NoiseModel {
  std::uint64_t seed = 0;
  double sigma = 0.0;  // m, Gaussian tracking noise on hand keypoints
};

struct ControllerConfig {
  ControlMode mode = ControlMode::hybrid;
  ImpedanceParams impedance;
  SimilarityThresholds snap_thresholds;
  KeypointFilterParams keypoint_filter;
  Vec3 depth_axis{0.0, 1.0, 0.0};  // camera depth direction
};

/// Full pipeline over one recorded trajectory: keypoint filtering, hand-frame
/// construction, calibration, grasp snapping, then per-step hybrid control
/// against the quasi-static plant. grasp_candidates may be precomputed; when
/// null they are generated from the scene.
TrialResult run_trial(const Scene& scene, const std::vector<HandKeypoints>& trajectory,
                      const Calibration& cal, const ControllerConfig& controller, bool dual_arm,
                      const NoiseModel& noise,
                      const std::vector<GraspCandidate>* grasp_candidates = nullptr);

/// Candidates for the disassembly grasp: generated on the part, filtered
/// against the chassis.
std::vector<GraspCandidate> scene_grasp_candidates(const Scene& scene,
                                                   const GraspSamplingParams& params = {});

inline double success_rate(const std::vector<TrialResult>& results) {
  std::vector<bool> flags;
  flags.reserve(results.size());
  for (const TrialResult& r : results) flags.push_back(r.success);
  return success_rate(flags);
}

}  // namespace disasm
