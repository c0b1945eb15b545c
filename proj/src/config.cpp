#include "disasm/config.hpp"

#include <filesystem>
#include <fstream>

namespace disasm {

namespace {

using nlohmann::json;

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in.good()) throw IoError("cannot open config file: " + path);
  try {
    json j;
    in >> j;
    return j;
  } catch (const json::parse_error& e) {
    throw ValidationError("malformed JSON in " + path + ": " + e.what());
  }
}

Vec3 get_vec3(const json& j) {
  if (!j.is_array() || j.size() != 3) throw ValidationError("expected a 3-element array");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

Quat get_quat(const json& j) {
  if (!j.is_array() || j.size() != 4) throw ValidationError("expected a quaternion [x,y,z,w]");
  Quat q(j[3].get<double>(), j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
  return q.normalized();
}

Vec6 get_vec6(const json& j) {
  if (!j.is_array() || j.size() != 6) throw ValidationError("expected a 6-element array");
  Vec6 v;
  for (int i = 0; i < 6; ++i) v[i] = j[i].get<double>();
  return v;
}

Pose get_pose(const json& j) {
  Pose p;
  if (j.contains("position")) p.position = get_vec3(j.at("position"));
  if (j.contains("rotation")) p.orientation = get_quat(j.at("rotation"));
  return p;
}

template <typename T>
void maybe(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

std::string resolve(const std::string& base_dir, const std::string& path) {
  std::filesystem::path p(path);
  if (p.is_absolute()) return path;
  return (std::filesystem::path(base_dir) / p).string();
}

}  // namespace

json to_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

json to_json(const Quat& q) { return json::array({q.x(), q.y(), q.z(), q.w()}); }

json to_json(const GraspCandidate& cand) {
  return json{{"center", to_json(cand.center)},
              {"rotation", to_json(cand.orientation)},
              {"jaw_width", cand.jaw_width},
              {"contact_a", to_json(cand.contact_a.position)},
              {"contact_b", to_json(cand.contact_b.position)},
              {"face_a", cand.contact_a.face_id},
              {"face_b", cand.contact_b.face_id}};
}

SceneBundle load_scene(const std::string& path) {
  json j = read_json_file(path);
  std::string dir = std::filesystem::path(path).parent_path().string();

  SceneBundle bundle;
  Scene& scene = bundle.scene;
  scene.base = load_mesh(resolve(dir, j.at("base_mesh").get<std::string>()));
  scene.part = load_mesh(resolve(dir, j.at("part_mesh").get<std::string>()));
  if (j.contains("part_pose")) scene.initial_part_pose = get_pose(j.at("part_pose"));
  scene.part_pose = scene.initial_part_pose;

  Eigen::AlignedBox3d part_box = scene.part.bounds();
  for (const json& hj : j.at("hooks")) {
    SnapFitHook hook;
    hook.anchor = get_vec3(hj.at("anchor"));
    hook.theta = hj.at("theta").get<double>();
    hook.extraction_axis = get_vec3(hj.at("extraction_axis")).normalized();
    maybe(hj, "k_in", hook.k_in);
    maybe(hj, "k_out", hook.k_out);
    maybe(hj, "k_rot", hook.k_rot);
    maybe(hj, "release_deflection", hook.release_deflection);
    maybe(hj, "break_force", hook.break_force);
    hook.validate();
    Eigen::AlignedBox3d grown = part_box;
    grown.min() -= Vec3::Constant(1e-6);
    grown.max() += Vec3::Constant(1e-6);
    if (!grown.contains(hook.anchor)) {
      throw ValidationError("hook anchor outside the part bounding volume");
    }
    scene.hooks.push_back(hook);
  }

  if (j.contains("gripper")) {
    const json& gj = j.at("gripper");
    maybe(gj, "max_opening", scene.gripper.max_opening);
    maybe(gj, "finger_length", scene.gripper.finger_length);
    if (gj.contains("finger_box")) scene.gripper.finger_box = get_vec3(gj.at("finger_box"));
    if (gj.contains("palm_box")) scene.gripper.palm_box = get_vec3(gj.at("palm_box"));
    maybe(gj, "grip_force_limit", scene.gripper.grip_force_limit);
    maybe(gj, "contact_clearance", scene.gripper.contact_clearance);
  }
  scene.gripper.validate();

  if (j.contains("limits")) {
    const json& lj = j.at("limits");
    maybe(lj, "slip_force", scene.limits.slip_force);
    maybe(lj, "mount_break_force", scene.limits.mount_break_force);
    maybe(lj, "workspace_radius", scene.limits.workspace_radius);
  }
  scene.limits.validate();

  if (j.contains("sim")) {
    const json& sj = j.at("sim");
    maybe(sj, "k_grasp_t", scene.params.k_grasp_t);
    maybe(sj, "k_grasp_r", scene.params.k_grasp_r);
    maybe(sj, "k_fix_t", scene.params.k_fix_t);
    maybe(sj, "k_fix_r", scene.params.k_fix_r);
    maybe(sj, "control_dt", scene.params.control_dt);
    maybe(sj, "servo_tau", scene.params.servo_tau);
    maybe(sj, "settle_iterations", scene.params.settle_iterations);
    maybe(sj, "settle_damping", scene.params.settle_damping);
    maybe(sj, "force_residual_tol", scene.params.force_residual_tol);
    maybe(sj, "torque_residual_tol", scene.params.torque_residual_tol);
  }

  if (j.contains("fixation_grasp")) {
    const json& fj = j.at("fixation_grasp");
    GraspCandidate fix;
    fix.center = get_vec3(fj.at("center"));
    if (fj.contains("rotation")) fix.orientation = get_quat(fj.at("rotation"));
    maybe(fj, "jaw_width", fix.jaw_width);
    scene.fixation_grasp = fix;
  }

  if (j.contains("controller")) {
    const json& cj = j.at("controller");
    if (cj.contains("impedance")) {
      const json& ij = cj.at("impedance");
      if (ij.contains("mass")) bundle.controller.impedance.mass = get_vec6(ij.at("mass"));
      if (ij.contains("damping")) bundle.controller.impedance.damping = get_vec6(ij.at("damping"));
      if (ij.contains("stiffness"))
        bundle.controller.impedance.stiffness = get_vec6(ij.at("stiffness"));
      maybe(ij, "dt_max", bundle.controller.impedance.dt_max);
    }
    if (cj.contains("snap")) {
      maybe(cj.at("snap"), "max_pos_diff", bundle.controller.snap_thresholds.max_pos_diff);
      maybe(cj.at("snap"), "max_ori_diff", bundle.controller.snap_thresholds.max_ori_diff);
    }
    maybe(cj, "ema_alpha", bundle.controller.keypoint_filter.ema_alpha);
    if (cj.contains("depth_axis"))
      bundle.controller.depth_axis = get_vec3(cj.at("depth_axis")).normalized();
  }
  bundle.controller.impedance.validate();

  if (j.contains("sampling")) {
    const json& sj = j.at("sampling");
    maybe(sj, "cluster_angle_tol", bundle.sampling.cluster_angle_tol);
    maybe(sj, "contact_spacing", bundle.sampling.contact_spacing);
    maybe(sj, "boundary_margin", bundle.sampling.boundary_margin);
    maybe(sj, "approach_rotations", bundle.sampling.approach_rotations);
    maybe(sj, "antipodal_tol", bundle.sampling.antipodal_tol);
  }
  return bundle;
}

void ExperimentConfig::validate() const {
  if (trials_per_method < 1) throw ValidationError("trials_per_method must be >= 1");
  if (methods.empty()) throw ValidationError("experiment needs at least one method");
  if (trajectory_paths.empty()) throw ValidationError("experiment needs at least one trajectory");
  for (std::size_t i = 0; i < methods.size(); ++i) {
    for (std::size_t k = i + 1; k < methods.size(); ++k) {
      if (methods[i].name == methods[k].name) throw ValidationError("duplicate method name");
    }
  }
}

ExperimentConfig load_experiment_config(const std::string& path) {
  json j = read_json_file(path);
  std::string dir = std::filesystem::path(path).parent_path().string();

  ExperimentConfig cfg;
  cfg.scene_path = resolve(dir, j.at("scene").get<std::string>());
  for (const json& t : j.at("trajectories")) {
    cfg.trajectory_paths.push_back(resolve(dir, t.get<std::string>()));
  }
  cfg.calibration_path = resolve(dir, j.at("calibration").get<std::string>());
  for (const json& mj : j.at("methods")) {
    MethodSpec m;
    m.name = mj.at("name").get<std::string>();
    maybe(mj, "dual_arm", m.dual_arm);
    maybe(mj, "hybrid", m.hybrid);
    cfg.methods.push_back(m);
  }
  maybe(j, "trials_per_method", cfg.trials_per_method);
  maybe(j, "noise_sigma", cfg.noise_sigma);
  maybe(j, "base_seed", cfg.base_seed);
  maybe(j, "output_dir", cfg.output_dir);
  cfg.validate();
  return cfg;
}

json materialized_config(const ExperimentConfig& cfg, const SceneBundle& bundle) {
  const Scene& scene = bundle.scene;
  const ControllerConfig& ctrl = bundle.controller;
  json methods = json::array();
  for (const MethodSpec& m : cfg.methods) {
    methods.push_back({{"name", m.name}, {"dual_arm", m.dual_arm}, {"hybrid", m.hybrid}});
  }
  json hooks = json::array();
  for (const SnapFitHook& h : scene.hooks) {
    hooks.push_back({{"anchor", to_json(h.anchor)},
                     {"theta", h.theta},
                     {"extraction_axis", to_json(h.extraction_axis)},
                     {"k_in", h.k_in},
                     {"k_out", h.k_out},
                     {"k_rot", h.k_rot},
                     {"release_deflection", h.release_deflection},
                     {"break_force", h.break_force}});
  }
  auto vec6 = [](const Vec6& v) {
    json a = json::array();
    for (int i = 0; i < 6; ++i) a.push_back(v[i]);
    return a;
  };
  return json{
      {"scene", cfg.scene_path},
      {"trajectories", cfg.trajectory_paths},
      {"calibration", cfg.calibration_path},
      {"methods", methods},
      {"trials_per_method", cfg.trials_per_method},
      {"noise_sigma", cfg.noise_sigma},
      {"base_seed", cfg.base_seed},
      {"hooks", hooks},
      {"gripper",
       {{"max_opening", scene.gripper.max_opening},
        {"finger_length", scene.gripper.finger_length},
        {"finger_box", to_json(scene.gripper.finger_box)},
        {"palm_box", to_json(scene.gripper.palm_box)},
        {"grip_force_limit", scene.gripper.grip_force_limit},
        {"contact_clearance", scene.gripper.contact_clearance}}},
      {"limits",
       {{"slip_force", scene.limits.slip_force},
        {"mount_break_force", scene.limits.mount_break_force},
        {"workspace_radius", scene.limits.workspace_radius}}},
      {"sim",
       {{"k_grasp_t", scene.params.k_grasp_t},
        {"k_grasp_r", scene.params.k_grasp_r},
        {"k_fix_t", scene.params.k_fix_t},
        {"k_fix_r", scene.params.k_fix_r},
        {"control_dt", scene.params.control_dt},
        {"servo_tau", scene.params.servo_tau},
        {"settle_iterations", scene.params.settle_iterations},
        {"settle_damping", scene.params.settle_damping}}},
      {"controller",
       {{"impedance",
         {{"mass", vec6(ctrl.impedance.mass)},
          {"damping", vec6(ctrl.impedance.damping)},
          {"stiffness", vec6(ctrl.impedance.stiffness)},
          {"dt_max", ctrl.impedance.dt_max}}},
        {"snap",
         {{"max_pos_diff", ctrl.snap_thresholds.max_pos_diff},
          {"max_ori_diff", ctrl.snap_thresholds.max_ori_diff}}},
        {"ema_alpha", ctrl.keypoint_filter.ema_alpha},
        {"depth_axis", to_json(ctrl.depth_axis)}}},
      {"sampling",
       {{"cluster_angle_tol", bundle.sampling.cluster_angle_tol},
        {"contact_spacing", bundle.sampling.contact_spacing},
        {"boundary_margin", bundle.sampling.boundary_margin},
        {"approach_rotations", bundle.sampling.approach_rotations},
        {"antipodal_tol", bundle.sampling.antipodal_tol}}},
  };
}

}  // namespace disasm
