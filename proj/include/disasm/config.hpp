#pragma once

#include "disasm/sim.hpp"

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

namespace disasm {

/// Scene file plus the controller and sampling sections it carries.
struct SceneBundle {
  Scene scene;
  ControllerConfig controller;
  GraspSamplingParams sampling;
};

/// Loads a scene configuration JSON; mesh paths resolve relative to the file.
SceneBundle load_scene(const std::string& path);

struct MethodSpec {
  std::string name;
  bool dual_arm = false;
  bool hybrid = false;
};

struct ExperimentConfig {
  std::string scene_path;
  std::vector<std::string> trajectory_paths;
  std::string calibration_path;
  std::vector<MethodSpec> methods;
  int trials_per_method = 10;
  double noise_sigma = 0.0;
  std::uint64_t base_seed = 0;
  std::string output_dir = "out";
  int jobs = 1;

  void validate() const;
};

ExperimentConfig load_experiment_config(const std::string& path);

/// Every default materialized, for report provenance.
nlohmann::json materialized_config(const ExperimentConfig& cfg, const SceneBundle& bundle);

nlohmann::json to_json(const Vec3& v);
nlohmann::json to_json(const Quat& q);  // stored (x, y, z, w)
nlohmann::json to_json(const GraspCandidate& cand);

}  // namespace disasm
