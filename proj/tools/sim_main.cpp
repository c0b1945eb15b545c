#include "disasm/harness.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

constexpr int kExitConfigError = 2;
constexpr int kExitIoError = 3;

int cmd_run(const std::string& config_path, const std::string& out_override,
            std::optional<std::uint64_t> seed_override, int jobs) {
  disasm::ExperimentConfig cfg = disasm::load_experiment_config(config_path);
  if (!out_override.empty()) cfg.output_dir = out_override;
  if (seed_override) cfg.base_seed = *seed_override;
  cfg.jobs = jobs;

  disasm::ExperimentReport report = disasm::run_experiment(cfg);
  auto files = disasm::emit_report(report, cfg.output_dir);
  for (const auto& f : files) std::cout << f << "\n";
  for (const auto& m : report.methods) {
    std::cout << m.spec.name << ": success rate " << m.success_rate << "\n";
  }
  return 0;
}

int cmd_grasps(const std::string& scene_path, const std::string& out_path) {
  disasm::SceneBundle bundle = disasm::load_scene(scene_path);
  auto candidates = disasm::scene_grasp_candidates(bundle.scene, bundle.sampling);
  nlohmann::json j = nlohmann::json::array();
  for (const auto& cand : candidates) j.push_back(disasm::to_json(cand));
  if (out_path.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::ofstream out(out_path, std::ios::binary);
    out << j.dump(2) << "\n";
    if (!out.good()) throw disasm::IoError("failed writing " + out_path);
    std::cout << candidates.size() << " candidates -> " << out_path << "\n";
  }
  return 0;
}

int cmd_direction(const std::string& scene_path) {
  disasm::SceneBundle bundle = disasm::load_scene(scene_path);
  if (bundle.scene.hooks.empty()) throw disasm::ValidationError("scene has no hooks");
  disasm::Vec3 dir = disasm::estimate_disassembly_direction(bundle.scene.hooks);
  disasm::Vec3 origin = disasm::Vec3::Zero();
  for (const auto& h : bundle.scene.hooks) {
    origin += bundle.scene.initial_part_pose.apply(h.anchor);
  }
  origin /= static_cast<double>(bundle.scene.hooks.size());
  nlohmann::json j{{"origin", disasm::to_json(origin)}, {"direction", disasm::to_json(dir)}};
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_trial(const std::string& scene_path, const std::string& trajectory_path,
              const std::string& calibration_path, const std::string& mode,
              const std::string& arms, std::uint64_t seed, double sigma,
              const std::string& out_path) {
  disasm::SceneBundle bundle = disasm::load_scene(scene_path);
  auto trajectory = disasm::load_trajectory(trajectory_path);
  disasm::Calibration cal = disasm::load_calibration(calibration_path);
  disasm::ControllerConfig controller = bundle.controller;
  controller.mode =
      mode == "hybrid" ? disasm::ControlMode::hybrid : disasm::ControlMode::position_only;

  disasm::TrialResult result = disasm::run_trial(bundle.scene, trajectory, cal, controller,
                                                 arms == "dual", {seed, sigma});

  nlohmann::json j{{"success", result.success},
                   {"failure", disasm::failure_name(result.failure)},
                   {"aborted", result.aborted},
                   {"released_hooks", result.released_hooks},
                   {"duration", result.duration},
                   {"peak_contact_force", result.peak_contact_force}};
  std::cout << j.dump(2) << "\n";

  if (!out_path.empty()) {
    std::ofstream out(out_path, std::ios::binary);
    out << "t,x,y,z,qx,qy,qz,qw,deviation\n";
    for (const auto& s : result.deviation_series) {
      out << s.t << "," << s.pose.position.x() << "," << s.pose.position.y() << ","
          << s.pose.position.z() << "," << s.pose.orientation.x() << "," << s.pose.orientation.y()
          << "," << s.pose.orientation.z() << "," << s.pose.orientation.w() << "," << s.deviation
          << "\n";
    }
    if (!out.good()) throw disasm::IoError("failed writing " + out_path);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Affordance-guided dual-arm disassembly simulator"};
  app.require_subcommand(1);

  std::string config_path, out_dir, scene_path, out_path, trajectory_path, calibration_path;
  std::string mode = "hybrid", arms = "dual";
  std::uint64_t seed = 0;
  double sigma = 0.0;
  int jobs = 1;
  bool seed_given = false;

  auto* run = app.add_subcommand("run", "Run a full experiment config");
  run->add_option("--config", config_path, "experiment JSON")->required();
  run->add_option("--out", out_dir, "output directory override");
  run->add_option("--seed", seed, "base seed override")->each([&](const std::string&) { seed_given = true; });
  run->add_option("--jobs", jobs, "parallel trial workers");

  auto* grasps = app.add_subcommand("grasps", "Export grasp candidates for a scene");
  grasps->add_option("--scene", scene_path, "scene JSON")->required();
  grasps->add_option("--out", out_path, "candidates JSON output");

  auto* direction = app.add_subcommand("direction", "Estimate the disassembly direction");
  direction->add_option("--scene", scene_path, "scene JSON")->required();

  auto* trial = app.add_subcommand("trial", "Run a single trial");
  trial->add_option("--scene", scene_path)->required();
  trial->add_option("--trajectory", trajectory_path)->required();
  trial->add_option("--calibration", calibration_path)->required();
  trial->add_option("--mode", mode)->check(CLI::IsMember({"hybrid", "position"}));
  trial->add_option("--arms", arms)->check(CLI::IsMember({"dual", "single"}));
  trial->add_option("--seed", seed);
  trial->add_option("--sigma", sigma, "keypoint noise sigma (m)");
  trial->add_option("--out", out_path, "deviation series CSV");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(run)) {
      return cmd_run(config_path, out_dir,
                     seed_given ? std::optional<std::uint64_t>(seed) : std::nullopt, jobs);
    }
    if (app.got_subcommand(grasps)) return cmd_grasps(scene_path, out_path);
    if (app.got_subcommand(direction)) return cmd_direction(scene_path);
    if (app.got_subcommand(trial)) {
      return cmd_trial(scene_path, trajectory_path, calibration_path, mode, arms, seed, sigma,
                       out_path);
    }
  } catch (const disasm::IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kExitIoError;
  } catch (const disasm::ValidationError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
