#include "disasm/harness.hpp"

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <thread>

namespace disasm {

namespace {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

void log_line(const std::string& msg) {
  const char* level = std::getenv("SIM_LOG");
  if (level && std::string(level) != "quiet" && std::string(level) != "0") {
    std::fprintf(stderr, "[sim] %s\n", msg.c_str());
  }
}

}  // namespace

std::string failure_name(const std::optional<FailureReason>& reason) {
  if (!reason) return "none";
  switch (*reason) {
    case FailureReason::slip: return "slip";
    case FailureReason::mount_break: return "mount_break";
    case FailureReason::workspace: return "workspace";
    case FailureReason::hook_broken: return "hook_broken";
  }
  return "none";
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  SceneBundle bundle = load_scene(cfg.scene_path);
  Calibration cal = load_calibration(cfg.calibration_path);
  std::vector<std::vector<HandKeypoints>> trajectories;
  for (const std::string& path : cfg.trajectory_paths) {
    trajectories.push_back(load_trajectory(path));
    if (trajectories.back().empty()) throw IoError("empty trajectory file: " + path);
  }

  log_line("generating grasp candidates");
  std::vector<GraspCandidate> candidates = scene_grasp_candidates(bundle.scene, bundle.sampling);
  if (candidates.empty()) throw ValidationError("scene yields no grasp candidates");

  ExperimentReport report;
  report.config_echo = materialized_config(cfg, bundle);
  report.estimated_direction =
      bundle.scene.hooks.empty() ? Vec3::UnitX() : estimate_disassembly_direction(bundle.scene.hooks);

  struct Task {
    std::size_t method;
    int trial;
  };
  std::vector<Task> tasks;
  for (std::size_t m = 0; m < cfg.methods.size(); ++m) {
    for (int k = 0; k < cfg.trials_per_method; ++k) tasks.push_back({m, k});
  }

  std::vector<std::vector<TrialRecord>> grid(cfg.methods.size(),
                                             std::vector<TrialRecord>(cfg.trials_per_method));

  auto run_task = [&](const Task& task) {
    const MethodSpec& method = cfg.methods[task.method];
    ControllerConfig controller = bundle.controller;
    controller.mode = method.hybrid ? ControlMode::hybrid : ControlMode::position_only;
    NoiseModel noise{cfg.base_seed + static_cast<std::uint64_t>(task.trial), cfg.noise_sigma};
    const auto& trajectory = trajectories[task.trial % trajectories.size()];

    TrialRecord record;
    record.index = task.trial;
    record.seed = noise.seed;
    record.trajectory = cfg.trajectory_paths[task.trial % trajectories.size()];
    record.result = run_trial(bundle.scene, trajectory, cal, controller, method.dual_arm, noise,
                              &candidates);

    const auto& series = record.result.deviation_series;
    for (const DeviationSample& s : series) {
      record.max_deviation = std::max(record.max_deviation, s.deviation);
    }
    if (series.size() >= 2 && series.back().t > series.front().t) {
      std::vector<PoseSample> samples;
      samples.reserve(series.size());
      for (const DeviationSample& s : series) {
        samples.push_back({s.t, s.pose.position, s.pose.orientation});
      }
      TimelineParams timeline;
      auto normalized = normalize_timeline(samples, timeline);
      const PoseSample& init = samples.front();
      for (const PoseSample& s : normalized) {
        double pos_term = (s.position - init.position).norm();
        double ang_term = quaternion_angle(s.orientation, init.orientation);
        record.norm_pos_term.push_back(pos_term);
        record.norm_ang_term.push_back(ang_term);
        record.norm_deviation.push_back(pos_term + ang_term);
      }
    }
    grid[task.method][task.trial] = std::move(record);
  };

  int jobs = std::max(1, cfg.jobs);
  if (jobs == 1) {
    for (const Task& task : tasks) run_task(task);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    for (int w = 0; w < jobs; ++w) {
      workers.emplace_back([&]() {
        for (;;) {
          std::size_t i = next.fetch_add(1);
          if (i >= tasks.size()) return;
          run_task(tasks[i]);
        }
      });
    }
    for (std::thread& t : workers) t.join();
  }

  for (std::size_t m = 0; m < cfg.methods.size(); ++m) {
    MethodReport method_report;
    method_report.spec = cfg.methods[m];
    method_report.trials = std::move(grid[m]);

    std::vector<bool> successes;
    std::size_t curve_len = 0;
    for (const TrialRecord& t : method_report.trials) {
      successes.push_back(t.result.success);
      method_report.peak_contact_force =
          std::max(method_report.peak_contact_force, t.result.peak_contact_force);
      curve_len = std::max(curve_len, t.norm_deviation.size());
    }
    method_report.success_rate = success_rate(successes);

    if (curve_len > 0) {
      method_report.mean_deviation.assign(curve_len, 0.0);
      method_report.mean_pos_term.assign(curve_len, 0.0);
      method_report.mean_ang_term.assign(curve_len, 0.0);
      int with_curves = 0;
      for (const TrialRecord& t : method_report.trials) {
        if (t.norm_deviation.size() != curve_len) continue;
        ++with_curves;
        for (std::size_t i = 0; i < curve_len; ++i) {
          method_report.mean_deviation[i] += t.norm_deviation[i];
          method_report.mean_pos_term[i] += t.norm_pos_term[i];
          method_report.mean_ang_term[i] += t.norm_ang_term[i];
        }
      }
      if (with_curves > 0) {
        for (std::size_t i = 0; i < curve_len; ++i) {
          method_report.mean_deviation[i] /= with_curves;
          method_report.mean_pos_term[i] /= with_curves;
          method_report.mean_ang_term[i] /= with_curves;
        }
      }
    }
    log_line("method " + method_report.spec.name + " success rate " +
             format_double(method_report.success_rate));
    report.methods.push_back(std::move(method_report));
  }
  return report;
}

nlohmann::json report_to_json(const ExperimentReport& report) {
  nlohmann::json methods = nlohmann::json::array();
  for (const MethodReport& m : report.methods) {
    nlohmann::json trials = nlohmann::json::array();
    for (const TrialRecord& t : m.trials) {
      trials.push_back({{"index", t.index},
                        {"seed", t.seed},
                        {"trajectory", t.trajectory},
                        {"success", t.result.success},
                        {"failure", failure_name(t.result.failure)},
                        {"aborted", t.result.aborted},
                        {"released_hooks", t.result.released_hooks},
                        {"duration", t.result.duration},
                        {"peak_contact_force", t.result.peak_contact_force},
                        {"max_deviation", t.max_deviation}});
    }
    methods.push_back({{"name", m.spec.name},
                       {"dual_arm", m.spec.dual_arm},
                       {"hybrid", m.spec.hybrid},
                       {"success_rate", m.success_rate},
                       {"peak_contact_force", m.peak_contact_force},
                       {"trials", trials},
                       {"mean_deviation", m.mean_deviation},
                       {"mean_pos_term", m.mean_pos_term},
                       {"mean_ang_term", m.mean_ang_term}});
  }
  return nlohmann::json{{"config", report.config_echo},
                        {"estimated_direction", to_json(report.estimated_direction)},
                        {"timeline",
                         {{"target_duration", report.timeline.target_duration},
                          {"sample_step", report.timeline.sample_step}}},
                        {"methods", methods}};
}

std::vector<std::string> emit_report(const ExperimentReport& report, const std::string& dir) {
  std::vector<std::string> written;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory: " + dir);

  auto write_file = [&](const std::string& name, const std::string& content) {
    std::string path = (std::filesystem::path(dir) / name).string();
    std::ofstream out(path, std::ios::binary);
    out << content;
    if (!out.good()) {
      std::string manifest;
      for (const std::string& w : written) manifest += " " + w;
      throw IoError("failed writing " + path + "; already written:" + manifest);
    }
    written.push_back(path);
  };

  write_file("report.json", report_to_json(report).dump(2) + "\n");

  for (const MethodReport& m : report.methods) {
    if (m.mean_deviation.empty()) continue;
    std::string csv = "t,deviation,pos_term,ang_term\n";
    for (std::size_t i = 0; i < m.mean_deviation.size(); ++i) {
      double t = static_cast<double>(i) * report.timeline.sample_step;
      csv += format_double(t) + "," + format_double(m.mean_deviation[i]) + "," +
             format_double(m.mean_pos_term[i]) + "," + format_double(m.mean_ang_term[i]) + "\n";
    }
    write_file("deviation_" + m.spec.name + ".csv", csv);
  }

  std::string summary;
  summary += "Method        Dual arms  Affordance  Hybrid controller  Success rate  Failures\n";
  for (const MethodReport& m : report.methods) {
    int failures = 0;
    for (const TrialRecord& t : m.trials) failures += t.result.success ? 0 : 1;
    char line[160];
    std::snprintf(line, sizeof(line), "%-13s %-10s %-11s %-18s %-13s %d\n", m.spec.name.c_str(),
                  m.spec.dual_arm ? "yes" : "", "yes", m.spec.hybrid ? "yes" : "",
                  format_double(m.success_rate).c_str(), failures);
    summary += line;
  }
  write_file("summary.txt", summary);
  return written;
}

}  // namespace disasm
