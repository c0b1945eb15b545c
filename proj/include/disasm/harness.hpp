#pragma once

#include "disasm/config.hpp"

#include <string>
#include <vector>

namespace disasm {

struct TrialRecord {
  int index = 0;
  std::uint64_t seed = 0;
  std::string trajectory;
  TrialResult result;
  double max_deviation = 0.0;
  // deviation curves on the normalized 16 s timeline
  std::vector<double> norm_deviation;
  std::vector<double> norm_pos_term;
  std::vector<double> norm_ang_term;
};

struct MethodReport {
  MethodSpec spec;
  std::vector<TrialRecord> trials;
  double success_rate = 0.0;
  double peak_contact_force = 0.0;  // max over trials
  // mean curves across trials that produced a series
  std::vector<double> mean_deviation;
  std::vector<double> mean_pos_term;
  std::vector<double> mean_ang_term;
};

struct ExperimentReport {
  nlohmann::json config_echo;
  std::vector<MethodReport> methods;
  TimelineParams timeline;
  Vec3 estimated_direction{Vec3::UnitX()};
};

/// Runs methods x trials (seed = base_seed + trial index), aggregates
/// per-method success rates and normalized deviation curves. Deterministic
/// given cfg; jobs > 1 parallelizes trials without changing the output.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

/// Writes report.json, one deviation CSV per method, and summary.txt into dir.
/// Returns the paths written.
std::vector<std::string> emit_report(const ExperimentReport& report, const std::string& dir);

nlohmann::json report_to_json(const ExperimentReport& report);

std::string failure_name(const std::optional<FailureReason>& reason);

}  // namespace disasm
