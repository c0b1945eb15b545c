#include "disasm/snapfit.hpp"

#include <cmath>

namespace disasm {

void SnapFitHook::validate() const {
  if (theta < 0.0 || theta > M_PI_2) throw ValidationError("SnapFitHook: theta must be in [0, pi/2]");
  if (!(k_in > 0.0 && k_out > 0.0 && k_rot > 0.0))
    throw ValidationError("SnapFitHook: stiffnesses must be positive");
  if (!(release_deflection > 0.0)) throw ValidationError("SnapFitHook: release_deflection must be > 0");
  if (!(break_force > 0.0)) throw ValidationError("SnapFitHook: break_force must be > 0");
  if (std::abs(extraction_axis.norm() - 1.0) > 1e-9)
    throw ValidationError("SnapFitHook: extraction_axis must be unit length");
}

HookForceDecomposition decompose_hook_force(const SnapFitHook& hook, double force) {
  if (force < 0.0) throw ValidationError("decompose_hook_force: force must be non-negative");
  return {force * std::cos(hook.theta), force * std::sin(hook.theta)};
}

double required_extraction_force(const SnapFitHook& hook) {
  if (hook.theta >= M_PI_2 - 1e-6) {
    throw ValidationError("required_extraction_force: theta at pi/2, horizontal disassembly infeasible");
  }
  return hook.k_out * hook.release_deflection / std::cos(hook.theta);
}

namespace {

double direction_cost(const Vec3& d, const std::vector<SnapFitHook>& hooks, double cosine_floor) {
  double worst = 0.0;
  for (const SnapFitHook& hook : hooks) {
    double c = std::max(d.dot(hook.extraction_axis), cosine_floor);
    worst = std::max(worst, required_extraction_force(hook) / c);
  }
  return worst;
}

}  // namespace

Vec3 estimate_disassembly_direction(const std::vector<SnapFitHook>& hooks,
                                    const DirectionSearchParams& params) {
  if (hooks.empty()) throw ValidationError("estimate_disassembly_direction: empty hook list");
  for (const SnapFitHook& hook : hooks) hook.validate();

  std::vector<Vec3> candidates;
  candidates.reserve(hooks.size() + params.sphere_samples);
  // hook axes first so a shared axis is found exactly
  for (const SnapFitHook& hook : hooks) candidates.push_back(hook.extraction_axis);
  const double golden = M_PI * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < params.sphere_samples; ++i) {
    double z = 1.0 - 2.0 * (i + 0.5) / params.sphere_samples;
    double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    double phi = golden * i;
    candidates.emplace_back(r * std::cos(phi), r * std::sin(phi), z);
  }

  Vec3 best = candidates.front();
  double best_cost = direction_cost(best, hooks, params.cosine_floor);
  for (const Vec3& d : candidates) {
    double cost = direction_cost(d, hooks, params.cosine_floor);
    if (cost < best_cost - 1e-15) {
      best_cost = cost;
      best = d;
    }
  }

  // local refinement: pattern search on the sphere. Every probe sits at the
  // current step angle on an evenly spaced compass around the incumbent, so
  // one always lands near the descent direction of the max-of-cones cost;
  // the step only halves on rounds without improvement.
  double step = 2.0 * std::sqrt(4.0 * M_PI / params.sphere_samples);
  for (int round = 0; round < params.refine_rounds && step > 1e-9; ++round) {
    Vec3 u = any_perpendicular(best);
    Vec3 v = best.cross(u);
    Vec3 round_best = best;
    double round_cost = best_cost;
    for (int i = 0; i < params.refine_samples; ++i) {
      double phi = 2.0 * M_PI * i / params.refine_samples;
      Vec3 d = (std::cos(step) * best + std::sin(step) * (std::cos(phi) * u + std::sin(phi) * v)).normalized();
      double cost = direction_cost(d, hooks, params.cosine_floor);
      if (cost < round_cost - 1e-15) {
        round_cost = cost;
        round_best = d;
      }
    }
    if (round_cost < best_cost - 1e-15) {
      best = round_best;
      best_cost = round_cost;
    } else {
      step *= 0.5;
    }
  }
  return best;
}

}  // namespace disasm
