#pragma once

#include "disasm/types.hpp"

#include <vector>

namespace disasm {

/// Spring-element model of one snap-fit connection. theta is the angle
/// between the mating part's projection direction and the horizontal.
struct SnapFitHook {
  Vec3 anchor{Vec3::Zero()};           // m, on the part
  double theta = 0.0;                  // rad, in [0, pi/2]
  Vec3 extraction_axis{Vec3::UnitX()}; // unit, horizontal disassembly direction
  double k_in = 2000.0;                // N/m
  double k_out = 1000.0;               // N/m
  double k_rot = 10.0;                 // N*m/rad
  double release_deflection = 0.005;   // m
  double break_force = 500.0;          // N

  void validate() const;
};

struct HookForceDecomposition {
  double horizontal = 0.0;  // N
  double vertical = 0.0;    // N
};

/// F cos(theta) / F sin(theta) split of an applied horizontal load.
HookForceDecomposition decompose_hook_force(const SnapFitHook& hook, double force);

/// Horizontal force needed to reach release_deflection of out-of-plane
/// deformation: k_out * release_deflection / cos(theta). Strictly increasing
/// in theta; singular as theta -> pi/2.
double required_extraction_force(const SnapFitHook& hook);

struct DirectionSearchParams {
  int sphere_samples = 2000;     // Fibonacci sphere resolution
  int refine_rounds = 64;
  int refine_samples = 32;
  double cosine_floor = 1e-3;    // guards the 1/cos cost at grazing angles
};

/// Direction minimizing the worst per-hook required force, where moving along
/// d costs F_req / max(cos angle(d, extraction_axis), cosine_floor).
Vec3 estimate_disassembly_direction(const std::vector<SnapFitHook>& hooks,
                                    const DirectionSearchParams& params = {});

}  // namespace disasm
