#pragma once

#include "disasm/types.hpp"

namespace disasm {

/// Per-axis mass/damping/stiffness of the compliance model, six decoupled
/// axes: three translational then three rotational.
struct ImpedanceParams {
  Vec6 mass;
  Vec6 damping;
  Vec6 stiffness;
  double dt_max = 0.01;  // s

  ImpedanceParams() {
    mass << 2.0, 2.0, 2.0, 0.05, 0.05, 0.05;
    damping << 90.0, 90.0, 90.0, 2.0, 2.0, 2.0;
    stiffness << 1000.0, 1000.0, 1000.0, 20.0, 20.0, 20.0;
  }

  void validate() const;
};

/// Correction displacement and its velocity.
struct ImpedanceState {
  Vec6 x{Vec6::Zero()};
  Vec6 x_dot{Vec6::Zero()};
};

enum class ControlMode { position_only, hybrid };

struct ControlTarget {
  EndEffectorPose nominal;
  EndEffectorPose reference;
  ControlMode mode = ControlMode::position_only;
};

/// One semi-implicit Euler step of M x'' + D x' + K x = F, per axis.
ImpedanceState step_impedance(const ImpedanceState& state, const ImpedanceParams& params,
                              const Vec6& wrench, double dt);

/// Applies the correction to the nominal target: translation added, rotation
/// composed via the axis-angle exponential of the rotational correction.
EndEffectorPose reference_position(const EndEffectorPose& nominal, const ImpedanceState& state);

/// position_only passes the nominal through untouched; hybrid steps the
/// impedance model with the measured wrench and offsets the reference.
std::pair<ControlTarget, ImpedanceState> hybrid_target(ControlMode mode,
                                                       const EndEffectorPose& nominal,
                                                       const ImpedanceState& state,
                                                       const ImpedanceParams& params,
                                                       const Vec6& wrench, double dt);

}  // namespace disasm
