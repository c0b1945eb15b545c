#include "disasm/impedance.hpp"

namespace disasm {

void ImpedanceParams::validate() const {
  if (mass.minCoeff() <= 0.0 || damping.minCoeff() <= 0.0 || stiffness.minCoeff() <= 0.0) {
    throw ValidationError("ImpedanceParams: M, D, K components must all be positive");
  }
  if (!(dt_max > 0.0)) throw ValidationError("ImpedanceParams: dt_max must be positive");
}

ImpedanceState step_impedance(const ImpedanceState& state, const ImpedanceParams& params,
                              const Vec6& wrench, double dt) {
  params.validate();
  if (!(dt > 0.0) || dt > params.dt_max) {
    throw ValidationError("step_impedance: dt must be in (0, dt_max]");
  }
  if (!wrench.allFinite()) throw ValidationError("step_impedance: non-finite wrench");

  ImpedanceState next;
  Vec6 accel = (wrench - params.damping.cwiseProduct(state.x_dot) -
                params.stiffness.cwiseProduct(state.x))
                   .cwiseQuotient(params.mass);
  next.x_dot = state.x_dot + accel * dt;
  next.x = state.x + next.x_dot * dt;
  return next;
}

EndEffectorPose reference_position(const EndEffectorPose& nominal, const ImpedanceState& state) {
  EndEffectorPose out = nominal;
  out.position += state.x.head<3>();
  if (state.x.tail<3>().isZero(0.0)) {
    out.orientation = nominal.orientation;
  } else {
    out.orientation = (quat_exp(state.x.tail<3>()) * nominal.orientation).normalized();
  }
  return out;
}

std::pair<ControlTarget, ImpedanceState> hybrid_target(ControlMode mode,
                                                       const EndEffectorPose& nominal,
                                                       const ImpedanceState& state,
                                                       const ImpedanceParams& params,
                                                       const Vec6& wrench, double dt) {
  ControlTarget target;
  target.mode = mode;
  target.nominal = nominal;
  if (mode == ControlMode::position_only) {
    target.reference = nominal;
    return {target, state};
  }
  ImpedanceState next = step_impedance(state, params, wrench, dt);
  target.reference = reference_position(nominal, next);
  return {target, next};
}

}  // namespace disasm
