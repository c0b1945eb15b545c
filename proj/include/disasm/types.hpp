#pragma once

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include <stdexcept>
#include <string>

namespace disasm {

using Vec3 = Eigen::Vector3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Quat = Eigen::Quaterniond;
using Mat3 = Eigen::Matrix3d;

/// Which coordinate frame a pose is expressed in.
enum class FrameId { camera, robot };

struct ValidationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Rigid pose, quaternion + translation.
struct Pose {
  Vec3 position{Vec3::Zero()};
  Quat orientation{Quat::Identity()};

  [[nodiscard]] Pose inverse() const {
    Quat qi = orientation.conjugate();
    return {qi * (-position), qi};
  }

  /// this ∘ other (apply other first, then this).
  [[nodiscard]] Pose operator*(const Pose& other) const {
    return {position + orientation * other.position, orientation * other.orientation};
  }

  [[nodiscard]] Vec3 apply(const Vec3& p) const { return position + orientation * p; }
};

struct EndEffectorPose {
  Vec3 position{Vec3::Zero()};
  Quat orientation{Quat::Identity()};
  FrameId frame_id{FrameId::robot};

  [[nodiscard]] Pose pose() const { return {position, orientation}; }
};

/// Axis-angle exponential, rotation vector -> quaternion.
inline Quat quat_exp(const Vec3& rotvec) {
  double angle = rotvec.norm();
  if (angle < 1e-12) {
    Quat q(1.0, 0.5 * rotvec.x(), 0.5 * rotvec.y(), 0.5 * rotvec.z());
    q.normalize();
    return q;
  }
  return Quat(Eigen::AngleAxisd(angle, rotvec / angle));
}

/// Rotation vector of q, shortest representation.
inline Vec3 quat_log(const Quat& q) {
  Quat qn = q.normalized();
  if (qn.w() < 0.0) qn.coeffs() = -qn.coeffs();
  Eigen::AngleAxisd aa(qn);
  return aa.angle() * aa.axis();
}

/// Deterministic unit vector perpendicular to v (v need not be unit).
inline Vec3 any_perpendicular(const Vec3& v) {
  Vec3 a = std::abs(v.x()) < 0.9 * v.norm() ? Vec3::UnitX() : Vec3::UnitY();
  return v.cross(a).normalized();
}

inline void require_unit_quaternion(const Quat& q, double tol, const std::string& what) {
  if (std::abs(q.norm() - 1.0) > tol) {
    throw ValidationError(what + ": quaternion is not unit norm");
  }
}

}  // namespace disasm
