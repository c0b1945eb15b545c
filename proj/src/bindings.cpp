#include "disasm/collision.hpp"
#include "disasm/harness.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace disasm;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Affordance-guided dual-arm disassembly simulation core";

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<IoError>(m, "IoError", PyExc_IOError);

  // mesh geometry
  py::class_<TriMesh>(m, "TriMesh")
      .def_readonly("vertices", &TriMesh::vertices)
      .def_readonly("faces", &TriMesh::faces)
      .def_readonly("facet_normals", &TriMesh::facet_normals)
      .def_readonly("degenerate_dropped", &TriMesh::degenerate_dropped)
      .def("face_count", &TriMesh::face_count)
      .def("total_area", &TriMesh::total_area);

  py::class_<FacetCluster>(m, "FacetCluster")
      .def_readonly("face_indices", &FacetCluster::face_indices)
      .def_readonly("mean_normal", &FacetCluster::mean_normal)
      .def_readonly("total_area", &FacetCluster::total_area);

  py::class_<ContactPoint>(m, "ContactPoint")
      .def_readonly("position", &ContactPoint::position)
      .def_readonly("normal", &ContactPoint::normal)
      .def_readonly("face_id", &ContactPoint::face_id)
      .def_readonly("boundary_distance", &ContactPoint::boundary_distance);

  m.def("load_mesh", &load_mesh, py::arg("path"));
  m.def("cluster_facets", &cluster_facets, py::arg("mesh"), py::arg("angle_tol"));
  m.def("sample_contact_points", &sample_contact_points, py::arg("mesh"), py::arg("cluster"),
        py::arg("spacing"), py::arg("min_boundary_dist"));
  m.def("ray_opposite_contact", &ray_opposite_contact, py::arg("mesh"), py::arg("point"),
        py::arg("antipodal_tol") = 10.0 * M_PI / 180.0);

  // grasp affordance
  py::class_<GripperSpec>(m, "GripperSpec")
      .def(py::init<>())
      .def_readwrite("max_opening", &GripperSpec::max_opening)
      .def_readwrite("finger_length", &GripperSpec::finger_length)
      .def_readwrite("finger_box", &GripperSpec::finger_box)
      .def_readwrite("palm_box", &GripperSpec::palm_box)
      .def_readwrite("grip_force_limit", &GripperSpec::grip_force_limit);

  py::class_<GraspCandidate>(m, "GraspCandidate")
      .def_readonly("center", &GraspCandidate::center)
      .def_readonly("jaw_width", &GraspCandidate::jaw_width)
      .def_readonly("contact_a", &GraspCandidate::contact_a)
      .def_readonly("contact_b", &GraspCandidate::contact_b)
      .def_property_readonly("orientation",
                             [](const GraspCandidate& g) { return g.orientation.coeffs(); });

  py::class_<GraspSamplingParams>(m, "GraspSamplingParams")
      .def(py::init<>())
      .def_readwrite("cluster_angle_tol", &GraspSamplingParams::cluster_angle_tol)
      .def_readwrite("contact_spacing", &GraspSamplingParams::contact_spacing)
      .def_readwrite("boundary_margin", &GraspSamplingParams::boundary_margin)
      .def_readwrite("approach_rotations", &GraspSamplingParams::approach_rotations);

  m.def("generate_grasp_candidates", &generate_grasp_candidates, py::arg("target"),
        py::arg("gripper"), py::arg("params") = GraspSamplingParams{});
  m.def("check_gripper_collision", &check_gripper_collision, py::arg("obstacles"),
        py::arg("grasp"), py::arg("gripper"));
  m.def(
      "grasp_similarity",
      [](const GraspCandidate& cand, const Vec3& pos, const Eigen::Vector4d& quat_xyzw) {
        EndEffectorPose hand{pos, Quat(quat_xyzw(3), quat_xyzw(0), quat_xyzw(1), quat_xyzw(2)),
                             FrameId::robot};
        return grasp_similarity(cand, hand);
      },
      py::arg("candidate"), py::arg("position"), py::arg("quaternion_xyzw"));

  // disassembly affordance
  py::class_<SnapFitHook>(m, "SnapFitHook")
      .def(py::init<>())
      .def_readwrite("anchor", &SnapFitHook::anchor)
      .def_readwrite("theta", &SnapFitHook::theta)
      .def_readwrite("extraction_axis", &SnapFitHook::extraction_axis)
      .def_readwrite("k_in", &SnapFitHook::k_in)
      .def_readwrite("k_out", &SnapFitHook::k_out)
      .def_readwrite("k_rot", &SnapFitHook::k_rot)
      .def_readwrite("release_deflection", &SnapFitHook::release_deflection)
      .def_readwrite("break_force", &SnapFitHook::break_force);

  m.def("decompose_hook_force",
        [](const SnapFitHook& hook, double force) {
          auto d = decompose_hook_force(hook, force);
          return std::make_pair(d.horizontal, d.vertical);
        },
        py::arg("hook"), py::arg("force"));
  m.def("required_extraction_force", &required_extraction_force, py::arg("hook"));
  m.def("estimate_disassembly_direction",
        [](const std::vector<SnapFitHook>& hooks) { return estimate_disassembly_direction(hooks); },
        py::arg("hooks"));

  // hand pose
  py::class_<HandKeypoints>(m, "HandKeypoints")
      .def(py::init<>())
      .def_readwrite("timestamp", &HandKeypoints::timestamp)
      .def_readwrite("wrist", &HandKeypoints::wrist)
      .def_readwrite("index_base", &HandKeypoints::index_base)
      .def_readwrite("thumb_base", &HandKeypoints::thumb_base);

  m.def(
      "build_hand_frame",
      [](const HandKeypoints& kp, const Vec3& depth_axis) {
        EndEffectorPose pose = build_hand_frame(kp, depth_axis);
        return std::make_pair(pose.position, Eigen::Vector4d(pose.orientation.coeffs()));
      },
      py::arg("keypoints"), py::arg("depth_axis"),
      "Returns (position, quaternion_xyzw) in the camera frame");

  // impedance control
  py::class_<ImpedanceParams>(m, "ImpedanceParams")
      .def(py::init<>())
      .def_readwrite("mass", &ImpedanceParams::mass)
      .def_readwrite("damping", &ImpedanceParams::damping)
      .def_readwrite("stiffness", &ImpedanceParams::stiffness)
      .def_readwrite("dt_max", &ImpedanceParams::dt_max);

  py::class_<ImpedanceState>(m, "ImpedanceState")
      .def(py::init<>())
      .def_readwrite("x", &ImpedanceState::x)
      .def_readwrite("x_dot", &ImpedanceState::x_dot);

  m.def("step_impedance", &step_impedance, py::arg("state"), py::arg("params"), py::arg("wrench"),
        py::arg("dt"));

  // metrics
  m.def(
      "quaternion_angle",
      [](const Eigen::Vector4d& a, const Eigen::Vector4d& b) {
        return quaternion_angle(Quat(a(3), a(0), a(1), a(2)), Quat(b(3), b(0), b(1), b(2)));
      },
      py::arg("q_t_xyzw"), py::arg("q_0_xyzw"));
  m.def(
      "pose_deviation",
      [](const Vec3& p_t, const Eigen::Vector4d& q_t, const Vec3& p_0, const Eigen::Vector4d& q_0) {
        PoseSample s{0.0, p_t, Quat(q_t(3), q_t(0), q_t(1), q_t(2))};
        PoseSample i{0.0, p_0, Quat(q_0(3), q_0(0), q_0(1), q_0(2))};
        return pose_deviation(s, i);
      },
      py::arg("position"), py::arg("quaternion_xyzw"), py::arg("initial_position"),
      py::arg("initial_quaternion_xyzw"));

  // harness
  m.def(
      "run_experiment",
      [](const std::string& config_path, int jobs) {
        ExperimentConfig cfg = load_experiment_config(config_path);
        cfg.jobs = jobs;
        ExperimentReport report = run_experiment(cfg);
        return py::module_::import("json").attr("loads")(report_to_json(report).dump());
      },
      py::arg("config_path"), py::arg("jobs") = 1,
      "Runs an experiment config and returns the report as a dict");
  m.def(
      "run_single_trial",
      [](const std::string& scene_path, const std::string& trajectory_path,
         const std::string& calibration_path, bool hybrid, bool dual_arm, std::uint64_t seed,
         double sigma) {
        SceneBundle bundle = load_scene(scene_path);
        auto trajectory = load_trajectory(trajectory_path);
        Calibration cal = load_calibration(calibration_path);
        ControllerConfig controller = bundle.controller;
        controller.mode = hybrid ? ControlMode::hybrid : ControlMode::position_only;
        TrialResult r = run_trial(bundle.scene, trajectory, cal, controller, dual_arm, {seed, sigma});
        py::dict out;
        out["success"] = r.success;
        out["failure"] = failure_name(r.failure);
        out["released_hooks"] = r.released_hooks;
        out["duration"] = r.duration;
        out["peak_contact_force"] = r.peak_contact_force;
        return out;
      },
      py::arg("scene_path"), py::arg("trajectory_path"), py::arg("calibration_path"),
      py::arg("hybrid") = true, py::arg("dual_arm") = true, py::arg("seed") = 0,
      py::arg("sigma") = 0.0);
}
