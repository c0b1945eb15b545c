"""Hardware-free dual-arm disassembly simulation toolkit."""

from ._core import (
    ContactPoint,
    FacetCluster,
    GraspCandidate,
    GraspSamplingParams,
    GripperSpec,
    HandKeypoints,
    ImpedanceParams,
    ImpedanceState,
    IoError,
    SnapFitHook,
    TriMesh,
    ValidationError,
    build_hand_frame,
    check_gripper_collision,
    cluster_facets,
    decompose_hook_force,
    estimate_disassembly_direction,
    generate_grasp_candidates,
    grasp_similarity,
    load_mesh,
    pose_deviation,
    quaternion_angle,
    ray_opposite_contact,
    required_extraction_force,
    run_experiment,
    run_single_trial,
    sample_contact_points,
    step_impedance,
)

__all__ = [
    "ContactPoint",
    "FacetCluster",
    "GraspCandidate",
    "GraspSamplingParams",
    "GripperSpec",
    "HandKeypoints",
    "ImpedanceParams",
    "ImpedanceState",
    "IoError",
    "SnapFitHook",
    "TriMesh",
    "ValidationError",
    "build_hand_frame",
    "check_gripper_collision",
    "cluster_facets",
    "decompose_hook_force",
    "estimate_disassembly_direction",
    "generate_grasp_candidates",
    "grasp_similarity",
    "load_mesh",
    "pose_deviation",
    "quaternion_angle",
    "ray_opposite_contact",
    "required_extraction_force",
    "run_experiment",
    "run_single_trial",
    "sample_contact_points",
    "step_impedance",
]

__version__ = "0.1.0"
