#!/usr/bin/env python3
"""Regenerates the fixture corpus under fixtures/.

Everything here is deterministic; the scene numbers are synthetic but chosen
so the three comparison methods behave differently (see fixtures/README.md).
"""
import json
import math
import os
import struct

ROOT = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "fixtures")


def box_triangles(cx, cy, cz, sx, sy, sz):
    """12 triangles of an axis-aligned box, outward CCW winding."""
    hx, hy, hz = sx / 2.0, sy / 2.0, sz / 2.0
    v = [(cx + dx * hx, cy + dy * hy, cz + dz * hz)
         for dx in (-1, 1) for dy in (-1, 1) for dz in (-1, 1)]
    # index by (dx,dy,dz) bits: 4*(dx>0)+2*(dy>0)+(dz>0)
    quads = [
        (0, 1, 3, 2),  # -x
        (4, 6, 7, 5),  # +x
        (0, 4, 5, 1),  # -y
        (2, 3, 7, 6),  # +y
        (0, 2, 6, 4),  # -z
        (1, 5, 7, 3),  # +z
    ]
    tris = []
    for a, b, c, d in quads:
        tris.append((v[a], v[b], v[c]))
        tris.append((v[a], v[c], v[d]))
    return tris


def normal(tri):
    (ax, ay, az), (bx, by, bz), (cx, cy, cz) = tri
    ux, uy, uz = bx - ax, by - ay, bz - az
    vx, vy, vz = cx - ax, cy - ay, cz - az
    nx, ny, nz = uy * vz - uz * vy, uz * vx - ux * vz, ux * vy - uy * vx
    n = math.sqrt(nx * nx + ny * ny + nz * nz)
    if n == 0:
        return (0.0, 0.0, 0.0)
    return (nx / n, ny / n, nz / n)


def write_stl_binary(path, tris):
    with open(path, "wb") as f:
        f.write(b"\0" * 80)
        f.write(struct.pack("<I", len(tris)))
        for tri in tris:
            f.write(struct.pack("<3f", *normal(tri)))
            for p in tri:
                f.write(struct.pack("<3f", *p))
            f.write(struct.pack("<H", 0))


def write_stl_ascii(path, tris):
    with open(path, "w") as f:
        f.write("solid fixture\n")
        for tri in tris:
            n = normal(tri)
            f.write("  facet normal %g %g %g\n    outer loop\n" % n)
            for p in tri:
                f.write("      vertex %.9g %.9g %.9g\n" % p)
            f.write("    endloop\n  endfacet\n")
        f.write("endsolid fixture\n")


def icosphere(subdiv=1):
    t = (1.0 + math.sqrt(5.0)) / 2.0
    verts = [(-1, t, 0), (1, t, 0), (-1, -t, 0), (1, -t, 0),
             (0, -1, t), (0, 1, t), (0, -1, -t), (0, 1, -t),
             (t, 0, -1), (t, 0, 1), (-t, 0, -1), (-t, 0, 1)]
    verts = [tuple(c / math.sqrt(1 + t * t) for c in v) for v in verts]
    faces = [(0, 11, 5), (0, 5, 1), (0, 1, 7), (0, 7, 10), (0, 10, 11),
             (1, 5, 9), (5, 11, 4), (11, 10, 2), (10, 7, 6), (7, 1, 8),
             (3, 9, 4), (3, 4, 2), (3, 2, 6), (3, 6, 8), (3, 8, 9),
             (4, 9, 5), (2, 4, 11), (6, 2, 10), (8, 6, 7), (9, 8, 1)]
    cache = {}

    def midpoint(i, k):
        key = (min(i, k), max(i, k))
        if key in cache:
            return cache[key]
        a, b = verts[i], verts[k]
        m = tuple((a[j] + b[j]) / 2.0 for j in range(3))
        n = math.sqrt(sum(c * c for c in m))
        verts.append(tuple(c / n for c in m))
        cache[key] = len(verts) - 1
        return cache[key]

    for _ in range(subdiv):
        new_faces = []
        for a, b, c in faces:
            ab, bc, ca = midpoint(a, b), midpoint(b, c), midpoint(c, a)
            new_faces += [(a, ab, ca), (b, bc, ab), (c, ca, bc), (ab, bc, ca)]
        faces = new_faces
    return verts, faces


def write_obj(path, verts, faces, scale=1.0):
    with open(path, "w") as f:
        for v in verts:
            f.write("v %.9g %.9g %.9g\n" % tuple(c * scale for c in v))
        for a, b, c in faces:
            f.write("f %d %d %d\n" % (a + 1, b + 1, c + 1))


# --- trajectories ------------------------------------------------------------

CAL_T = (0.05, 0.0, 0.0)  # camera -> robot translation
PHI = math.radians(30.0)


def keypoints(robot_pos):
    """Hand keypoints (camera frame) whose frame has identity orientation."""
    wx = robot_pos[0] - CAL_T[0]
    wy = robot_pos[1] - CAL_T[1]
    wz = robot_pos[2] - CAL_T[2]
    # asymmetric finger spread keeps the thumb->index sign rule decisive
    ix = wx + 1.0 * math.cos(PHI)
    iz = wz + 1.0 * math.sin(PHI)
    tx = wx + 0.9 * math.cos(PHI)
    tz = wz - 0.9 * math.sin(PHI)
    return (wx, wy, wz), (ix, wy, iz), (tx, wy, tz)


def write_trajectory(path, lateral_jump=0.0, curve_amp=0.0):
    grasp_target = (0.0, 0.0, -0.06)
    frames = []
    rate = 10.0
    n_frames = 161  # 0 .. 16 s
    for i in range(n_frames):
        t = i / rate
        x, y, z = grasp_target
        grip = "open"
        if t < 2.0:
            z = -0.12 + (t / 2.0) * 0.06
        else:
            grip = "close"
            if 3.5 <= t < 3.9:
                z += lateral_jump
            if t >= 4.0:
                u = min(1.0, (t - 4.0) / 5.5)
                x += 0.08 * u
                z += curve_amp * math.sin(math.pi * u)
        wrist, index_base, thumb_base = keypoints((x, y, z))
        frames.append({
            "t": round(t, 3),
            "wrist": [round(c, 9) for c in wrist],
            "index_base": [round(c, 9) for c in index_base],
            "thumb_base": [round(c, 9) for c in thumb_base],
            "visible": [True, True, True],
            "grip": grip,
        })
    with open(path, "w") as f:
        for fr in frames:
            f.write(json.dumps(fr) + "\n")


def main():
    meshes = os.path.join(ROOT, "meshes")
    traj = os.path.join(ROOT, "trajectories")
    os.makedirs(meshes, exist_ok=True)
    os.makedirs(traj, exist_ok=True)

    # unit cube, ASCII; plus a variant with one extra zero-area triangle
    cube = box_triangles(0.5, 0.5, 0.5, 1, 1, 1)
    write_stl_ascii(os.path.join(meshes, "cube_unit.stl"), cube)
    degen = cube + [((0, 0, 0), (0.5, 0.5, 0.5), (1, 1, 1))]
    write_stl_ascii(os.path.join(meshes, "cube_degenerate.stl"), degen)

    write_stl_binary(os.path.join(meshes, "cube_01.stl"), box_triangles(0, 0, 0, 0.1, 0.1, 0.1))
    write_stl_binary(os.path.join(meshes, "box_grasp.stl"), box_triangles(0, 0, 0, 0.1, 0.2, 0.3))
    write_stl_binary(os.path.join(meshes, "cube_005.stl"), box_triangles(0, 0, 0, 0.05, 0.05, 0.05))

    verts, faces = icosphere(1)
    write_obj(os.path.join(meshes, "icosphere80.obj"), verts, faces, scale=0.1)

    # front-cover-like part: plate plus two bosses on the front face
    cover = box_triangles(0, 0, 0, 0.02, 0.3, 0.2)
    cover += box_triangles(0.015, 0.06, 0.05, 0.01, 0.04, 0.03)
    cover += box_triangles(0.015, -0.06, -0.02, 0.01, 0.05, 0.02)
    write_stl_binary(os.path.join(meshes, "front_cover.stl"), cover)
    with open(os.path.join(ROOT, "front_cover_meta.json"), "w") as f:
        json.dump({"face_count": len(cover)}, f, indent=2)
        f.write("\n")

    # scene: plain cover plate held by four snap-fit hooks against a chassis
    write_stl_binary(os.path.join(meshes, "cover_plate.stl"), box_triangles(0, 0, 0, 0.02, 0.3, 0.2))
    write_stl_binary(os.path.join(meshes, "chassis.stl"),
                     box_triangles(-0.06, 0, 0, 0.04, 0.36, 0.26))

    hooks = []
    for (y, z, theta) in [(0.12, 0.08, 0.2), (-0.12, 0.08, 0.3),
                          (0.12, -0.08, 0.4), (-0.12, -0.08, 0.25)]:
        hooks.append({
            "anchor": [-0.01, y, z],
            "theta": theta,
            "extraction_axis": [1.0, 0.0, 0.0],
            "k_in": 2000.0,
            "k_out": 1000.0,
            "k_rot": 30.0,
            "release_deflection": 0.005,
            "break_force": 500.0,
        })

    scene = {
        "base_mesh": "meshes/chassis.stl",
        "part_mesh": "meshes/cover_plate.stl",
        "part_pose": {"position": [0, 0, 0], "rotation": [0, 0, 0, 1]},
        "hooks": hooks,
        "gripper": {
            "max_opening": 0.15,
            "finger_length": 0.06,
            "finger_box": [0.01, 0.02, 0.06],
            "palm_box": [0.05, 0.03, 0.04],
            "grip_force_limit": 60.0,
        },
        "limits": {"slip_force": 40.0, "mount_break_force": 100.0, "workspace_radius": 1.5},
        "sim": {"k_grasp_t": 5000.0, "k_grasp_r": 50.0, "k_fix_t": 3000.0, "k_fix_r": 300.0},
        "fixation_grasp": {"center": [0.0, 0.1, 0.0], "rotation": [0, 0, 0, 1], "jaw_width": 0.02},
        "controller": {
            "impedance": {
                "mass": [2, 2, 2, 0.05, 0.05, 0.05],
                "damping": [90, 90, 90, 2, 2, 2],
                "stiffness": [1000, 1000, 1000, 20, 20, 20],
            },
            "snap": {"max_pos_diff": 0.05, "max_ori_diff": 0.25},
            "ema_alpha": 0.5,
            "depth_axis": [0, 1, 0],
        },
        "sampling": {
            "cluster_angle_tol": 0.05,
            "contact_spacing": 0.01,
            "boundary_margin": 0.005,
            "approach_rotations": 8,
        },
    }
    with open(os.path.join(ROOT, "scene.json"), "w") as f:
        json.dump(scene, f, indent=2)
        f.write("\n")

    with open(os.path.join(ROOT, "calibration.json"), "w") as f:
        json.dump({"rotation": [0, 0, 0, 1], "translation": list(CAL_T)}, f, indent=2)
        f.write("\n")

    write_trajectory(os.path.join(traj, "straight_pull.jsonl"))
    write_trajectory(os.path.join(traj, "curved_pull.jsonl"), curve_amp=0.004)
    write_trajectory(os.path.join(traj, "jump_pull.jsonl"), lateral_jump=0.016)

    experiment = {
        "scene": "scene.json",
        "calibration": "calibration.json",
        "trajectories": [
            "trajectories/straight_pull.jsonl",
            "trajectories/curved_pull.jsonl",
            "trajectories/jump_pull.jsonl",
            "trajectories/straight_pull.jsonl",
            "trajectories/curved_pull.jsonl",
        ],
        "methods": [
            {"name": "baseline", "dual_arm": False, "hybrid": False},
            {"name": "comparison", "dual_arm": False, "hybrid": True},
            {"name": "proposed", "dual_arm": True, "hybrid": True},
        ],
        "trials_per_method": 10,
        "noise_sigma": 0.002,
        "base_seed": 42,
        "output_dir": "out",
    }
    with open(os.path.join(ROOT, "experiment.json"), "w") as f:
        json.dump(experiment, f, indent=2)
        f.write("\n")

    print("fixtures written to", os.path.normpath(ROOT))


if __name__ == "__main__":
    main()
