#pragma once

#include "disasm/types.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace disasm {

/// Indexed triangle mesh with per-facet outward normals.
struct TriMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> faces;
  std::vector<Vec3> facet_normals;
  int degenerate_dropped = 0;  // zero-area triangles removed at load time

  [[nodiscard]] std::size_t face_count() const { return faces.size(); }
  [[nodiscard]] double face_area(int face) const;
  [[nodiscard]] double total_area() const;
  [[nodiscard]] Vec3 face_centroid(int face) const;
  [[nodiscard]] Vec3 vertex(int face, int corner) const { return vertices[faces[face][corner]]; }

  /// Throws ValidationError if any invariant is violated.
  void validate() const;

  /// face -> neighbouring faces across shared edges, deterministic order.
  [[nodiscard]] std::vector<std::vector<int>> face_adjacency() const;

  [[nodiscard]] Eigen::AlignedBox3d bounds() const;

  /// Applies a rigid transform and returns the result.
  [[nodiscard]] TriMesh transformed(const Pose& pose) const;
};

struct FacetCluster {
  std::vector<int> face_indices;
  Vec3 mean_normal{Vec3::UnitZ()};
  double total_area = 0.0;
};

struct ContactPoint {
  Vec3 position{Vec3::Zero()};
  Vec3 normal{Vec3::UnitZ()};
  int face_id = -1;
  double boundary_distance = 0.0;
};

/// Loads an STL (ASCII or binary) or OBJ mesh. Degenerate triangles are
/// dropped and counted in TriMesh::degenerate_dropped.
TriMesh load_mesh(const std::string& path);

/// Region growing over face adjacency; adjacent faces join a cluster iff
/// the angle between their facet normals is <= angle_tol.
std::vector<FacetCluster> cluster_facets(const TriMesh& mesh, double angle_tol);

/// Grid sampling on a (near planar) cluster. Returned points are pairwise
/// >= spacing apart and >= min_boundary_dist from every cluster boundary edge.
std::vector<ContactPoint> sample_contact_points(const TriMesh& mesh, const FacetCluster& cluster,
                                                double spacing, double min_boundary_dist);

/// Casts a ray from the contact along -normal and returns the first hit on a
/// face whose normal opposes the contact normal within antipodal_tol (radians
/// away from exactly opposed, default 10 degrees).
std::optional<ContactPoint> ray_opposite_contact(const TriMesh& mesh, const ContactPoint& point,
                                                 double antipodal_tol = 10.0 * M_PI / 180.0);

/// Moller-Trumbore ray/triangle intersection; returns hit parameter t >= 0.
std::optional<double> ray_triangle_intersect(const Vec3& origin, const Vec3& dir, const Vec3& a,
                                             const Vec3& b, const Vec3& c);

/// Barycentric coordinates of p in triangle abc (plane projection).
Vec3 barycentric(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c);

/// Distance from p to segment [a, b].
double point_segment_distance(const Vec3& p, const Vec3& a, const Vec3& b);

}  // namespace disasm
