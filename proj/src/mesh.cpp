#include "disasm/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

namespace disasm {

namespace {

constexpr double kAreaEps = 1e-14;  // m^2, below this a triangle is degenerate

struct VertexWelder {
  std::map<std::array<std::int64_t, 3>, int> index;
  std::vector<Vec3> vertices;

  int add(const Vec3& p) {
    // quantize to 10 nm so duplicated STL corners weld to one vertex
    std::array<std::int64_t, 3> key{static_cast<std::int64_t>(std::llround(p.x() * 1e8)),
                                    static_cast<std::int64_t>(std::llround(p.y() * 1e8)),
                                    static_cast<std::int64_t>(std::llround(p.z() * 1e8))};
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    int id = static_cast<int>(vertices.size());
    vertices.push_back(p);
    index.emplace(key, id);
    return id;
  }
};

void push_triangle(VertexWelder& welder, TriMesh& mesh, const Vec3& a, const Vec3& b,
                   const Vec3& c) {
  Vec3 n = (b - a).cross(c - a);
  double area2 = n.norm();
  if (0.5 * area2 < kAreaEps) {
    ++mesh.degenerate_dropped;
    return;
  }
  mesh.faces.push_back({welder.add(a), welder.add(b), welder.add(c)});
  mesh.facet_normals.push_back(n / area2);
}

bool stl_is_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  auto size = in.tellg();
  if (size < 84) return false;
  in.seekg(80);
  std::uint32_t count = 0;
  in.read(reinterpret_cast<char*>(&count), 4);
  return size == static_cast<std::streamoff>(84 + 50ull * count);
}

TriMesh load_stl_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  in.seekg(80);
  std::uint32_t count = 0;
  in.read(reinterpret_cast<char*>(&count), 4);
  TriMesh mesh;
  VertexWelder welder;
  for (std::uint32_t i = 0; i < count; ++i) {
    float buf[12];
    in.read(reinterpret_cast<char*>(buf), sizeof(buf));
    in.ignore(2);
    if (!in) throw IoError("truncated binary STL: " + path);
    Vec3 a(buf[3], buf[4], buf[5]);
    Vec3 b(buf[6], buf[7], buf[8]);
    Vec3 c(buf[9], buf[10], buf[11]);
    push_triangle(welder, mesh, a, b, c);
  }
  mesh.vertices = std::move(welder.vertices);
  return mesh;
}

TriMesh load_stl_ascii(const std::string& path) {
  std::ifstream in(path);
  TriMesh mesh;
  VertexWelder welder;
  std::string tok;
  std::vector<Vec3> tri;
  while (in >> tok) {
    if (tok == "vertex") {
      Vec3 p;
      if (!(in >> p.x() >> p.y() >> p.z())) throw IoError("malformed ASCII STL: " + path);
      tri.push_back(p);
      if (tri.size() == 3) {
        push_triangle(welder, mesh, tri[0], tri[1], tri[2]);
        tri.clear();
      }
    }
  }
  mesh.vertices = std::move(welder.vertices);
  return mesh;
}

TriMesh load_obj(const std::string& path) {
  std::ifstream in(path);
  TriMesh mesh;
  std::vector<Vec3> positions;
  std::string line;
  auto face_index = [&](const std::string& ref) {
    int v = std::stoi(ref.substr(0, ref.find('/')));
    if (v < 0) v = static_cast<int>(positions.size()) + v + 1;
    return v - 1;
  };
  std::vector<std::array<int, 3>> raw_faces;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    if (tag == "v") {
      Vec3 p;
      if (!(ls >> p.x() >> p.y() >> p.z())) throw IoError("malformed OBJ vertex: " + path);
      positions.push_back(p);
    } else if (tag == "f") {
      std::vector<int> ids;
      std::string ref;
      while (ls >> ref) ids.push_back(face_index(ref));
      if (ids.size() < 3) throw IoError("malformed OBJ face: " + path);
      for (std::size_t k = 1; k + 1 < ids.size(); ++k) {
        raw_faces.push_back({ids[0], ids[static_cast<int>(k)], ids[static_cast<int>(k) + 1]});
      }
    }
  }
  mesh.vertices = positions;
  for (const auto& f : raw_faces) {
    for (int idx : f) {
      if (idx < 0 || idx >= static_cast<int>(positions.size()))
        throw IoError("OBJ face index out of range: " + path);
    }
    Vec3 n = (positions[f[1]] - positions[f[0]]).cross(positions[f[2]] - positions[f[0]]);
    double area2 = n.norm();
    if (0.5 * area2 < kAreaEps) {
      ++mesh.degenerate_dropped;
      continue;
    }
    mesh.faces.push_back(f);
    mesh.facet_normals.push_back(n / area2);
  }
  return mesh;
}

}  // namespace

double TriMesh::face_area(int face) const {
  const Vec3& a = vertices[faces[face][0]];
  const Vec3& b = vertices[faces[face][1]];
  const Vec3& c = vertices[faces[face][2]];
  return 0.5 * (b - a).cross(c - a).norm();
}

double TriMesh::total_area() const {
  double sum = 0.0;
  for (int f = 0; f < static_cast<int>(faces.size()); ++f) sum += face_area(f);
  return sum;
}

Vec3 TriMesh::face_centroid(int face) const {
  return (vertices[faces[face][0]] + vertices[faces[face][1]] + vertices[faces[face][2]]) / 3.0;
}

void TriMesh::validate() const {
  if (faces.empty() || vertices.empty()) throw ValidationError("mesh is empty");
  if (facet_normals.size() != faces.size())
    throw ValidationError("facet normal count does not match face count");
  int n = static_cast<int>(vertices.size());
  for (const auto& f : faces) {
    for (int idx : f) {
      if (idx < 0 || idx >= n) throw ValidationError("face index out of range");
    }
  }
  for (const auto& fn : facet_normals) {
    if (std::abs(fn.norm() - 1.0) > 1e-9) throw ValidationError("facet normal is not unit length");
  }
}

std::vector<std::vector<int>> TriMesh::face_adjacency() const {
  std::map<std::pair<int, int>, std::vector<int>> edge_faces;
  for (int f = 0; f < static_cast<int>(faces.size()); ++f) {
    for (int k = 0; k < 3; ++k) {
      int a = faces[f][k];
      int b = faces[f][(k + 1) % 3];
      edge_faces[{std::min(a, b), std::max(a, b)}].push_back(f);
    }
  }
  std::vector<std::vector<int>> adj(faces.size());
  for (const auto& [edge, fs] : edge_faces) {
    for (std::size_t i = 0; i < fs.size(); ++i) {
      for (std::size_t j = i + 1; j < fs.size(); ++j) {
        adj[fs[i]].push_back(fs[j]);
        adj[fs[j]].push_back(fs[i]);
      }
    }
  }
  for (auto& neighbours : adj) {
    std::sort(neighbours.begin(), neighbours.end());
    neighbours.erase(std::unique(neighbours.begin(), neighbours.end()), neighbours.end());
  }
  return adj;
}

Eigen::AlignedBox3d TriMesh::bounds() const {
  Eigen::AlignedBox3d box;
  for (const auto& v : vertices) box.extend(v);
  return box;
}

TriMesh TriMesh::transformed(const Pose& pose) const {
  TriMesh out = *this;
  for (auto& v : out.vertices) v = pose.apply(v);
  for (auto& n : out.facet_normals) n = pose.orientation * n;
  return out;
}

TriMesh load_mesh(const std::string& path) {
  std::ifstream probe(path);
  if (!probe.good()) throw IoError("cannot open mesh file: " + path);
  probe.close();

  TriMesh mesh;
  auto dot = path.find_last_of('.');
  std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  if (ext == "obj") {
    mesh = load_obj(path);
  } else if (stl_is_binary(path)) {
    mesh = load_stl_binary(path);
  } else {
    mesh = load_stl_ascii(path);
  }
  if (mesh.faces.empty()) throw IoError("no valid triangles in mesh file: " + path);
  mesh.validate();
  return mesh;
}

std::vector<FacetCluster> cluster_facets(const TriMesh& mesh, double angle_tol) {
  if (!(angle_tol > 0.0 && angle_tol < M_PI_2)) {
    throw ValidationError("cluster_facets: angle_tol must be in (0, pi/2)");
  }
  auto adj = mesh.face_adjacency();
  double cos_tol = std::cos(angle_tol);
  int n = static_cast<int>(mesh.face_count());
  std::vector<int> cluster_of(n, -1);
  std::vector<FacetCluster> clusters;
  for (int seed = 0; seed < n; ++seed) {
    if (cluster_of[seed] >= 0) continue;
    int cid = static_cast<int>(clusters.size());
    FacetCluster cluster;
    std::vector<int> stack{seed};
    cluster_of[seed] = cid;
    while (!stack.empty()) {
      int f = stack.back();
      stack.pop_back();
      cluster.face_indices.push_back(f);
      for (int g : adj[f]) {
        if (cluster_of[g] >= 0) continue;
        if (mesh.facet_normals[f].dot(mesh.facet_normals[g]) >= cos_tol) {
          cluster_of[g] = cid;
          stack.push_back(g);
        }
      }
    }
    std::sort(cluster.face_indices.begin(), cluster.face_indices.end());
    Vec3 weighted = Vec3::Zero();
    for (int f : cluster.face_indices) {
      double area = mesh.face_area(f);
      cluster.total_area += area;
      weighted += area * mesh.facet_normals[f];
    }
    cluster.mean_normal =
        weighted.norm() > 1e-12 ? Vec3(weighted.normalized()) : mesh.facet_normals[cluster.face_indices.front()];
    clusters.push_back(std::move(cluster));
  }
  return clusters;
}

Vec3 barycentric(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
  Vec3 v0 = b - a, v1 = c - a, v2 = p - a;
  double d00 = v0.dot(v0), d01 = v0.dot(v1), d11 = v1.dot(v1);
  double d20 = v2.dot(v0), d21 = v2.dot(v1);
  double denom = d00 * d11 - d01 * d01;
  double v = (d11 * d20 - d01 * d21) / denom;
  double w = (d00 * d21 - d01 * d20) / denom;
  return {1.0 - v - w, v, w};
}

double point_segment_distance(const Vec3& p, const Vec3& a, const Vec3& b) {
  Vec3 ab = b - a;
  double t = ab.squaredNorm() > 0.0 ? (p - a).dot(ab) / ab.squaredNorm() : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return (p - (a + t * ab)).norm();
}

std::vector<ContactPoint> sample_contact_points(const TriMesh& mesh, const FacetCluster& cluster,
                                                double spacing, double min_boundary_dist) {
  if (!(spacing > 0.0)) throw ValidationError("sample_contact_points: spacing must be > 0");
  if (min_boundary_dist < 0.0)
    throw ValidationError("sample_contact_points: min_boundary_dist must be >= 0");

  // boundary edges: cluster-face edges not shared with another cluster face
  std::map<std::pair<int, int>, int> edge_count;
  for (int f : cluster.face_indices) {
    for (int k = 0; k < 3; ++k) {
      int a = mesh.faces[f][k];
      int b = mesh.faces[f][(k + 1) % 3];
      edge_count[{std::min(a, b), std::max(a, b)}]++;
    }
  }
  std::vector<std::pair<Vec3, Vec3>> boundary;
  for (const auto& [edge, count] : edge_count) {
    if (count == 1) boundary.emplace_back(mesh.vertices[edge.first], mesh.vertices[edge.second]);
  }

  // planar grid in a basis perpendicular to the mean normal
  Vec3 n = cluster.mean_normal;
  Vec3 u = any_perpendicular(n);
  Vec3 v = n.cross(u).normalized();

  double umin = 0, umax = 0, vmin = 0, vmax = 0;
  bool first = true;
  for (int f : cluster.face_indices) {
    for (int k = 0; k < 3; ++k) {
      const Vec3& p = mesh.vertex(f, k);
      double pu = p.dot(u), pv = p.dot(v);
      if (first) {
        umin = umax = pu;
        vmin = vmax = pv;
        first = false;
      } else {
        umin = std::min(umin, pu), umax = std::max(umax, pu);
        vmin = std::min(vmin, pv), vmax = std::max(vmax, pv);
      }
    }
  }

  std::vector<ContactPoint> out;
  for (double pv = vmin + 0.5 * spacing; pv <= vmax; pv += spacing) {
    for (double pu = umin + 0.5 * spacing; pu <= umax; pu += spacing) {
      for (int f : cluster.face_indices) {
        const Vec3& a = mesh.vertex(f, 0);
        const Vec3& b = mesh.vertex(f, 1);
        const Vec3& c = mesh.vertex(f, 2);
        // solve in the projected plane so mildly curved clusters still sample
        Eigen::Vector2d pa(a.dot(u), a.dot(v)), pb(b.dot(u), b.dot(v)), pc(c.dot(u), c.dot(v));
        Eigen::Matrix2d m;
        m << pb.x() - pa.x(), pc.x() - pa.x(), pb.y() - pa.y(), pc.y() - pa.y();
        if (std::abs(m.determinant()) < 1e-16) continue;
        Eigen::Vector2d bc = m.inverse() * (Eigen::Vector2d(pu, pv) - pa);
        double w0 = 1.0 - bc.x() - bc.y();
        if (bc.x() < -1e-12 || bc.y() < -1e-12 || w0 < -1e-12) continue;
        ContactPoint cp;
        cp.position = w0 * a + bc.x() * b + bc.y() * c;
        cp.normal = mesh.facet_normals[f];
        cp.face_id = f;
        cp.boundary_distance = std::numeric_limits<double>::infinity();
        for (const auto& [ea, eb] : boundary) {
          cp.boundary_distance = std::min(cp.boundary_distance, point_segment_distance(cp.position, ea, eb));
        }
        if (boundary.empty()) cp.boundary_distance = 0.0;
        if (cp.boundary_distance >= min_boundary_dist) out.push_back(cp);
        break;
      }
    }
  }
  return out;
}

std::optional<double> ray_triangle_intersect(const Vec3& origin, const Vec3& dir, const Vec3& a,
                                             const Vec3& b, const Vec3& c) {
  const double eps = 1e-12;
  Vec3 e1 = b - a, e2 = c - a;
  Vec3 p = dir.cross(e2);
  double det = e1.dot(p);
  if (std::abs(det) < eps) return std::nullopt;
  double inv = 1.0 / det;
  Vec3 s = origin - a;
  double u = s.dot(p) * inv;
  if (u < -1e-12 || u > 1.0 + 1e-12) return std::nullopt;
  Vec3 q = s.cross(e1);
  double v = dir.dot(q) * inv;
  if (v < -1e-12 || u + v > 1.0 + 1e-12) return std::nullopt;
  double t = e2.dot(q) * inv;
  if (t < 0.0) return std::nullopt;
  return t;
}

std::optional<ContactPoint> ray_opposite_contact(const TriMesh& mesh, const ContactPoint& point,
                                                 double antipodal_tol) {
  Vec3 dir = -point.normal;
  double cos_opposed = -std::cos(antipodal_tol);
  std::optional<ContactPoint> best;
  double best_t = std::numeric_limits<double>::infinity();
  for (int f = 0; f < static_cast<int>(mesh.face_count()); ++f) {
    if (f == point.face_id) continue;
    if (mesh.facet_normals[f].dot(point.normal) > cos_opposed) continue;
    auto t = ray_triangle_intersect(point.position, dir, mesh.vertex(f, 0), mesh.vertex(f, 1),
                                    mesh.vertex(f, 2));
    if (!t || *t < 1e-9 || *t >= best_t) continue;
    ContactPoint hit;
    hit.position = point.position + *t * dir;
    hit.normal = mesh.facet_normals[f];
    hit.face_id = f;
    hit.boundary_distance = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 3; ++k) {
      hit.boundary_distance = std::min(
          hit.boundary_distance,
          point_segment_distance(hit.position, mesh.vertex(f, k), mesh.vertex(f, (k + 1) % 3)));
    }
    best = hit;
    best_t = *t;
  }
  return best;
}

}  // namespace disasm
