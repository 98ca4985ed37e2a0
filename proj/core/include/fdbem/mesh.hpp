#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "fdbem/types.hpp"

namespace fdbem {

// Closed (or open, for operator tests) surface triangulation. Triangles are
// counterclockwise when seen from outside the enclosed volume.
struct TriMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> triangles;

  std::size_t num_elements() const { return triangles.size(); }
};

enum class MeshFormat { OFF, OBJ };

struct Triangle {
  Vec3 a, b, c;

  Vec3 centroid() const { return (a + b + c) / 3.0; }
  Vec3 cross() const { return (b - a).cross(c - a); }
  double area() const { return 0.5 * cross().norm(); }
  double diameter() const;
};

// Per-element data used by collocation. normal is the outward unit normal of
// the triangulated body.
struct ElementGeometry {
  std::vector<Triangle> triangles;
  std::vector<Vec3> centroid;
  std::vector<Vec3> normal;
  std::vector<double> area;
  std::vector<double> diameter;

  std::size_t size() const { return centroid.size(); }
};

MeshFormat mesh_format_from_path(const std::filesystem::path& path);

// Parses an OFF or OBJ file. Warnings (e.g. an open surface) are appended to
// `warnings` when given; hard violations throw Error.
TriMesh load_mesh(const std::filesystem::path& path, MeshFormat format,
                  std::vector<std::string>* warnings = nullptr);

void save_mesh(const TriMesh& mesh, const std::filesystem::path& path,
               MeshFormat format);

// Octahedron refined `subdivisions` times by 4-way splitting, vertices
// projected to the sphere: 8 * 4^n triangles.
TriMesh generate_sphere_mesh(int subdivisions, double radius);

ElementGeometry compute_element_geometry(const TriMesh& mesh);

// Throws Error on out-of-range indices, repeated vertices or degenerate
// triangles (area <= 1e-14 * bbox_diagonal^2).
void validate_mesh(const TriMesh& mesh);

double signed_volume(const TriMesh& mesh);
bool is_closed(const TriMesh& mesh);
void flip_orientation(TriMesh& mesh);

struct BoundingBox {
  Vec3 lo, hi;
  double diagonal() const { return (hi - lo).norm(); }
};
BoundingBox bounding_box(const TriMesh& mesh);

// FNV-1a over the raw vertex and index data; used to key operator caches.
std::uint64_t mesh_hash(const TriMesh& mesh);

}  // namespace fdbem
