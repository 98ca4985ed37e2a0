#include "fdbem/mesh.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <unordered_map>

namespace fdbem {

double Triangle::diameter() const {
  return std::max({(b - a).norm(), (c - b).norm(), (a - c).norm()});
}

namespace {

std::string strip_comment(const std::string& line) {
  auto pos = line.find('#');
  return pos == std::string::npos ? line : line.substr(0, pos);
}

bool next_content_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    line = strip_comment(line);
    if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
  }
  return false;
}

TriMesh parse_off(std::istream& in) {
  std::string line;
  if (!next_content_line(in, line)) throw Error("OFF: empty file");
  std::istringstream header(line);
  std::string magic;
  header >> magic;
  if (magic.rfind("OFF", 0) != 0) throw Error("OFF: missing OFF header");
  long nv = -1, nf = -1, ne = 0;
  if (!(header >> nv >> nf)) {
    if (!next_content_line(in, line)) throw Error("OFF: missing counts");
    std::istringstream counts(line);
    if (!(counts >> nv >> nf)) throw Error("OFF: malformed counts");
    counts >> ne;
  }
  if (nv < 0 || nf < 0) throw Error("OFF: negative counts");

  TriMesh mesh;
  mesh.vertices.reserve(nv);
  for (long i = 0; i < nv; ++i) {
    if (!next_content_line(in, line)) throw Error("OFF: truncated vertex list");
    std::istringstream ls(line);
    double x, y, z;
    if (!(ls >> x >> y >> z)) throw Error("OFF: malformed vertex at index " + std::to_string(i));
    mesh.vertices.emplace_back(x, y, z);
  }
  mesh.triangles.reserve(nf);
  for (long f = 0; f < nf; ++f) {
    if (!next_content_line(in, line)) throw Error("OFF: truncated face list");
    std::istringstream ls(line);
    int count = 0;
    if (!(ls >> count)) throw Error("OFF: malformed face " + std::to_string(f));
    if (count != 3) throw Error("non-triangular face (face " + std::to_string(f) + ")");
    std::array<int, 3> t{};
    if (!(ls >> t[0] >> t[1] >> t[2])) throw Error("OFF: malformed face " + std::to_string(f));
    mesh.triangles.push_back(t);
  }
  return mesh;
}

int parse_obj_index(const std::string& token, std::size_t nverts) {
  // "v", "v/vt", "v//vn", "v/vt/vn"; negative indices count from the end.
  const std::string head = token.substr(0, token.find('/'));
  int idx = 0;
  try {
    std::size_t used = 0;
    idx = std::stoi(head, &used);
    if (used != head.size()) throw Error("");
  } catch (...) {
    throw Error("OBJ: malformed face index '" + token + "'");
  }
  if (idx > 0) return idx - 1;
  if (idx < 0) return static_cast<int>(nverts) + idx;
  throw Error("OBJ: zero face index");
}

TriMesh parse_obj(std::istream& in) {
  TriMesh mesh;
  std::string line;
  while (next_content_line(in, line)) {
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "v") {
      double x, y, z;
      if (!(ls >> x >> y >> z)) throw Error("OBJ: malformed vertex");
      mesh.vertices.emplace_back(x, y, z);
    } else if (tag == "f") {
      std::vector<std::string> tokens;
      for (std::string tok; ls >> tok;) tokens.push_back(tok);
      if (tokens.size() != 3) {
        throw Error("non-triangular face (face " + std::to_string(mesh.triangles.size()) + ")");
      }
      std::array<int, 3> t{};
      for (int k = 0; k < 3; ++k) t[k] = parse_obj_index(tokens[k], mesh.vertices.size());
      mesh.triangles.push_back(t);
    }
    // vn, vt, g, o, s, usemtl, mtllib: ignored
  }
  return mesh;
}

}  // namespace

MeshFormat mesh_format_from_path(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  if (ext == ".off") return MeshFormat::OFF;
  if (ext == ".obj") return MeshFormat::OBJ;
  throw Error("unknown mesh format for '" + path.string() + "' (expected .off or .obj)");
}

TriMesh load_mesh(const std::filesystem::path& path, MeshFormat format,
                  std::vector<std::string>* warnings) {
  if (!std::filesystem::exists(path)) throw Error("mesh not found: " + path.string());
  std::ifstream in(path);
  if (!in) throw Error("cannot open mesh: " + path.string());

  TriMesh mesh = format == MeshFormat::OFF ? parse_off(in) : parse_obj(in);
  validate_mesh(mesh);

  if (is_closed(mesh)) {
    if (signed_volume(mesh) < 0.0) flip_orientation(mesh);
  } else if (warnings) {
    warnings->push_back("mesh '" + path.string() +
                        "' is not a closed, consistently oriented surface");
  }
  return mesh;
}

void save_mesh(const TriMesh& mesh, const std::filesystem::path& path, MeshFormat format) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write mesh: " + path.string());
  out << std::setprecision(17);
  if (format == MeshFormat::OFF) {
    out << "OFF\n" << mesh.vertices.size() << ' ' << mesh.triangles.size() << " 0\n";
    for (const auto& v : mesh.vertices) out << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
    for (const auto& t : mesh.triangles) out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  } else {
    for (const auto& v : mesh.vertices) out << "v " << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
    for (const auto& t : mesh.triangles)
      out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
  }
}

TriMesh generate_sphere_mesh(int subdivisions, double radius) {
  if (subdivisions < 0 || subdivisions > 10) {
    throw Error("sphere subdivisions must be in [0, 10], got " + std::to_string(subdivisions));
  }
  if (!(radius > 0.0)) throw Error("sphere radius must be positive");

  TriMesh mesh;
  mesh.vertices = {Vec3(1, 0, 0), Vec3(-1, 0, 0), Vec3(0, 1, 0),
                   Vec3(0, -1, 0), Vec3(0, 0, 1), Vec3(0, 0, -1)};
  for (int sx : {1, -1}) {
    for (int sy : {1, -1}) {
      for (int sz : {1, -1}) {
        int a = sx > 0 ? 0 : 1, b = sy > 0 ? 2 : 3, c = sz > 0 ? 4 : 5;
        if (sx * sy * sz > 0) mesh.triangles.push_back({a, b, c});
        else mesh.triangles.push_back({a, c, b});
      }
    }
  }

  for (int level = 0; level < subdivisions; ++level) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int i, int j) {
      auto key = std::minmax(i, j);
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      Vec3 m = (mesh.vertices[i] + mesh.vertices[j]).normalized();
      mesh.vertices.push_back(m);
      int id = static_cast<int>(mesh.vertices.size()) - 1;
      midpoint.emplace(key, id);
      return id;
    };
    std::vector<std::array<int, 3>> refined;
    refined.reserve(mesh.triangles.size() * 4);
    for (const auto& t : mesh.triangles) {
      int ab = mid(t[0], t[1]), bc = mid(t[1], t[2]), ca = mid(t[2], t[0]);
      refined.push_back({t[0], ab, ca});
      refined.push_back({ab, t[1], bc});
      refined.push_back({ca, bc, t[2]});
      refined.push_back({ab, bc, ca});
    }
    mesh.triangles = std::move(refined);
  }
  for (auto& v : mesh.vertices) v *= radius;
  return mesh;
}

ElementGeometry compute_element_geometry(const TriMesh& mesh) {
  ElementGeometry g;
  const std::size_t n = mesh.num_elements();
  g.triangles.reserve(n);
  g.centroid.reserve(n);
  g.normal.reserve(n);
  g.area.reserve(n);
  g.diameter.reserve(n);
  for (std::size_t e = 0; e < n; ++e) {
    const auto& t = mesh.triangles[e];
    Triangle tri{mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]};
    Vec3 cr = tri.cross();
    double len = cr.norm();
    if (!(len > 0.0)) throw Error("degenerate triangle at element " + std::to_string(e));
    g.triangles.push_back(tri);
    g.centroid.push_back(tri.centroid());
    g.normal.push_back(cr / len);
    g.area.push_back(0.5 * len);
    g.diameter.push_back(tri.diameter());
  }
  return g;
}

BoundingBox bounding_box(const TriMesh& mesh) {
  if (mesh.vertices.empty()) throw Error("empty mesh");
  BoundingBox box{mesh.vertices.front(), mesh.vertices.front()};
  for (const auto& v : mesh.vertices) {
    box.lo = box.lo.cwiseMin(v);
    box.hi = box.hi.cwiseMax(v);
  }
  return box;
}

void validate_mesh(const TriMesh& mesh) {
  if (mesh.triangles.empty()) throw Error("mesh has no triangles");
  const double diag = bounding_box(mesh).diagonal();
  const double min_area = 1e-14 * diag * diag;
  const int nv = static_cast<int>(mesh.vertices.size());
  for (std::size_t f = 0; f < mesh.triangles.size(); ++f) {
    const auto& t = mesh.triangles[f];
    for (int k = 0; k < 3; ++k) {
      if (t[k] < 0 || t[k] >= nv) {
        throw Error("face " + std::to_string(f) + " has out-of-range vertex index " + std::to_string(t[k]));
      }
    }
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) {
      throw Error("face " + std::to_string(f) + " repeats a vertex");
    }
    Triangle tri{mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]};
    if (!(tri.area() > min_area)) throw Error("degenerate triangle (face " + std::to_string(f) + ")");
  }
}

double signed_volume(const TriMesh& mesh) {
  double vol = 0.0;
  for (const auto& t : mesh.triangles) {
    const Vec3& a = mesh.vertices[t[0]];
    const Vec3& b = mesh.vertices[t[1]];
    const Vec3& c = mesh.vertices[t[2]];
    vol += a.dot(b.cross(c));
  }
  return vol / 6.0;
}

bool is_closed(const TriMesh& mesh) {
  // Closed and consistently oriented: each directed edge appears exactly once
  // and its reverse appears exactly once.
  std::map<std::pair<int, int>, int> directed;
  for (const auto& t : mesh.triangles) {
    for (int k = 0; k < 3; ++k) ++directed[{t[k], t[(k + 1) % 3]}];
  }
  for (const auto& [edge, count] : directed) {
    if (count != 1) return false;
    auto rev = directed.find({edge.second, edge.first});
    if (rev == directed.end() || rev->second != 1) return false;
  }
  return true;
}

void flip_orientation(TriMesh& mesh) {
  for (auto& t : mesh.triangles) std::swap(t[1], t[2]);
}

std::uint64_t mesh_hash(const TriMesh& mesh) {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](const void* data, std::size_t bytes) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < bytes; ++i) {
      h ^= p[i];
      h *= 1099511628211ull;
    }
  };
  for (const auto& v : mesh.vertices) mix(v.data(), 3 * sizeof(double));
  for (const auto& t : mesh.triangles) mix(t.data(), 3 * sizeof(int));
  return h;
}

}  // namespace fdbem
