#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "fdbem/mesh.hpp"

namespace fs = std::filesystem;
using namespace fdbem;

namespace {

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("fdbem_mesh_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
             "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  fs::path file(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream(p) << text;
}

double total_area(const TriMesh& m) {
  double a = 0.0;
  for (double x : compute_element_geometry(m).area) a += x;
  return a;
}

}  // namespace

TEST(Mesh, OffMinimalFile) {
  TempDir dir;
  write_text(dir.file("tri.off"), "OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n3 0 1 2\n");
  std::vector<std::string> warnings;
  const TriMesh m = load_mesh(dir.file("tri.off"), MeshFormat::OFF, &warnings);
  EXPECT_EQ(m.num_elements(), 1u);
  EXPECT_EQ(m.vertices.size(), 3u);
  EXPECT_EQ(warnings.size(), 1u);  // a lone triangle is open
}

TEST(Mesh, OctahedronObjHasPositiveVolume) {
  TempDir dir;
  // Deliberately inward-oriented faces; loading must flip them.
  write_text(dir.file("octa.obj"),
             "# octahedron\nv 1 0 0\nv -1 0 0\nv 0 1 0\nv 0 -1 0\nv 0 0 1\nv 0 0 -1\n"
             "f 1 5 3\nf 3 5 2\nf 2 5 4\nf 4 5 1\nf 1 3 6\nf 3 2 6\nf 2 4 6\nf 4 1 6\n");
  const TriMesh m = load_mesh(dir.file("octa.obj"), MeshFormat::OBJ);
  EXPECT_EQ(m.num_elements(), 8u);
  EXPECT_TRUE(is_closed(m));
  EXPECT_GT(signed_volume(m), 0.0);
  EXPECT_NEAR(signed_volume(m), 4.0 / 3.0, 1e-12);
}

TEST(Mesh, ObjIgnoresNormalsAndTexcoords) {
  TempDir dir;
  write_text(dir.file("t.obj"),
             "v 0 0 0\nv 1 0 0\nv 0 1 0\nvn 0 0 1\nvt 0 0\nf 1/1/1 2/1/1 3//1\n");
  EXPECT_EQ(load_mesh(dir.file("t.obj"), MeshFormat::OBJ).num_elements(), 1u);
}

TEST(Mesh, QuadFaceIsRejected) {
  TempDir dir;
  write_text(dir.file("quad.off"), "OFF\n4 1 0\n0 0 0\n1 0 0\n1 1 0\n0 1 0\n4 0 1 2 3\n");
  try {
    load_mesh(dir.file("quad.off"), MeshFormat::OFF);
    FAIL() << "quad face accepted";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("non-triangular face"), std::string::npos);
  }
  write_text(dir.file("quad.obj"), "v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nf 1 2 3 4\n");
  EXPECT_THROW(load_mesh(dir.file("quad.obj"), MeshFormat::OBJ), Error);
}

TEST(Mesh, ViolationsThrow) {
  TempDir dir;
  write_text(dir.file("range.off"), "OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n3 0 1 7\n");
  EXPECT_THROW(load_mesh(dir.file("range.off"), MeshFormat::OFF), Error);
  write_text(dir.file("repeat.off"), "OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n3 0 1 1\n");
  EXPECT_THROW(load_mesh(dir.file("repeat.off"), MeshFormat::OFF), Error);
  write_text(dir.file("flat.off"), "OFF\n3 1 0\n0 0 0\n1 0 0\n2 0 0\n3 0 1 2\n");
  EXPECT_THROW(load_mesh(dir.file("flat.off"), MeshFormat::OFF), Error);
  EXPECT_THROW(load_mesh(dir.file("missing.off"), MeshFormat::OFF), Error);
  EXPECT_THROW(mesh_format_from_path("a.stl"), Error);
  EXPECT_EQ(mesh_format_from_path("a.OBJ"), MeshFormat::OBJ);
}

TEST(Mesh, SaveLoadRoundTripIsExact) {
  TempDir dir;
  TriMesh m = generate_sphere_mesh(2, 1.7);
  for (auto fmt : {MeshFormat::OFF, MeshFormat::OBJ}) {
    const fs::path p = dir.file(fmt == MeshFormat::OFF ? "s.off" : "s.obj");
    save_mesh(m, p, fmt);
    const TriMesh r = load_mesh(p, fmt);
    ASSERT_EQ(r.vertices.size(), m.vertices.size());
    ASSERT_EQ(r.triangles, m.triangles);
    for (std::size_t i = 0; i < m.vertices.size(); ++i) {
      EXPECT_EQ(r.vertices[i], m.vertices[i]) << i;
    }
    EXPECT_EQ(mesh_hash(r), mesh_hash(m));
  }
}

TEST(Mesh, SphereOctahedronBase) {
  const TriMesh m = generate_sphere_mesh(0, 1.0);
  EXPECT_EQ(m.num_elements(), 8u);
  EXPECT_EQ(m.vertices.size(), 6u);
  for (const auto& v : m.vertices) EXPECT_NEAR(v.norm(), 1.0, 1e-15);
}

TEST(Mesh, SphereElementCounts) {
  for (int n = 0; n <= 5; ++n) {
    const TriMesh m = generate_sphere_mesh(n, 1.0);
    EXPECT_EQ(m.num_elements(), 8u << (2 * n));
    EXPECT_TRUE(is_closed(m));
    EXPECT_GT(signed_volume(m), 0.0);
    for (const auto& v : m.vertices) EXPECT_NEAR(v.norm(), 1.0, 1e-14);
  }
  EXPECT_EQ(generate_sphere_mesh(3, 1.0).num_elements(), 512u);
  EXPECT_THROW(generate_sphere_mesh(11, 1.0), Error);
  EXPECT_THROW(generate_sphere_mesh(-1, 1.0), Error);
}

TEST(Mesh, SphereAreaConvergesFromBelow) {
  const double exact = 4.0 * kPi;
  double prev = 0.0;
  for (int n = 0; n <= 6; ++n) {
    const double a = total_area(generate_sphere_mesh(n, 1.0));
    EXPECT_LT(a, exact);
    EXPECT_GT(a, prev);
    prev = a;
  }
  EXPECT_LT(std::abs(total_area(generate_sphere_mesh(4, 1.0)) - exact) / exact, 5e-3);
}

TEST(Mesh, ElementGeometryOfUnitTriangle) {
  TriMesh m{{Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0)}, {{0, 1, 2}}};
  const auto g = compute_element_geometry(m);
  EXPECT_TRUE(g.centroid[0].isApprox(Vec3(1.0 / 3, 1.0 / 3, 0.0), 1e-15));
  EXPECT_TRUE(g.normal[0].isApprox(Vec3(0, 0, 1), 1e-15));
  EXPECT_DOUBLE_EQ(g.area[0], 0.5);

  for (auto& v : m.vertices) v += Vec3(5, 5, 5);
  const auto t = compute_element_geometry(m);
  EXPECT_TRUE(t.centroid[0].isApprox(g.centroid[0] + Vec3(5, 5, 5), 1e-14));
  EXPECT_TRUE(t.normal[0].isApprox(g.normal[0], 1e-14));
  EXPECT_NEAR(t.area[0], g.area[0], 1e-14);
}

TEST(Mesh, SphereNormalsAreNearlyRadial) {
  const auto g = compute_element_geometry(generate_sphere_mesh(3, 1.0));
  const double cos5 = std::cos(5.0 * kPi / 180.0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    EXPECT_NEAR(g.normal[i].norm(), 1.0, 1e-12);
    EXPECT_GT(g.normal[i].dot(g.centroid[i].normalized()), cos5) << i;
    const auto& t = g.triangles[i];
    EXPECT_TRUE(g.centroid[i].isApprox((t.a + t.b + t.c) / 3.0, 1e-15));
  }
}

TEST(Mesh, FlipAndHash) {
  TriMesh m = generate_sphere_mesh(1, 1.0);
  const auto h = mesh_hash(m);
  EXPECT_EQ(h, mesh_hash(generate_sphere_mesh(1, 1.0)));
  flip_orientation(m);
  EXPECT_LT(signed_volume(m), 0.0);
  EXPECT_NE(mesh_hash(m), h);
  TriMesh open = m;
  open.triangles.pop_back();
  EXPECT_FALSE(is_closed(open));
}
