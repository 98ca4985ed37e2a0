#pragma once

#include <span>
#include <vector>

#include "fdbem/kernel.hpp"
#include "fdbem/mesh.hpp"

namespace fdbem {

// Symmetric rule on the reference triangle. Weights sum to 1, so an integral
// over a physical triangle is area * sum(w_q f(y_q)).
struct QuadratureRule {
  std::vector<Eigen::Vector3d> barycentric;
  std::vector<double> weights;
  int order = 0;

  std::size_t size() const { return weights.size(); }

  // order in {1, 2, 4, 5}
  static QuadratureRule triangle(int order);
};

// Gauss-Legendre nodes and weights on [0, 1].
struct GaussLegendre {
  std::vector<double> nodes, weights;
  explicit GaussLegendre(int n);
};

// Default far-field rule (6 points, exact for degree 4).
const QuadratureRule& default_rule();

double point_triangle_distance(const Vec3& x, const Triangle& tri);

template <class F>
auto integrate_triangle(const Triangle& tri, const QuadratureRule& rule, F&& f) {
  using R = decltype(f(tri.a));
  R sum{};
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const auto& b = rule.barycentric[q];
    const Vec3 y = b[0] * tri.a + b[1] * tri.b + b[2] * tri.c;
    sum += rule.weights[q] * f(y);
  }
  return sum * tri.area();
}

struct NearFieldPolicy {
  double separation = 2.0;  // subdivide while dist < separation * diameter
  int max_depth = 6;
};

// Integral of the kernel over a flat triangle with normal n_y, evaluated at x
// (with normal n_x). Triangles closer than policy.separation diameters are
// split 4-way recursively up to policy.max_depth. Throws if x lies on the
// triangle; such entries belong to self_terms.
Complex element_integral(const Triangle& tri, const Vec3& n_y, const Vec3& x, const Vec3& n_x,
                         KernelKind kind, const WaveContext& ctx,
                         const QuadratureRule& rule = default_rule(),
                         const NearFieldPolicy& policy = {});

// Several kernels sharing one subdivision pass. out[i] receives kinds[i].
void element_integrals(const Triangle& tri, const Vec3& n_y, const Vec3& x, const Vec3& n_x,
                       std::span<const KernelKind> kinds, const WaveContext& ctx,
                       std::span<Complex> out, const QuadratureRule& rule = default_rule(),
                       const NearFieldPolicy& policy = {});

// Singular integrals over a flat triangle for a collocation point at its
// centroid, and the assembled Burton-Miller diagonal entries.
struct SelfTerms {
  Complex single;  // int G
  Complex hyper;   // finite-part int d2G/dn_x dn_y
  Complex dlp_y;   // identically 0 on a flat panel
  Complex dlp_x;   // identically 0 on a flat panel
  Complex lhs;     // 1/2 + dlp_y + alpha * hyper
  Complex rhs;     // -alpha/2 + single + alpha * dlp_x
};

SelfTerms self_terms(const Triangle& tri, const WaveContext& ctx);

// Geometry in the integral-equation convention: normals point into the
// obstacle, i.e. out of the acoustic domain.
ElementGeometry bie_geometry(const TriMesh& mesh);

// Collocation entries for element j at centroid i, one per kind. The diagonal
// (i == j) uses self_terms: NearLhs and NearRhs receive the full lhs / rhs
// diagonal including jump terms; Single and Hyper receive the bare integrals
// and the double-layer kinds receive 0.
void collocation_entries(const ElementGeometry& g, std::size_t i, std::size_t j,
                         std::span<const KernelKind> kinds, const WaveContext& ctx,
                         std::span<Complex> out, const NearFieldPolicy& policy = {});

// Pieces exposed for tests: analytic Laplace integrals over a flat triangle
// for an in-plane interior point x.
double laplace_single_layer_flat(const Triangle& tri, const Vec3& x);     // int 1/(4 pi r)
double laplace_hypersingular_flat(const Triangle& tri, const Vec3& x);    // f.p. int 1/(4 pi r^3)

}  // namespace fdbem
