#include "fdbem/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace fdbem {

QuadratureRule QuadratureRule::triangle(int order) {
  QuadratureRule rule;
  rule.order = order;
  auto add = [&rule](double a, double b, double c, double w) {
    rule.barycentric.emplace_back(a, b, c);
    rule.weights.push_back(w);
  };
  auto add3 = [&add](double a, double b, double w) {
    add(a, b, b, w);
    add(b, a, b, w);
    add(b, b, a, w);
  };
  switch (order) {
    case 1:
      add(1.0 / 3, 1.0 / 3, 1.0 / 3, 1.0);
      break;
    case 2:
      add3(2.0 / 3, 1.0 / 6, 1.0 / 3);
      break;
    case 4:
      add3(0.108103018168070, 0.445948490915965, 0.223381589678011);
      add3(0.816847572980459, 0.091576213509771, 0.109951743655322);
      break;
    case 5:
      add(1.0 / 3, 1.0 / 3, 1.0 / 3, 0.225);
      add3(0.059715871789770, 0.470142064105115, 0.132394152788506);
      add3(0.797426985353087, 0.101286507323456, 0.125939180544827);
      break;
    default:
      throw Error("unsupported triangle rule order " + std::to_string(order));
  }
  return rule;
}

const QuadratureRule& default_rule() {
  static const QuadratureRule rule = QuadratureRule::triangle(4);
  return rule;
}

GaussLegendre::GaussLegendre(int n) {
  if (n < 1) throw Error("Gauss-Legendre order must be >= 1");
  nodes.resize(n);
  weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= n; ++j) {
        double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // map [-1, 1] -> [0, 1]
    nodes[i] = 0.5 * (1.0 - x);
    nodes[n - 1 - i] = 0.5 * (1.0 + x);
    weights[i] = weights[n - 1 - i] = 0.5 * w;
  }
}

double point_triangle_distance(const Vec3& p, const Triangle& tri) {
  // Closest point on triangle by Voronoi-region classification.
  const Vec3& a = tri.a;
  const Vec3& b = tri.b;
  const Vec3& c = tri.c;
  const Vec3 ab = b - a, ac = c - a, ap = p - a;
  const double d1 = ab.dot(ap), d2 = ac.dot(ap);
  if (d1 <= 0 && d2 <= 0) return (p - a).norm();
  const Vec3 bp = p - b;
  const double d3 = ab.dot(bp), d4 = ac.dot(bp);
  if (d3 >= 0 && d4 <= d3) return (p - b).norm();
  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0 && d1 >= 0 && d3 <= 0) return (p - (a + ab * (d1 / (d1 - d3)))).norm();
  const Vec3 cp = p - c;
  const double d5 = ab.dot(cp), d6 = ac.dot(cp);
  if (d6 >= 0 && d5 <= d6) return (p - c).norm();
  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0 && d2 >= 0 && d6 <= 0) return (p - (a + ac * (d2 / (d2 - d6)))).norm();
  const double va = d3 * d6 - d5 * d4;
  if (va <= 0 && (d4 - d3) >= 0 && (d5 - d6) >= 0) {
    const double w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
    return (p - (b + (c - b) * w)).norm();
  }
  const double denom = 1.0 / (va + vb + vc);
  const double v = vb * denom, w = vc * denom;
  return (p - (a + ab * v + ac * w)).norm();
}

namespace {

struct IntegrandSet {
  std::span<const KernelKind> kinds;
  Vec3 n_x, n_y, x;
  double k;
  Complex alpha;
  bool need_second;
  const QuadratureRule* rule;
  NearFieldPolicy policy;
};

void accumulate(const Triangle& tri, const IntegrandSet& s, std::span<Complex> out, int depth) {
  const double diam = tri.diameter();
  if (depth < s.policy.max_depth &&
      point_triangle_distance(s.x, tri) < s.policy.separation * diam) {
    const Vec3 ab = 0.5 * (tri.a + tri.b), bc = 0.5 * (tri.b + tri.c), ca = 0.5 * (tri.c + tri.a);
    accumulate({tri.a, ab, ca}, s, out, depth + 1);
    accumulate({ab, tri.b, bc}, s, out, depth + 1);
    accumulate({ca, bc, tri.c}, s, out, depth + 1);
    accumulate({ab, bc, ca}, s, out, depth + 1);
    return;
  }
  const double area = tri.area();
  const auto& rule = *s.rule;
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const auto& b = rule.barycentric[q];
    const Vec3 y = b[0] * tri.a + b[1] * tri.b + b[2] * tri.c;
    const Vec3 d = s.x - y;
    const double r = d.norm();
    if (!(r > 0.0)) throw Error("collocation point lies on the integration element");
    const auto rad = detail::radial(r, s.k, s.need_second);
    const double w = rule.weights[q] * area;
    for (std::size_t i = 0; i < s.kinds.size(); ++i) {
      out[i] += w * detail::combine(s.kinds[i], d, rad, s.n_x, s.n_y, s.alpha);
    }
  }
}

}  // namespace

void element_integrals(const Triangle& tri, const Vec3& n_y, const Vec3& x, const Vec3& n_x,
                       std::span<const KernelKind> kinds, const WaveContext& ctx,
                       std::span<Complex> out, const QuadratureRule& rule,
                       const NearFieldPolicy& policy) {
  if (out.size() < kinds.size()) throw Error("element_integrals: output span too small");
  if (!(tri.area() > 0.0)) throw Error("degenerate integration element");
  IntegrandSet s{kinds, n_x, n_y, x, ctx.k(), Complex{}, false, &rule, policy};
  for (auto kind : kinds) {
    if (uses_alpha(kind)) s.alpha = ctx.alpha();
    s.need_second = s.need_second || detail::needs_second(kind);
  }
  if (point_triangle_distance(x, tri) <= 1e-14 * tri.diameter()) {
    throw Error("collocation point lies on the integration element; use self_terms");
  }
  std::fill(out.begin(), out.begin() + kinds.size(), Complex{});
  accumulate(tri, s, out, 0);
}

Complex element_integral(const Triangle& tri, const Vec3& n_y, const Vec3& x, const Vec3& n_x,
                         KernelKind kind, const WaveContext& ctx, const QuadratureRule& rule,
                         const NearFieldPolicy& policy) {
  Complex out;
  element_integrals(tri, n_y, x, n_x, std::span<const KernelKind>(&kind, 1), ctx,
                    std::span<Complex>(&out, 1), rule, policy);
  return out;
}

namespace {

// Per-edge polar data for an in-plane point x: perpendicular distance h and
// signed positions sA < sB of the edge endpoints along the edge, measured from
// the foot of the perpendicular.
struct EdgePolar {
  double h, s_a, s_b;
  Vec3 foot, tangent, a;
};

std::array<EdgePolar, 3> edge_polar(const Triangle& tri, const Vec3& x) {
  const std::array<Vec3, 3> v{tri.a, tri.b, tri.c};
  std::array<EdgePolar, 3> out;
  for (int e = 0; e < 3; ++e) {
    const Vec3& a = v[e];
    const Vec3& b = v[(e + 1) % 3];
    const Vec3 t = (b - a).normalized();
    const Vec3 foot = a + (x - a).dot(t) * t;
    const double h = (x - foot).norm();
    if (!(h > 0.0)) throw Error("collocation point lies on an element edge");
    out[e] = {h, (a - foot).dot(t), (b - foot).dot(t), foot, t, a};
  }
  return out;
}

// Integrates a bounded radial function f(r) over the triangle in polar
// coordinates centered at x: sum over edges of
//   int_{phi_a}^{phi_b} int_0^{h / cos phi} f(rho) rho drho dphi.
template <class F>
Complex polar_integral(const Triangle& tri, const Vec3& x, F&& f, int n_phi, int n_rho) {
  const GaussLegendre gphi(n_phi), grho(n_rho);
  Complex total{};
  for (const auto& e : edge_polar(tri, x)) {
    const double phi_a = std::atan2(e.s_a, e.h), phi_b = std::atan2(e.s_b, e.h);
    const double dphi = phi_b - phi_a;
    for (int i = 0; i < n_phi; ++i) {
      const double phi = phi_a + dphi * gphi.nodes[i];
      const double rmax = e.h / std::cos(phi);
      Complex inner{};
      for (int j = 0; j < n_rho; ++j) {
        const double rho = rmax * grho.nodes[j];
        inner += grho.weights[j] * f(rho) * rho;
      }
      total += gphi.weights[i] * dphi * rmax * inner;
    }
  }
  return total;
}

// (e^{ikr} - 1) / (4 pi r), bounded as r -> 0.
Complex single_remainder(double r, double k) {
  const double z = k * r;
  if (z < 0.5) {
    // (k / 4pi) sum_{m>=1} (iz)^m / (m! z)
    Complex term(0.0, k);  // i k
    Complex sum = term;
    for (int m = 2; m <= 16; ++m) {
      term *= Complex(0.0, z) / static_cast<double>(m);
      sum += term;
    }
    return sum / (4.0 * kPi);
  }
  return (Complex(std::cos(z), std::sin(z)) - 1.0) / (4.0 * kPi * r);
}

// [e^{ikr}(1 - ikr) - 1 - (kr)^2/2] / (4 pi r^3), bounded as r -> 0.
Complex hyper_remainder(double r, double k) {
  const double z = k * r;
  if (z < 0.5) {
    // (1/(4 pi r^3)) sum_{m>=3} (iz)^m (1 - m) / m!
    Complex pow_iz = Complex(0.0, 1.0) * Complex(0.0, 1.0) * Complex(0.0, 1.0) * (k * k * k);
    double zpow = 1.0;  // z^{m-3}
    double fact = 6.0;  // m!
    Complex sum{};
    for (int m = 3; m <= 18; ++m) {
      sum += pow_iz * zpow * ((1.0 - m) / fact);
      pow_iz *= Complex(0.0, 1.0);
      zpow *= z;
      fact *= (m + 1);
    }
    return sum / (4.0 * kPi);
  }
  const Complex e(std::cos(z), std::sin(z));
  return (e * Complex(1.0, -z) - 1.0 - 0.5 * z * z) / (4.0 * kPi * r * r * r);
}

constexpr int kPolarPhi = 12;
constexpr int kPolarRho = 10;

// Extra nodes for elements spanning a sizeable fraction of a wavelength.
int polar_nodes(int base, double k, double diameter) {
  return std::min(64, base + static_cast<int>(std::ceil(3.0 * k * diameter)));
}

}  // namespace

double laplace_single_layer_flat(const Triangle& tri, const Vec3& x) {
  double sum = 0.0;
  for (const auto& e : edge_polar(tri, x)) {
    sum += e.h * (std::asinh(e.s_b / e.h) - std::asinh(e.s_a / e.h));
  }
  return sum / (4.0 * kPi);
}

double laplace_hypersingular_flat(const Triangle& tri, const Vec3& x) {
  double sum = 0.0;
  for (const auto& e : edge_polar(tri, x)) {
    const double sin_b = e.s_b / std::hypot(e.s_b, e.h);
    const double sin_a = e.s_a / std::hypot(e.s_a, e.h);
    sum -= (sin_b - sin_a) / e.h;
  }
  return sum / (4.0 * kPi);
}

SelfTerms self_terms(const Triangle& tri, const WaveContext& ctx) {
  if (!(tri.area() > 0.0)) throw Error("degenerate element in self_terms");
  const Vec3 x = tri.centroid();
  const double k = ctx.k();

  const double s0 = laplace_single_layer_flat(tri, x);
  const double h0 = laplace_hypersingular_flat(tri, x);

  SelfTerms t;
  t.dlp_y = 0.0;
  t.dlp_x = 0.0;
  if (k == 0.0) {
    t.single = s0;
    t.hyper = h0;
  } else {
    const int n_phi = polar_nodes(kPolarPhi, k, tri.diameter());
    const int n_rho = polar_nodes(kPolarRho, k, tri.diameter());
    t.single = s0 + polar_integral(tri, x, [k](double r) { return single_remainder(r, k); },
                                   n_phi, n_rho);
    // e^{ikr}(1 - ikr)/(4 pi r^3) = 1/(4 pi r^3) + (k^2/2)/(4 pi r) + bounded
    t.hyper = h0 + 0.5 * k * k * s0 +
              polar_integral(tri, x, [k](double r) { return hyper_remainder(r, k); },
                             n_phi, n_rho);
  }
  if (ctx.is_static()) {
    t.lhs = 0.5;
    t.rhs = t.single;
    return t;
  }
  const Complex alpha = ctx.alpha();
  t.lhs = 0.5 + t.dlp_y + alpha * t.hyper;
  t.rhs = -0.5 * alpha + t.single + alpha * t.dlp_x;
  return t;
}

ElementGeometry bie_geometry(const TriMesh& mesh) {
  ElementGeometry g = compute_element_geometry(mesh);
  for (auto& n : g.normal) n = -n;
  return g;
}

void collocation_entries(const ElementGeometry& g, std::size_t i, std::size_t j,
                         std::span<const KernelKind> kinds, const WaveContext& ctx,
                         std::span<Complex> out, const NearFieldPolicy& policy) {
  if (i != j) {
    element_integrals(g.triangles[j], g.normal[j], g.centroid[i], g.normal[i], kinds, ctx, out,
                      default_rule(), policy);
    return;
  }
  const SelfTerms t = self_terms(g.triangles[i], ctx);
  for (std::size_t n = 0; n < kinds.size(); ++n) {
    switch (kinds[n]) {
      case KernelKind::Single: out[n] = t.single; break;
      case KernelKind::Hyper: out[n] = t.hyper; break;
      case KernelKind::DlpY: out[n] = t.dlp_y; break;
      case KernelKind::DlpX: out[n] = t.dlp_x; break;
      case KernelKind::NearLhs: out[n] = t.lhs; break;
      case KernelKind::NearRhs: out[n] = t.rhs; break;
      case KernelKind::TargetCombined: out[n] = t.single; break;
    }
  }
}

}  // namespace fdbem
