#include "fdbem/sphere_series.hpp"

#include <algorithm>
#include <cmath>

namespace fdbem {

Complex spherical_hankel1(int n, double x) {
  return {std::sph_bessel(n, x), std::sph_neumann(n, x)};
}

Complex spherical_hankel1_derivative(int n, double x) {
  if (n == 0) return -spherical_hankel1(1, x);
  return spherical_hankel1(n - 1, x) - (static_cast<double>(n + 1) / x) * spherical_hankel1(n, x);
}

std::vector<double> legendre_table(int nmax, double t) {
  std::vector<double> p(nmax + 1);
  p[0] = 1.0;
  if (nmax >= 1) p[1] = t;
  for (int n = 1; n < nmax; ++n) {
    p[n + 1] = ((2.0 * n + 1.0) * t * p[n] - n * p[n - 1]) / (n + 1.0);
  }
  return p;
}

Complex pulsating_sphere_exact(double k) { return 1.0 / Complex(1.0, -k); }

std::vector<Complex> sphere_scattering_exact(double k, double radius,
                                             const std::vector<Vec3>& points,
                                             const Vec3& direction, const SeriesOptions& opt) {
  if (!(k > 0.0) || !(radius > 0.0)) throw Error("sphere_scattering_exact: k and radius must be > 0");
  const Vec3 d = direction.normalized();
  std::vector<double> cos_theta;
  cos_theta.reserve(points.size());
  for (const auto& x : points) cos_theta.push_back(std::clamp(d.dot(x.normalized()), -1.0, 1.0));

  const double ka = k * radius;
  std::vector<Complex> u(points.size(), Complex{});
  std::vector<double> p_prev(points.size(), 1.0), p_cur(cos_theta);
  Complex i_pow(1.0, 0.0);
  // Wronskian j_n h_n' - j_n' h_n = i / x^2 collapses the surface value to
  // sum (2n+1) i^n (i / (ka)^2) / h_n'(ka) P_n(cos theta).
  for (int n = 0; n < opt.max_terms; ++n) {
    const Complex hp = spherical_hankel1_derivative(n, ka);
    Complex coef = 0.0;
    if (std::isfinite(hp.real()) && std::isfinite(hp.imag())) {
      coef = (2.0 * n + 1.0) * i_pow * Complex(0.0, 1.0 / (ka * ka)) / hp;
    }
    double max_term = 0.0;
    for (std::size_t m = 0; m < points.size(); ++m) {
      const double pn = n == 0 ? 1.0 : p_cur[m];
      const Complex term = coef * pn;
      u[m] += term;
      max_term = std::max(max_term, std::abs(term));
    }
    if (n > 0) {
      for (std::size_t m = 0; m < points.size(); ++m) {
        const double next = ((2.0 * n + 1.0) * cos_theta[m] * p_cur[m] - n * p_prev[m]) / (n + 1.0);
        p_prev[m] = p_cur[m];
        p_cur[m] = next;
      }
    }
    i_pow *= Complex(0.0, 1.0);
    if (n >= ka && max_term < opt.term_tolerance) return u;
  }
  throw Error("sphere_scattering_exact: series did not converge");
}

}  // namespace fdbem
