#pragma once

#include <vector>

#include "fdbem/types.hpp"

namespace fdbem {

// Spherical Hankel function of the first kind h_n(x) = j_n(x) + i y_n(x) and
// its derivative.
Complex spherical_hankel1(int n, double x);
Complex spherical_hankel1_derivative(int n, double x);

// Legendre polynomials P_0..P_nmax at t.
std::vector<double> legendre_table(int nmax, double t);

// Surface value of the radiating field on the unit sphere with dudn = 1,
// n pointing into the sphere: 1 / (1 - ik).
Complex pulsating_sphere_exact(double k);

struct SeriesOptions {
  double term_tolerance = 1e-10;
  int max_terms = 500;
};

// Total field on a sound-hard sphere of `radius` centered at the origin for
// the plane wave e^{ik d.x}, evaluated at surface points (projected onto the
// sphere direction-wise). Throws if the series has not converged within
// max_terms.
std::vector<Complex> sphere_scattering_exact(double k, double radius,
                                             const std::vector<Vec3>& points,
                                             const Vec3& direction,
                                             const SeriesOptions& opt = {});

}  // namespace fdbem
