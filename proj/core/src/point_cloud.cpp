#include "fdbem/point_cloud.hpp"

#include <cmath>

namespace fdbem {

std::vector<Vec3> cube_surface_points(const Vec3& center, double width, int p, double scale) {
  if (p < 2) throw Error("cube_surface_points: p must be >= 2");
  std::vector<Vec3> out;
  out.reserve(surface_grid_size(p));
  const double side = scale * width;
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < p; ++j) {
      for (int l = 0; l < p; ++l) {
        const bool surface = i == 0 || j == 0 || l == 0 || i == p - 1 || j == p - 1 || l == p - 1;
        if (!surface) continue;
        const Vec3 t(static_cast<double>(i) / (p - 1), static_cast<double>(j) / (p - 1),
                     static_cast<double>(l) / (p - 1));
        out.push_back(center + side * (t - Vec3::Constant(0.5)));
      }
    }
  }
  return out;
}

Mat3 rotation_for(const Vec3& direction) {
  const double n = direction.norm();
  if (!(n > 0.0)) throw Error("rotation_for: zero vector");
  const Vec3 u = direction / n;
  const Vec3 ez = Vec3::UnitZ();
  const double c = u.dot(ez);
  if (c == 1.0) return Mat3::Identity();
  if (c == -1.0) return Eigen::Vector3d(1.0, -1.0, -1.0).asDiagonal();
  // Rodrigues form of the rotation about u x e_z taking u to e_z.
  const Vec3 a = u.cross(ez);
  Mat3 k;
  k << 0.0, -a.z(), a.y(), a.z(), 0.0, -a.x(), -a.y(), a.x(), 0.0;
  return Mat3::Identity() + k + (k * k) / (1.0 + c);
}

std::vector<Vec3> reference_frustum_points(int p, const Frustum& f) {
  if (p < 2) throw Error("reference_frustum_points: p must be >= 2");
  if (!(f.rho_min > 0.0) || !(f.rho_max > f.rho_min)) throw Error("invalid frustum radii");
  const auto lattice = cube_surface_points(Vec3::Zero(), 2.0, p, 1.0);
  std::vector<Vec3> out;
  out.reserve(lattice.size());
  const double ratio = f.rho_max / f.rho_min;
  for (const Vec3& g : lattice) {
    const double rho = f.rho_min * std::pow(ratio, 0.5 * (g.z() + 1.0));
    // Concentric square-to-disk map: (a, b) -> radius r in [0, 1] and azimuth.
    const double a = g.x(), b = g.y();
    double r = 0.0, phi = 0.0;
    if (std::abs(a) >= std::abs(b) && a != 0.0) {
      r = a;
      phi = 0.25 * kPi * (b / a);
    } else if (b != 0.0) {
      r = b;
      phi = 0.5 * kPi - 0.25 * kPi * (a / b);
    }
    const double polar = f.half_angle * std::abs(r);
    const double sgn = r < 0.0 ? -1.0 : 1.0;
    out.emplace_back(rho * std::sin(polar) * sgn * std::cos(phi),
                     rho * std::sin(polar) * sgn * std::sin(phi), rho * std::cos(polar));
  }
  return out;
}

std::vector<Vec3> place(const std::vector<Vec3>& reference, const Mat3& rotation,
                        const Vec3& center) {
  std::vector<Vec3> out;
  out.reserve(reference.size());
  const Mat3 rt = rotation.transpose();
  for (const auto& x : reference) out.push_back(rt * x + center);
  return out;
}

std::vector<Vec3> directional_check_cloud(const Vec3& center, const Vec3& direction, int p,
                                          const Frustum& f) {
  return place(reference_frustum_points(p, f), rotation_for(direction), center);
}

}  // namespace fdbem
