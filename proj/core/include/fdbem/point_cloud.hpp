#pragma once

#include <vector>

#include "fdbem/types.hpp"

namespace fdbem {

enum class CloudRole { OutEquiv, OutCheck, InEquiv, InCheck };

struct PointCloud {
  std::vector<Vec3> points;
  CloudRole role = CloudRole::OutEquiv;
  int cube = -1;
  int direction = -1;  // -1 for non-directional clouds

  std::size_t size() const { return points.size(); }
};

// Number of lattice points on the surface of a p x p x p grid: 6p^2 - 12p + 8.
constexpr int surface_grid_size(int p) { return 6 * p * p - 12 * p + 8; }

// Surface points of the p^3 lattice spanning the cube of side scale * width.
std::vector<Vec3> cube_surface_points(const Vec3& center, double width, int p, double scale);

// Proper rotation R with R * direction = e_z (minimal rotation; identity for
// e_z and the pi-rotation about x for -e_z).
Mat3 rotation_for(const Vec3& direction);

// Frustum with apex at the cube center and axis +z in the reference frame.
struct Frustum {
  double rho_min;     // radial extent
  double rho_max;
  double half_angle;  // angular radius around the axis, radians
};

// The surface lattice mapped onto the frustum: the z-coordinate of the
// lattice becomes geometric radial spacing (denser near rho_min), the two
// transverse coordinates become the polar and azimuthal angle.
std::vector<Vec3> reference_frustum_points(int p, const Frustum& f);

// Reference frustum rotated by rotation_for(direction)^T and moved to center.
std::vector<Vec3> directional_check_cloud(const Vec3& center, const Vec3& direction, int p,
                                          const Frustum& f);

// x -> R^T x + center for every point.
std::vector<Vec3> place(const std::vector<Vec3>& reference, const Mat3& rotation,
                        const Vec3& center);

}  // namespace fdbem
