#include "fdbem/directions.hpp"

#include <algorithm>
#include <cmath>

namespace fdbem {
namespace {

// In-face coordinate axes for the face normal to `axis`.
constexpr int kFaceAxes[3][2] = {{1, 2}, {0, 2}, {0, 1}};

Vec3 face_point(int face, double u, double v) {
  const int axis = face / 2;
  Vec3 p;
  p[axis] = (face % 2 == 0) ? 1.0 : -1.0;
  p[kFaceAxes[axis][0]] = u;
  p[kFaceAxes[axis][1]] = v;
  return p;
}

int square_of(double u, int side) {
  const int i = static_cast<int>(std::ceil(0.5 * (u + 1.0) * side)) - 1;
  return std::clamp(i, 0, side - 1);
}

}  // namespace

DirectionSet::DirectionSet(int j) : j_(j) {
  if (j < 0 || j > 12) throw Error("direction level out of range");
  const int n = side();
  directions_.reserve(size());
  for (int f = 0; f < 6; ++f) {
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) {
        const double u0 = -1.0 + 2.0 * r / n, u1 = -1.0 + 2.0 * (r + 1) / n;
        const double v0 = -1.0 + 2.0 * c / n, v1 = -1.0 + 2.0 * (c + 1) / n;
        const Vec3 d = face_point(f, 0.5 * (u0 + u1), 0.5 * (v0 + v1)).normalized();
        directions_.push_back(d);
        for (double u : {u0, u1}) {
          for (double v : {v0, v1}) {
            const double cosang = std::clamp(d.dot(face_point(f, u, v).normalized()), -1.0, 1.0);
            angular_radius_ = std::max(angular_radius_, std::acos(cosang));
          }
        }
      }
    }
  }
}

int DirectionSet::wedge_of(const Vec3& v) const {
  const Vec3 a = v.cwiseAbs();
  int axis = 0;
  if (a[1] > a[axis]) axis = 1;
  if (a[2] > a[axis]) axis = 2;
  if (!(a[axis] > 0.0)) throw Error("wedge_of: zero vector");
  const int face = 2 * axis + (v[axis] < 0.0 ? 1 : 0);
  const double u = v[kFaceAxes[axis][0]] / a[axis];
  const double w = v[kFaceAxes[axis][1]] / a[axis];
  const int n = side();
  return face * n * n + square_of(u, n) * n + square_of(w, n);
}

int DirectionSet::antipode(int id) const {
  const int n = side();
  const int face = id / (n * n), r = (id / n) % n, c = id % n;
  return (face ^ 1) * n * n + (n - 1 - r) * n + (n - 1 - c);
}

int DirectionSet::coarser(int id) const {
  if (j_ < 1) throw Error("coarser: no coarser direction level");
  const int n = side(), m = n / 2;
  const int face = id / (n * n), r = (id / n) % n, c = id % n;
  return face * m * m + (r / 2) * m + (c / 2);
}

int direction_level(double width, const WaveContext& ctx) {
  if (ctx.is_static() || width < ctx.wavelength()) {
    throw Error("direction sets exist only for widths >= one wavelength");
  }
  // Small slack so a root cube enlarged by round-off does not jump a level.
  const double l = std::log2(width / ctx.wavelength()) - 1e-3;
  return std::max(0, static_cast<int>(std::ceil(l)));
}

DirectionSet make_direction_set(double width, const WaveContext& ctx) {
  return DirectionSet(direction_level(width, ctx));
}

int direction_index(const DirectionSet& set, const Vec3& center, const Vec3& target) {
  const Vec3 d = target - center;
  if (!(d.squaredNorm() > 0.0)) throw Error("direction_index: coincident centers");
  return set.wedge_of(d);
}

}  // namespace fdbem
