#pragma once

#include <cmath>
#include <string_view>

#include "fdbem/types.hpp"

namespace fdbem {

// Wavenumber together with the Burton-Miller coupling alpha = i/k. k = 0 is
// accepted for static-limit kernel evaluations; alpha() is unavailable then.
class WaveContext {
 public:
  explicit WaveContext(double k) : k_(k) {
    if (!(k >= 0.0) || !std::isfinite(k)) throw Error("wavenumber must be finite and >= 0");
  }

  double k() const { return k_; }
  double wavelength() const { return 2.0 * kPi / k_; }
  bool is_static() const { return k_ == 0.0; }

  Complex alpha() const {
    if (k_ == 0.0) throw Error("coupling alpha = i/k is undefined at k = 0");
    return Complex(0.0, 1.0 / k_);
  }

 private:
  double k_;
};

enum class KernelKind {
  Single,          // G
  DlpY,            // dG/dn_y
  DlpX,            // dG/dn_x
  Hyper,           // d2G/dn_x dn_y
  TargetCombined,  // G + alpha dG/dn_x
  NearLhs,         // dG/dn_y + alpha d2G/dn_x dn_y
  NearRhs,         // G + alpha dG/dn_x
};

std::string_view to_string(KernelKind kind);

// Whether the kernel needs alpha (and thus k > 0).
constexpr bool uses_alpha(KernelKind kind) {
  return kind == KernelKind::TargetCombined || kind == KernelKind::NearLhs ||
         kind == KernelKind::NearRhs;
}

namespace detail {

// Radial building blocks for d = x - y, r = |d|:
//   g  = e^{ikr} / (4 pi r)
//   g1 = G'(r) / r              = e^{ikr} (ikr - 1) / (4 pi r^3)
//   g2 = (G'' - G'/r) / r^2     = e^{ikr} (3 - 3ikr - k^2 r^2) / (4 pi r^5)
struct Radial {
  Complex g, g1, g2;
};

inline Radial radial(double r, double k, bool need_second) {
  const double inv4pir = 1.0 / (4.0 * kPi * r);
  const double kr = k * r;
  const Complex e(std::cos(kr), std::sin(kr));
  Radial out;
  out.g = e * inv4pir;
  const double inv_r2 = 1.0 / (r * r);
  out.g1 = out.g * Complex(-1.0, kr) * inv_r2;
  if (need_second) out.g2 = out.g * Complex(3.0 - kr * kr, -3.0 * kr) * (inv_r2 * inv_r2);
  return out;
}


constexpr bool needs_second(KernelKind kind) {
  return kind == KernelKind::Hyper || kind == KernelKind::NearLhs;
}

// Kernel value from precomputed radial terms; alpha is ignored by kinds that
// do not use it.
inline Complex combine(KernelKind kind, const Vec3& d, const Radial& rad, const Vec3& n_x,
                       const Vec3& n_y, Complex alpha) {
  auto dlp_y = [&] { return -rad.g1 * d.dot(n_y); };
  auto dlp_x = [&] { return rad.g1 * d.dot(n_x); };
  auto hyper = [&] { return -(rad.g2 * (d.dot(n_x) * d.dot(n_y)) + rad.g1 * n_x.dot(n_y)); };
  switch (kind) {
    case KernelKind::Single: return rad.g;
    case KernelKind::DlpY: return dlp_y();
    case KernelKind::DlpX: return dlp_x();
    case KernelKind::Hyper: return hyper();
    case KernelKind::TargetCombined:
    case KernelKind::NearRhs: return rad.g + alpha * dlp_x();
    case KernelKind::NearLhs: return dlp_y() + alpha * hyper();
  }
  return {};
}

}  // namespace detail

// Closed-form kernel value. Throws Error when x == y; singular cases must be
// routed to the self-term integrals instead.
inline Complex eval_kernel(KernelKind kind, const Vec3& x, const Vec3& y, const Vec3& n_x,
                           const Vec3& n_y, const WaveContext& ctx) {
  const Vec3 d = x - y;
  const double r = d.norm();
  if (!(r > 0.0)) throw Error("kernel evaluated at coincident points");
  const Complex alpha = uses_alpha(kind) ? ctx.alpha() : Complex{};
  const auto rad = detail::radial(r, ctx.k(), detail::needs_second(kind));
  return detail::combine(kind, d, rad, n_x, n_y, alpha);
}

}  // namespace fdbem
