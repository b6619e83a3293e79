#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

#include "centered_bound/errors.hpp"

namespace centered_bound {

/// A positive hyperbolic length carried as S = sinh(len/2).
///
/// Every closed form used by this library (triangle area, semicyclic radius,
/// semicyclic area) is algebraic in sinh and cosh of half-lengths, so lengths
/// are kept in this parametrization throughout and converted only at the
/// program boundary.
class HalfSinhLength {
public:
  explicit HalfSinhLength(double sinh_half) : s_(sinh_half) {
    if (!(std::isfinite(s_) && s_ > 0.0))
      throw std::invalid_argument("HalfSinhLength: sinh(len/2) must be positive, got " +
                                  std::to_string(sinh_half));
  }

  static HalfSinhLength from_length(double len) { return HalfSinhLength(std::sinh(0.5 * len)); }

  double sinh_half() const { return s_; }
  double cosh_half() const { return std::sqrt(1.0 + s_ * s_); }
  double tanh_half() const { return s_ / std::sqrt(1.0 + s_ * s_); }
  double length() const { return 2.0 * std::asinh(s_); }

  friend bool operator==(HalfSinhLength a, HalfSinhLength b) { return a.s_ == b.s_; }
  friend bool operator<(HalfSinhLength a, HalfSinhLength b) { return a.s_ < b.s_; }
  friend bool operator>(HalfSinhLength a, HalfSinhLength b) { return a.s_ > b.s_; }

private:
  double s_;
};

// Raw kernels on sinh-half values. The search loop runs on these directly;
// the typed functions below delegate here so both paths agree bitwise.
namespace detail {

// acos with a roundoff clamp: arguments within 1e-9 outside [-1,1] are pulled
// back (degenerate but legitimate geometry); anything farther is a real
// domain violation and is reported with the offending triple.
inline double checked_acos(double x, double sa, double sb, double sc) {
  constexpr double kClamp = 1e-9;
  if (x > 1.0 || x < -1.0) {
    if (x > 1.0 + kClamp || x < -1.0 - kClamp) {
      char buf[160];
      std::snprintf(buf, sizeof buf,
                    "no hyperbolic triangle with sinh-half sides (%.15g, %.15g, %.15g): "
                    "cos(area/2) = %.15g",
                    sa, sb, sc, x);
      throw DomainError(buf);
    }
    x = std::clamp(x, -1.0, 1.0);
  }
  return std::acos(x);
}

// Hyperbolic Heron. Inputs are sorted first so the result is bitwise
// identical under all argument orders; the symmetry-reduced search relies on
// that to treat equivalent assignments as exact ties.
inline double triangle_area_s(double sa, double sb, double sc) {
  double s[3] = {sa, sb, sc};
  std::sort(s, s + 3);
  const double num = s[0] * s[0] + s[1] * s[1] + s[2] * s[2] + 2.0;
  const double den = 2.0 * std::sqrt(1.0 + s[0] * s[0]) * std::sqrt(1.0 + s[1] * s[1]) *
                     std::sqrt(1.0 + s[2] * s[2]);
  return 2.0 * checked_acos(num / den, s[0], s[1], s[2]);
}

inline double semicyclic_radius_s(double sa, double sb) { return std::sqrt(sa * sa + sb * sb); }

inline double semicyclic_area_s(double sa, double sb) {
  return 2.0 * std::asin((sa / std::sqrt(1.0 + sa * sa)) * (sb / std::sqrt(1.0 + sb * sb)));
}

}  // namespace detail

/// Area of the compact hyperbolic triangle with the given side lengths
/// (hyperbolic Heron formula), in radians:
///
///   2*acos( (sinh^2(a/2)+sinh^2(b/2)+sinh^2(c/2)+2) /
///           (2*cosh(a/2)*cosh(b/2)*cosh(c/2)) )
inline double triangle_area(HalfSinhLength a, HalfSinhLength b, HalfSinhLength c) {
  return detail::triangle_area_s(a.sinh_half(), b.sinh_half(), c.sinh_half());
}

/// Third side completing two given sides to a semicyclic triangle (one whose
/// longest side is a circumdiameter): sinh(r/2) = sqrt(sinh^2(a/2)+sinh^2(b/2)).
/// Strictly exceeds both inputs.
inline HalfSinhLength semicyclic_radius(HalfSinhLength a, HalfSinhLength b) {
  return HalfSinhLength(detail::semicyclic_radius_s(a.sinh_half(), b.sinh_half()));
}

/// Area of the semicyclic triangle with shorter sides a and b:
/// 2*asin(tanh(a/2)*tanh(b/2)). Equal to
/// triangle_area(a, b, semicyclic_radius(a, b)) but cheaper and exact on the
/// semicyclic locus.
inline double semicyclic_area(HalfSinhLength a, HalfSinhLength b) {
  return detail::semicyclic_area_s(a.sinh_half(), b.sinh_half());
}

/// Area of the semicyclic triangle with two equal shorter sides d,
/// 2*asin(tanh^2(d/2)); the per-cell floor used by the flat bound.
inline double semicyclic_area(HalfSinhLength d) { return semicyclic_area(d, d); }

}  // namespace centered_bound
