#pragma once

#include "matroid_er/linear.hpp"

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace matroid_er {

using Line3 = Point3;  // line coefficients (a, b, c): a x + b y + c z = 0
using IntPoint = std::array<Integer, 3>;

inline Point3 make_point(const Rational& x, const Rational& y, const Rational& z) { return {x, y, z}; }
inline Point3 make_point(long x, long y, long z) { return {Rational(x), Rational(y), Rational(z)}; }

inline Point3 cross(const Point3& p, const Point3& q) {
  return {p[1] * q[2] - p[2] * q[1], p[2] * q[0] - p[0] * q[2], p[0] * q[1] - p[1] * q[0]};
}
inline Rational dot(const Point3& p, const Point3& q) { return p[0] * q[0] + p[1] * q[1] + p[2] * q[2]; }

inline Line3 line_through(const Point3& p, const Point3& q) {
  Line3 l = cross(p, q);
  if (is_zero(l)) throw std::domain_error("line through coincident points");
  return l;
}

inline Point3 intersect(const Line3& l, const Line3& m) {
  Point3 p = cross(l, m);
  if (is_zero(p)) throw std::domain_error("intersection of identical lines");
  return p;
}

inline bool on_line(const Point3& p, const Line3& l) { return dot(p, l) == 0; }
inline bool collinear(const Point3& p, const Point3& q, const Point3& r) { return det3(p, q, r) == 0; }

/// Primitive integer representative: denominators cleared, gcd removed, first
/// nonzero coordinate positive. Two points are equal projectively iff their
/// primitive forms are equal.
inline IntPoint primitive(const Point3& p) {
  if (is_zero(p)) throw std::domain_error("zero vector is not a projective point");
  Integer l = 1;
  for (const auto& c : p) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
  IntPoint v;
  for (int i = 0; i < 3; ++i) v[i] = p[i].get_num() * (l / p[i].get_den());
  Integer g = 0;
  for (const auto& c : v) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  for (auto& c : v) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
  for (const auto& c : v) {
    if (c == 0) continue;
    if (c < 0)
      for (auto& d : v) d = -d;
    break;
  }
  return v;
}

inline Point3 to_point(const IntPoint& v) { return {Rational(v[0]), Rational(v[1]), Rational(v[2])}; }

/// Affine form with z = 1 for finite points; points at infinity unchanged.
inline Point3 normalized(const Point3& p) {
  if (p[2] == 0) return to_point(primitive(p));
  return {p[0] / p[2], p[1] / p[2], Rational(1)};
}

namespace detail {

/// Solves p = s*u + t*v for collinear p, u, v (u, v independent).
inline std::pair<Rational, Rational> line_coordinates(const Point3& p, const Point3& u, const Point3& v) {
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      Rational det = u[i] * v[j] - u[j] * v[i];
      if (det == 0) continue;
      Rational s = (p[i] * v[j] - p[j] * v[i]) / det;
      Rational t = (u[i] * p[j] - u[j] * p[i]) / det;
      return {s, t};
    }
  throw std::domain_error("frame points are not independent");
}

}  // namespace detail

/// Projective coordinate system on a line given by three distinct collinear
/// points playing the roles of 0, 1 and infinity. The value of a point is the
/// cross-ratio (x, 1; 0, inf).
class LineFrame {
 public:
  LineFrame(const Point3& zero, const Point3& one, const Point3& inf) {
    if (!collinear(zero, one, inf)) throw std::domain_error("frame points are not collinear");
    if (proportional(zero, inf) || proportional(zero, one) || proportional(one, inf))
      throw std::domain_error("frame points are not distinct");
    auto [a, b] = detail::line_coordinates(one, zero, inf);
    for (int i = 0; i < 3; ++i) {
      z_[i] = a * zero[i];
      i_[i] = b * inf[i];
    }
  }

  Point3 point_at(const Rational& v) const { return {z_[0] + v * i_[0], z_[1] + v * i_[1], z_[2] + v * i_[2]}; }
  Point3 infinity() const { return i_; }
  Point3 zero() const { return z_; }
  Line3 line() const { return cross(z_, i_); }

  /// Value of a point on the line; nullopt for the infinity point.
  std::optional<Rational> value_of(const Point3& p) const {
    if (!on_line(p, line())) throw std::domain_error("point is not on the frame line");
    auto [s, t] = detail::line_coordinates(p, z_, i_);
    if (s == 0) return std::nullopt;
    return t / s;
  }

 private:
  Point3 z_, i_;
};

/// 3x3 rational matrix acting on column vectors.
struct ProjectiveTransform {
  std::array<Point3, 3> rows;

  Point3 apply(const Point3& p) const { return {dot(rows[0], p), dot(rows[1], p), dot(rows[2], p)}; }
  Rational determinant() const { return det3(rows[0], rows[1], rows[2]); }
};

/// Transform whose third row is l, so l maps to z = 0. The line is oriented
/// so that `reference` (if not on l) lands at positive z, and the first two
/// rows are chosen to make the determinant positive.
inline ProjectiveTransform line_to_infinity_transform(Line3 l, const std::optional<Point3>& reference = {}) {
  if (is_zero(l)) throw std::domain_error("degenerate line");
  if (reference && dot(l, *reference) < 0)
    for (auto& c : l) c = -c;
  const Point3 e[3] = {make_point(1, 0, 0), make_point(0, 1, 0), make_point(0, 0, 1)};
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      Rational d = det3(e[i], e[j], l);
      if (d == 0) continue;
      ProjectiveTransform t{{e[i], e[j], l}};
      if (d < 0) std::swap(t.rows[0], t.rows[1]);
      return t;
    }
  throw std::domain_error("degenerate line");
}

}  // namespace matroid_er
