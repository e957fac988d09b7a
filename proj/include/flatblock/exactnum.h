#pragma once

// Exact arithmetic in Q and in real quadratic fields Q(sqrt d).
//
// A Scalar is a + b*sqrt(d) with rational a, b and a square-free d >= 1,
// always read under the embedding sqrt(d) > 0. d == 1 is the pure rational
// mode and then b == 0. Scalars from different fields only mix when one of
// them is rational.

#include <gmpxx.h>

#include <compare>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "flatblock/error.h"

namespace flatblock {

using Rational = mpq_class;
using BigInt = mpz_class;

/// Parses "p", "-p/q" into a reduced rational. Rejects decimal points.
Rational parse_rational(std::string_view text);
std::string format_rational(const Rational& q);

/// True when d > 1 has no square factor.
bool is_square_free(long d);

class Scalar {
 public:
  Scalar() : a_(0), b_(0), d_(1) {}
  Scalar(long v) : a_(v), b_(0), d_(1) {}  // NOLINT(google-explicit-constructor)
  Scalar(const Rational& a) : a_(a), b_(0), d_(1) { a_.canonicalize(); }  // NOLINT
  Scalar(const Rational& a, const Rational& b, long d);

  static Scalar sqrt_of(long d);
  static Scalar ratio(long num, long den);

  const Rational& rational_part() const { return a_; }
  const Rational& sqrt_part() const { return b_; }
  long field() const { return d_; }
  bool is_rational() const { return sgn(b_) == 0; }
  bool is_zero() const { return sgn(a_) == 0 && sgn(b_) == 0; }

  /// Exact sign of the real number a + b*sqrt(d).
  int sign() const;

  Scalar operator-() const;
  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  Scalar& operator/=(const Scalar& o);

  friend Scalar operator+(Scalar l, const Scalar& r) { return l += r; }
  friend Scalar operator-(Scalar l, const Scalar& r) { return l -= r; }
  friend Scalar operator*(Scalar l, const Scalar& r) { return l *= r; }
  friend Scalar operator/(Scalar l, const Scalar& r) { return l /= r; }

  Scalar conjugate() const;
  /// a^2 - d b^2, the field norm.
  Rational norm() const;
  Scalar inverse() const;

  friend bool operator==(const Scalar& l, const Scalar& r);
  friend std::strong_ordering operator<=>(const Scalar& l, const Scalar& r);

  double to_double() const;
  /// Largest integer not exceeding the value.
  BigInt floor() const;
  /// Square root inside the same field when one exists.
  std::optional<Scalar> exact_sqrt() const;

  /// Canonical text form: "0", "1/2", "3*sqrt(2)", "1/2+1/2*sqrt(5)".
  std::string str() const;
  static Scalar parse(std::string_view text);

 private:
  friend long merge_fields(const Scalar& l, const Scalar& r);

  Rational a_;
  Rational b_;
  long d_;
};

/// Common field of two scalars; throws FieldMismatch when incompatible.
long merge_fields(const Scalar& l, const Scalar& r);

std::ostream& operator<<(std::ostream& os, const Scalar& s);

inline int sign(const Scalar& s) { return s.sign(); }
inline Scalar abs(const Scalar& s) { return s.sign() < 0 ? -s : s; }

struct Vec2 {
  Scalar x;
  Scalar y;

  Vec2() = default;
  Vec2(Scalar x_, Scalar y_) : x(std::move(x_)), y(std::move(y_)) {}

  Vec2 operator-() const { return {-x, -y}; }
  Vec2& operator+=(const Vec2& o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  Vec2& operator-=(const Vec2& o) {
    x -= o.x;
    y -= o.y;
    return *this;
  }
  friend Vec2 operator+(Vec2 l, const Vec2& r) { return l += r; }
  friend Vec2 operator-(Vec2 l, const Vec2& r) { return l -= r; }
  friend Vec2 operator*(const Scalar& s, const Vec2& v) { return {s * v.x, s * v.y}; }
  friend Vec2 operator*(const Vec2& v, const Scalar& s) { return {s * v.x, s * v.y}; }
  friend Vec2 operator/(const Vec2& v, const Scalar& s) { return {v.x / s, v.y / s}; }

  bool is_zero() const { return x.is_zero() && y.is_zero(); }

  friend bool operator==(const Vec2& l, const Vec2& r) = default;
  /// Lexicographic (x, then y) numeric order.
  friend std::strong_ordering operator<=>(const Vec2& l, const Vec2& r) {
    if (auto c = l.x <=> r.x; c != 0) return c;
    return l.y <=> r.y;
  }

  std::string str() const;
};

inline bool all_rational(const Vec2& u, const Vec2& v) {
  return u.x.is_rational() && u.y.is_rational() && v.x.is_rational() && v.y.is_rational();
}
inline Scalar cross(const Vec2& u, const Vec2& v) {
  if (all_rational(u, v))
    return Scalar(Rational(u.x.rational_part() * v.y.rational_part() - u.y.rational_part() * v.x.rational_part()));
  return u.x * v.y - u.y * v.x;
}
inline Scalar dot(const Vec2& u, const Vec2& v) {
  if (all_rational(u, v))
    return Scalar(Rational(u.x.rational_part() * v.x.rational_part() + u.y.rational_part() * v.y.rational_part()));
  return u.x * v.x + u.y * v.y;
}
inline Scalar norm_sq(const Vec2& u) { return dot(u, u); }

/// Same ray: parallel and pointing the same way. Zero vectors never match.
bool same_direction(const Vec2& u, const Vec2& v);

/// Parses "(x,y)" with Scalar components.
Vec2 parse_vec2(std::string_view text);

std::ostream& operator<<(std::ostream& os, const Vec2& v);

/// 2x2 matrix [[a, b], [c, d]] acting on column vectors.
struct Mat2 {
  Scalar a, b, c, d;

  static Mat2 identity() { return {1, 0, 0, 1}; }
  Scalar det() const { return a * d - b * c; }
  Vec2 operator*(const Vec2& v) const { return {a * v.x + b * v.y, c * v.x + d * v.y}; }
  Mat2 operator*(const Mat2& m) const {
    return {a * m.a + b * m.c, a * m.b + b * m.d, c * m.a + d * m.c, c * m.b + d * m.d};
  }
  friend bool operator==(const Mat2& l, const Mat2& r) = default;
  friend std::strong_ordering operator<=>(const Mat2& l, const Mat2& r) {
    if (auto c = l.a <=> r.a; c != 0) return c;
    if (auto c = l.b <=> r.b; c != 0) return c;
    if (auto c = l.c <=> r.c; c != 0) return c;
    return l.d <=> r.d;
  }
  std::string str() const;
};

/// Parses "[[a,b],[c,d]]".
Mat2 parse_mat2(std::string_view text);

}  // namespace flatblock
