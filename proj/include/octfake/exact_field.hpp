#pragma once

// Exact arithmetic in the real quadratic field Q(sqrt 2).
//
// Every coordinate and squared length handled by the library lives here.
// Values are a + b*sqrt(2) with arbitrary-precision rational a, b, so the
// representation is unique and comparisons are decided without floating
// point.

#include <gmpxx.h>

#include <compare>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace octfake {

using Integer = mpz_class;
using Rational = mpq_class;

struct DivisionByZero : std::domain_error {
  using std::domain_error::domain_error;
};

struct NonPositiveModulus : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct FloatOverflow : std::overflow_error {
  using std::overflow_error::overflow_error;
};

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class QSqrt2 {
 public:
  QSqrt2() = default;
  QSqrt2(long value) : a_(value) {}  // NOLINT(google-explicit-constructor)
  QSqrt2(Rational a, Rational b = 0);

  static QSqrt2 sqrt2() { return QSqrt2(0, 1); }

  const Rational& a() const { return a_; }
  const Rational& b() const { return b_; }

  bool is_zero() const { return sgn(a_) == 0 && sgn(b_) == 0; }
  bool is_rational() const { return sgn(b_) == 0; }

  /// Exact sign of a + b*sqrt(2): -1, 0 or +1.
  int sign() const;

  QSqrt2 conjugate() const { return QSqrt2(a_, -b_); }
  /// Field norm a^2 - 2 b^2.
  Rational norm() const { return a_ * a_ - 2 * b_ * b_; }
  QSqrt2 abs() const { return sign() < 0 ? -*this : *this; }

  QSqrt2 operator-() const { return QSqrt2(-a_, -b_); }
  QSqrt2& operator+=(const QSqrt2& rhs);
  QSqrt2& operator-=(const QSqrt2& rhs);
  QSqrt2& operator*=(const QSqrt2& rhs);
  QSqrt2& operator/=(const QSqrt2& rhs);

  friend QSqrt2 operator+(QSqrt2 lhs, const QSqrt2& rhs) { return lhs += rhs; }
  friend QSqrt2 operator-(QSqrt2 lhs, const QSqrt2& rhs) { return lhs -= rhs; }
  friend QSqrt2 operator*(QSqrt2 lhs, const QSqrt2& rhs) { return lhs *= rhs; }
  friend QSqrt2 operator/(QSqrt2 lhs, const QSqrt2& rhs) { return lhs /= rhs; }

  friend bool operator==(const QSqrt2& lhs, const QSqrt2& rhs) {
    return lhs.a_ == rhs.a_ && lhs.b_ == rhs.b_;
  }
  friend std::strong_ordering operator<=>(const QSqrt2& lhs, const QSqrt2& rhs);

  /// Nearest double, within 2 ulp. Throws FloatOverflow outside double range.
  double to_double() const;

  /// Canonical text form, e.g. "2", "-1+√2", "1/2+1/2√2", "-√2".
  std::string to_string() const;
  /// Parses the canonical form produced by to_string (also accepts "sqrt2").
  static QSqrt2 parse(const std::string& text);

 private:
  Rational a_;
  Rational b_;
};

std::ostream& operator<<(std::ostream& os, const QSqrt2& x);

enum class ArithOp { Add, Sub, Mul, Div, Neg };

/// Field arithmetic by operation tag; Neg ignores y.
QSqrt2 qs_arith(ArithOp op, const QSqrt2& x, const QSqrt2& y);
int qs_sign(const QSqrt2& x);
/// Largest integer k with k*m <= x, for m > 0.
Integer qs_floor_div(const QSqrt2& x, const QSqrt2& m);
/// The representative r of x modulo m with 0 <= r < m.
QSqrt2 qs_mod(const QSqrt2& x, const QSqrt2& m);
double qs_to_float(const QSqrt2& x);

/// Parses a decimal rational "p" or "p/q"; q must be nonzero.
Rational parse_rational(const std::string& text);
std::string rational_to_string(const Rational& r);

// JSON form: {"a": ["num", "den"], "b": ["num", "den"]}.
void to_json(nlohmann::json& j, const QSqrt2& x);
void from_json(const nlohmann::json& j, QSqrt2& x);

}  // namespace octfake
