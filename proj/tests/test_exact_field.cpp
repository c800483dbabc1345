#include <doctest.h>

#include <cmath>
#include <random>

#include "octfake/exact_field.hpp"

using namespace octfake;

namespace {

const QSqrt2 r2 = QSqrt2::sqrt2();

QSqrt2 random_value(std::mt19937_64& rng) {
  std::uniform_int_distribution<long> num(-60, 60);
  std::uniform_int_distribution<long> den(1, 12);
  return QSqrt2(Rational(num(rng), den(rng)), Rational(num(rng), den(rng)));
}

// Sign evaluated with 400-bit floats; the test values are far from zero
// at that precision unless they are exactly zero.
int sign_by_float(const QSqrt2& x) {
  mpf_class s(2, 400);
  s = sqrt(s);
  mpf_class v(x.a(), 400);
  v += mpf_class(x.b(), 400) * s;
  return sgn(v);
}

}  // namespace

TEST_CASE("arithmetic examples") {
  CHECK(qs_arith(ArithOp::Add, 1 + r2, 1) == 2 + r2);
  CHECK(qs_arith(ArithOp::Mul, r2, r2) == QSqrt2(2));
  const QSqrt2 q = qs_arith(ArithOp::Div, 1, 1 + r2);
  CHECK(q == -1 + r2);
  CHECK(q.to_double() == doctest::Approx(std::sqrt(2.0) - 1).epsilon(1e-15));
  CHECK(qs_arith(ArithOp::Neg, 3 - r2, 0) == -3 + r2);
  CHECK_THROWS_AS(qs_arith(ArithOp::Div, 1, 0), DivisionByZero);
}

TEST_CASE("components stay reduced") {
  const QSqrt2 x(Rational(6, 4), Rational(-10, 15));
  CHECK(x.a().get_num() == 3);
  CHECK(x.a().get_den() == 2);
  CHECK(x.b().get_num() == -2);
  CHECK(x.b().get_den() == 3);
}

TEST_CASE("sign examples") {
  CHECK(qs_sign(2 - r2) == 1);
  CHECK(qs_sign(0) == 0);
  CHECK(qs_sign(1 - r2) == -1);
  // 99/70 is a convergent of sqrt2 from above; 41/29 from below.
  CHECK(qs_sign(QSqrt2(Rational(99, 70)) - r2) == 1);
  CHECK(qs_sign(QSqrt2(Rational(41, 29)) - r2) == -1);
}

TEST_CASE("sign agrees with high precision evaluation") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 2000; ++i) {
    const QSqrt2 x = random_value(rng);
    CHECK(qs_sign(x) == sign_by_float(x));
    if (std::abs(x.to_double()) > 1e-9) CHECK(qs_sign(x) == (x.to_double() > 0 ? 1 : -1));
  }
}

TEST_CASE("field axioms on random triples") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 300; ++i) {
    const QSqrt2 x = random_value(rng), y = random_value(rng), z = random_value(rng);
    CHECK((x + y) + z == x + (y + z));
    CHECK((x * y) * z == x * (y * z));
    CHECK(x * (y + z) == x * y + x * z);
    CHECK(x - x == QSqrt2(0));
    if (!x.is_zero()) CHECK(x * (1 / x) == QSqrt2(1));
    CHECK(x * x.conjugate() == QSqrt2(x.norm()));
  }
}

TEST_CASE("mod examples") {
  CHECK(qs_mod(2, 2 + r2) == QSqrt2(2));
  CHECK(qs_mod(4, 2 + r2) == 2 - r2);
  CHECK(qs_mod(2 + r2, 2 + r2) == QSqrt2(0));
  CHECK(qs_mod(-1, 2 + r2) == 1 + r2);
  CHECK_THROWS_AS(qs_mod(1, 0), NonPositiveModulus);
  CHECK_THROWS_AS(qs_mod(1, 1 - r2), NonPositiveModulus);
}

TEST_CASE("mod against a float floor") {
  const QSqrt2 m = 2 + r2;
  const long double md = 2.0L + std::sqrt(2.0L);
  for (long x = -5000; x <= 5000; x += 37) {
    const QSqrt2 r = qs_mod(x, m);
    CHECK(r >= QSqrt2(0));
    CHECK(r < m);
    const QSqrt2 k = (QSqrt2(x) - r) / m;
    CHECK(k.is_rational());
    CHECK(k.a().get_den() == 1);
    CHECK(k.a() == static_cast<long>(std::floor(x / md)));
  }
}

TEST_CASE("mod with large coefficients") {
  const QSqrt2 x = QSqrt2(Rational(mpz_class("123456789012345678901234567890")), Rational(-987654321));
  const QSqrt2 m = 1 + r2;
  const QSqrt2 r = qs_mod(x, m);
  CHECK(r >= QSqrt2(0));
  CHECK(r < m);
  const QSqrt2 k = (x - r) / m;
  CHECK(k.is_rational());
  CHECK(k.a().get_den() == 1);
}

TEST_CASE("float conversion") {
  CHECK(qs_to_float(2 + r2) == doctest::Approx(3.41421356237));
  CHECK(qs_to_float(0) == 0.0);
  CHECK(qs_to_float(2 - r2) == doctest::Approx(0.58578643762));
  const QSqrt2 huge(Rational(mpz_class(1) << 1100));
  CHECK_THROWS_AS(qs_to_float(huge), FloatOverflow);
}

TEST_CASE("text and json round trip") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    const QSqrt2 x = random_value(rng);
    CHECK(QSqrt2::parse(x.to_string()) == x);
    const nlohmann::json j = x;
    CHECK(j.get<QSqrt2>() == x);
  }
  CHECK((-1 + r2).to_string() == "-1+√2");
  CHECK(QSqrt2::parse("1/2+1/2sqrt2") == QSqrt2(Rational(1, 2), Rational(1, 2)));
  const nlohmann::json j = QSqrt2(Rational(-3, 4), 2);
  CHECK(j.dump() == R"({"a":["-3","4"],"b":["2","1"]})");
  CHECK_THROWS_AS(QSqrt2::parse("1+"), ParseError);
  CHECK_THROWS_AS(nlohmann::json::parse(R"({"a":["1","0"],"b":["0","1"]})").get<QSqrt2>(), ParseError);
}
