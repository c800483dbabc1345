#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "octfake/octagon.hpp"

using namespace octfake;

namespace {

const QSqrt2 r2 = QSqrt2::sqrt2();
const QSqrt2 L = 2 + r2;
const QSqrt2 T = 1 + r2;

FlatComplex square_torus() {
  FlatComplex c;
  c.faces.push_back({0, {{0, 0}, {1, 0}, {1, 1}, {0, 1}}});
  c.gluings = {{{0, 0}, {0, 2}}, {{0, 1}, {0, 3}}};
  return c;
}

// n + 1 reduced by a float floor and checked exactly.
QSqrt2 reduce(long v, const QSqrt2& m) {
  const long k = static_cast<long>(std::floor(static_cast<double>(v) / m.to_double()));
  QSqrt2 r = QSqrt2(v) - QSqrt2(k) * m;
  if (r < QSqrt2(0)) r += m;
  if (r >= m) r -= m;
  return r;
}

// Squared length of the segment from (x, 0) on the circle to the strip
// point (px, sqrt2/2), using the nearest copy of x.
QSqrt2 sq_to(const QSqrt2& x, const QSqrt2& px) {
  QSqrt2 best;
  bool first = true;
  for (long k = -1; k <= 1; ++k) {
    const QSqrt2 dx = x + QSqrt2(k) * L - px;
    const QSqrt2 d = dx * dx + QSqrt2(Rational(1, 2));
    if (first || d < best) best = d;
    first = false;
  }
  return best;
}

}  // namespace

TEST_CASE("normal form examples") {
  const NormalForm one = normal_form(1);
  CHECK(one.P == QSqrt2(2));
  CHECK(one.Pp == QSqrt2(1));
  const NormalForm zero = normal_form(0);
  CHECK(zero.P == QSqrt2(1));
  CHECK(zero.Pp == QSqrt2(0));
  const NormalForm three = normal_form(3);
  CHECK(three.P == 2 - r2);
  CHECK(three.Pp == 2 - r2);
  CHECK(three.P.to_double() == doctest::Approx(0.5857864376));
  for (long n = -200; n <= 200; n += 7) {
    CHECK(normal_form(n).P == reduce(n + 1, L));
    CHECK(normal_form(n).Pp == reduce(n, T));
  }
}

TEST_CASE("strip constants") {
  CHECK(StripGeometry::C() - StripGeometry::B() == Vec2{1, 0});
  CHECK(StripGeometry::circle() == L);
  CHECK(StripGeometry::top() == T);
}

TEST_CASE("built complexes round-trip through extraction") {
  const PeriodModule ref = absolute_period_module(octagon0());
  for (long n = -10; n <= 10; ++n) {
    CAPTURE(n);
    const FlatComplex c = build_complex(normal_form(n));
    REQUIRE(validate(c).ok());
    const NormalForm nf = normal_form(n);
    CHECK(extract_normal_form(c) == StripPositions{nf.P, nf.Pp});
    int cones = 0;
    for (const VertexClass& v : vertex_classes(c)) {
      if (v.order > 0) {
        ++cones;
        CHECK(v.order == 2);
      }
    }
    CHECK(cones == 1);
    if (n >= -3 && n <= 3) CHECK(absolute_period_module(c) == ref);
  }
  CHECK(extract_normal_form(octagon0()) == StripPositions{1, 0});
  CHECK(systole(build_complex(normal_form(0))).sq_length == QSqrt2(1));
}

TEST_CASE("extraction rejects other surfaces") {
  CHECK_THROWS_AS(extract_normal_form(square_torus()), NotInOctFamily);
}

TEST_CASE("build rejects positions off the circle") {
  CHECK_THROWS_AS(build_complex(StripPositions{L, 0}), DegenerateConfiguration);
  CHECK_THROWS_AS(build_complex(StripPositions{1, T}), DegenerateConfiguration);
  CHECK_THROWS_AS(build_complex(StripPositions{-1, 0}), DegenerateConfiguration);
}

TEST_CASE("left and right iterates") {
  CHECK(extract_normal_form(left_surgery(left_iterate(-1))) == StripPositions{1, 0});
  const Systole s = systole(left_iterate(2));
  CHECK(s.sq_length == 2 - r2);
  CHECK(s.connections.size() == 2);
  for (long n = -6; n <= 6; ++n) {
    const NormalForm nf = normal_form(n);
    CHECK(extract_normal_form(left_iterate(n)) == StripPositions{nf.P, nf.Pp});
  }
}

TEST_CASE("every iterate has one unit and two long horizontal saddle connections") {
  const QSqrt2 long_sq = 3 + 2 * r2;
  for (const FlatComplex& c : iterate_sequence(5)) {
    const Topology t(c);
    int unit = 0, longer = 0;
    for (const SaddleConnection& sc : saddle_connections_up_to(t, long_sq)) {
      if (!sc.direction().y.is_zero()) continue;
      CHECK(sc.closed);
      if (sc.sq_length() == QSqrt2(1)) ++unit;
      if (sc.sq_length() == long_sq) ++longer;
    }
    CHECK(unit == 1);
    CHECK(longer == 2);
    // The angle at the cone point from the start of the unit connection to
    // its end is 3 pi.
    const SaddleConnection g = unit_horizontal(t);
    CHECK(half_turns(t, g.start(), g.end(), Sense::Cw) == 3);
  }
}

TEST_CASE("closed-form systole examples") {
  const SystoleReport one = systole_closed_form(1);
  CHECK(one.family == 1);
  CHECK(one.sq_len == 2 - r2);
  CHECK(one.count == 1);
  CHECK(one.endpoints == std::vector<std::string>{"P_n-B"});
  const SystoleReport two = systole_closed_form(2);
  CHECK(two.family == 2);
  CHECK(two.sq_len == 2 - r2);
  CHECK(two.count == 2);
  const SystoleReport three = systole_closed_form(3);
  CHECK(three.family == 3);
  CHECK(three.sq_len == 2 - r2);
  const SystoleReport zero = systole_closed_form(0);
  CHECK(zero.family == 0);
  CHECK(zero.sq_len == QSqrt2(1));
  CHECK(zero.count == 4);
}

TEST_CASE("closed form agrees with distances to B and C") {
  const QSqrt2 Bx = StripGeometry::B().x;
  const QSqrt2 Cx = StripGeometry::C().x;
  for (long n = -80; n <= 80; ++n) {
    if (n == 0) continue;
    const QSqrt2 P = normal_form(n).P;
    const QSqrt2 prev = reduce(n, L);
    // Shortest of the four candidate segments P_n-B, P_n-C, P_{n-1}-B, P_{n-1}-C.
    QSqrt2 best = sq_to(P, Bx);
    for (const QSqrt2& d : {sq_to(P, Cx), sq_to(prev, Bx), sq_to(prev, Cx)}) {
      if (d < best) best = d;
    }
    const SystoleReport r = systole_closed_form(n);
    CAPTURE(n);
    CHECK(r.sq_len == best);
    CHECK((r.count == 2) == (r.family == 2));
  }
}

TEST_CASE("geometric systoles match the closed form") {
  for (long n = -8; n <= 8; ++n) {
    if (n == 0) continue;
    const SystoleReport a = systole_closed_form(n);
    const SystoleReport b = systole_geometric(n);
    CAPTURE(n);
    CHECK(a.sq_len == b.sq_len);
    CHECK(a.count == b.count);
    CHECK(a.endpoints == b.endpoints);
  }
}

TEST_CASE("parallelogram identity") {
  const QSqrt2 Bx = StripGeometry::B().x;
  const QSqrt2 Cx = StripGeometry::C().x;
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<long> d(-500, 500);
  for (int i = 0; i < 200; ++i) {
    const QSqrt2 P(Rational(d(rng), 37), Rational(d(rng), 41));
    CHECK((P - 1 - Bx) * (P - 1 - Bx) == (P - Cx) * (P - Cx));
  }
}

TEST_CASE("positions are pairwise distinct") {
  std::set<std::pair<std::string, std::string>> seen;
  for (long n = -50; n <= 50; ++n) {
    const NormalForm nf = normal_form(n);
    CHECK(seen.insert({nf.P.to_string(), nf.Pp.to_string()}).second);
  }
}

TEST_CASE("partner sets") {
  SUBCASE("n = 1 reduces to x = sqrt2") {
    const auto [rep, x] = family_one_representative(1);
    CHECK(rep == -3);
    CHECK(x == r2);
    CHECK(same_systole_partners(1) == std::set<long>{-3, -2, -1, 1, 2, 3});
  }
  SUBCASE("both shapes occur and agree with brute force") {
    bool six = false, two = false;
    const QSqrt2 mid = (1 + r2) / 2;
    for (long n = 1; n <= 30; ++n) {
      const auto [rep, x] = family_one_representative(n);
      CHECK(x > QSqrt2(1));
      CHECK(x < 1 + r2 / 2);
      const std::set<long> s = same_systole_partners(n);
      CHECK(s.count(n) == 1);
      CHECK(s == brute_force_partners(n, 100));
      if (x > mid) {
        six = true;
        CHECK(s == std::set<long>{rep, -rep, rep + 1, -rep - 1, rep + 2, -rep - 2});
      } else {
        two = true;
        CHECK(s == std::set<long>{rep, -rep});
      }
    }
    CHECK(six);
    CHECK(two);
  }
}

TEST_CASE("density search") {
  CHECK(density_relation_holds());
  for (long m : {0L, 1L, 5L}) {
    const Approximation a = approximate(m, 0.01, 100000);
    CHECK(a.reached);
    CHECK(a.n != m);
    CHECK(a.dist < 0.01);
    // Recompute the distances exactly from the normal forms.
    const NormalForm fm = normal_form(m), fn = normal_form(a.n);
    CHECK(a.dist_P == circle_distance(fn.P, fm.P, L));
    CHECK(a.dist_Pp == circle_distance(fn.Pp, fm.Pp, T));
    CHECK(a.dist_P < QSqrt2(Rational(1, 100)));
    CHECK(a.dist_Pp < QSqrt2(Rational(1, 100)));
  }
  const Approximation z = approximate(0, 0.05, 200);
  CHECK(z.reached);
  CHECK(z.dist < 0.05);
  const Approximation wide = approximate(5, 3.5, 10);
  CHECK(wide.reached);
  CHECK(std::labs(wide.n - 5) == 1);
  const Approximation miss = approximate(0, 1e-9, 5);
  CHECK_FALSE(miss.reached);
  CHECK_THROWS_AS(approximate(0, 0, 5), std::invalid_argument);
}

TEST_CASE("fake octagon reports") {
  const FakeReport oct = verify_fake(octagon0());
  CHECK(oct.invariants_pass());
  CHECK_FALSE(oct.is_fake());
  const FakeReport one = verify_fake(left_iterate(1));
  CHECK(one.invariants_pass());
  CHECK(one.is_fake());
  CHECK(verify_fake(build_complex(normal_form(7))).is_fake());
  const FakeReport torus = verify_fake(square_torus());
  CHECK_FALSE(torus.invariants_pass());
  CHECK_FALSE(torus.normal_form.has_value());
}

TEST_CASE("table and rendering") {
  std::vector<TableRow> rows;
  for (long n = -2; n <= 3; ++n) rows.push_back(table_row(n));
  const std::string csv = table_csv(rows);
  CHECK(csv.find("2-√2") != std::string::npos);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);
  const std::string text = table_text(rows);
  CHECK(text.find("0.585786437627") != std::string::npos);

  const std::string svg = render_svg(build_complex(normal_form(2)));
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("stroke-dasharray") != std::string::npos);
  CHECK(svg.find(">P<") != std::string::npos);
  CHECK(render_svg(octagon0()) == render_svg(octagon0()));
}
