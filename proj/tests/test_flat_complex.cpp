#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "octfake/flat_complex.hpp"
#include "octfake/octagon.hpp"

using namespace octfake;

namespace {

const QSqrt2 r2 = QSqrt2::sqrt2();

FlatComplex square_torus() {
  FlatComplex c;
  c.faces.push_back({0, {{0, 0}, {1, 0}, {1, 1}, {0, 1}}});
  c.gluings = {{{0, 0}, {0, 2}}, {{0, 1}, {0, 3}}};
  return c;
}

// The torus cut along a diagonal into two triangles.
FlatComplex split_torus() {
  FlatComplex c;
  c.faces.push_back({0, {{0, 0}, {1, 0}, {1, 1}}});
  c.faces.push_back({1, {{0, 0}, {1, 1}, {0, 1}}});
  c.gluings = {{{0, 2}, {1, 0}}, {{0, 0}, {1, 1}}, {{0, 1}, {1, 2}}};
  return c;
}

double float_area(const FlatComplex& c) {
  double total = 0;
  for (const Face& f : c.faces) {
    const std::size_t n = f.vertices.size();
    for (std::size_t i = 0; i < n; ++i) {
      const auto [x0, y0] = to_double(f.vertices[i]);
      const auto [x1, y1] = to_double(f.vertices[(i + 1) % n]);
      total += x0 * y1 - x1 * y0;
    }
  }
  return total / 2;
}

// Genus from V - E + F, counting vertex classes by a union-find over
// corners that is independent of the library's corner walk.
int euler_genus(const FlatComplex& c) {
  std::vector<int> offset;
  int total = 0;
  for (const Face& f : c.faces) {
    offset.push_back(total);
    total += static_cast<int>(f.vertices.size());
  }
  std::vector<int> parent(total);
  for (int i = 0; i < total; ++i) parent[i] = i;
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto pos = [&](int id) {
    for (std::size_t k = 0; k < c.faces.size(); ++k) {
      if (c.faces[k].id == id) return static_cast<int>(k);
    }
    return -1;
  };
  for (const Gluing& g : c.gluings) {
    const int fa = pos(g.first.face), fb = pos(g.second.face);
    const int na = static_cast<int>(c.faces[fa].vertices.size());
    const int nb = static_cast<int>(c.faces[fb].vertices.size());
    // Start of one edge meets the end of the other.
    parent[find(offset[fa] + g.first.index)] = find(offset[fb] + (g.second.index + 1) % nb);
    parent[find(offset[fa] + (g.first.index + 1) % na)] = find(offset[fb] + g.second.index);
  }
  int V = 0;
  for (int i = 0; i < total; ++i) V += find(i) == i;
  const int E = static_cast<int>(c.gluings.size());
  const int F = static_cast<int>(c.faces.size());
  return (2 - (V - E + F)) / 2;
}

int class_of_mark(const Topology& t, const FlatComplex& c, const std::string& label) {
  const VertexRef v = c.marks.at(label);
  return t.class_of({t.face_index(v.face), v.index});
}

}  // namespace

TEST_CASE("octagon validates with one cone point of angle 6 pi") {
  const FlatComplex c = octagon0();
  CHECK(validate(c).ok());
  const auto classes = vertex_classes(c);
  REQUIRE(classes.size() == 1);
  CHECK(classes[0].order == 2);
  CHECK(classes[0].total_angle_multiple == 3);
  CHECK(std::abs(classes[0].angle_sum - 6 * std::numbers::pi) < 1e-9);
}

TEST_CASE("square torus") {
  const FlatComplex c = square_torus();
  CHECK(validate(c).ok());
  const auto classes = vertex_classes(c);
  REQUIRE(classes.size() == 1);
  CHECK(classes[0].order == 0);
  CHECK(area(c) == QSqrt2(1));
  CHECK(genus(c) == 1);
  const PeriodModule m = absolute_period_module(c);
  CHECK(m.rank() == 2);
  CHECK(m == span_module({{1, 0}, {0, 1}}));
}

TEST_CASE("validation failures are reported") {
  SUBCASE("gluing of unequal lengths") {
    FlatComplex c = octagon0();
    // BC (trapezoid edge 2) against AD (trapezoid edge 0).
    c.gluings = {{{1, 3}, {0, 1}}, {{1, 1}, {0, 5}}, {{0, 4}, {0, 2}}, {{1, 2}, {1, 0}}, {{0, 0}, {0, 3}}};
    const ValidationReport r = validate(c);
    CHECK(r.has(Violation::LengthMismatch));
  }
  SUBCASE("two faces and no gluings") {
    FlatComplex c;
    c.faces.push_back({0, {{0, 0}, {1, 0}, {0, 1}}});
    c.faces.push_back({1, {{0, 0}, {1, 0}, {0, 1}}});
    const ValidationReport r = validate(c);
    CHECK(r.has(Violation::Disconnected));
    CHECK(r.has(Violation::UnpairedEdge));
  }
  SUBCASE("non-simple and clockwise faces") {
    FlatComplex c;
    c.faces.push_back({0, {{0, 0}, {1, 1}, {1, 0}, {0, 1}}});
    CHECK(validate(c).has(Violation::NonSimpleFace));
    c.faces[0] = {0, {{0, 0}, {0, 1}, {1, 0}}};
    CHECK(validate(c).has(Violation::NonPositiveArea));
  }
  SUBCASE("edge glued to itself") {
    FlatComplex c = square_torus();
    c.gluings[0] = {{0, 0}, {0, 0}};
    CHECK(validate(c).has(Violation::SelfGluedEdge));
  }
}

TEST_CASE("area is exact and agrees with a float shoelace") {
  const FlatComplex c = octagon0();
  CHECK(area(c) == 2 + 2 * r2);
  CHECK(float_area(c) == doctest::Approx(2 + 2 * std::sqrt(2.0)));
  CHECK(area(split_torus()) == QSqrt2(1));
  for (long n : {-7L, -1L, 1L, 2L, 9L}) {
    const FlatComplex s = build_complex(normal_form(n));
    CHECK(area(s) == 2 + 2 * r2);
    CHECK(float_area(s) == doctest::Approx(2 + 2 * std::sqrt(2.0)));
  }
}

TEST_CASE("genus matches the Euler count and Gauss-Bonnet") {
  std::vector<FlatComplex> cs{square_torus(), split_torus(), octagon0()};
  for (long n : {-3L, 1L, 4L}) cs.push_back(build_complex(normal_form(n)));
  for (const FlatComplex& c : cs) {
    const int g = genus(c);
    CHECK(g == euler_genus(c));
    int orders = 0;
    for (const VertexClass& v : vertex_classes(c)) orders += v.order;
    CHECK(orders == 2 * g - 2);
  }
  CHECK(genus(octagon0()) == 2);
}

TEST_CASE("octagon period module is spanned by its edge vectors") {
  const QSqrt2 h = r2 / 2;
  const PeriodModule expected = span_module({{1, 0}, {h, h}, {0, 1}, {-h, h}});
  const PeriodModule m = absolute_period_module(octagon0());
  CHECK(m.rank() == 4);
  CHECK(m == expected);
  // Spot-check the HNF shape: upper triangular with positive pivots.
  for (std::size_t i = 0; i < m.basis.size(); ++i) {
    std::size_t pivot = 0;
    while (pivot < 4 && m.basis[i][pivot] == 0) ++pivot;
    REQUIRE(pivot < 4);
    CHECK(m.basis[i][pivot] > 0);
    for (std::size_t k = 0; k < i; ++k) {
      CHECK(m.basis[k][pivot] >= 0);
      CHECK(m.basis[k][pivot] < m.basis[i][pivot]);
    }
  }
}

TEST_CASE("period module ignores chart choices") {
  const FlatComplex base = octagon0();
  const PeriodModule m = absolute_period_module(base);
  SUBCASE("faces permuted") {
    FlatComplex c = base;
    std::reverse(c.faces.begin(), c.faces.end());
    CHECK(absolute_period_module(c) == m);
  }
  SUBCASE("vertices relabeled cyclically") {
    FlatComplex c = base;
    const int n = static_cast<int>(c.faces[0].vertices.size());
    std::rotate(c.faces[0].vertices.begin(), c.faces[0].vertices.begin() + 2, c.faces[0].vertices.end());
    for (Gluing& g : c.gluings) {
      for (EdgeRef* e : {&g.first, &g.second}) {
        if (e->face == c.faces[0].id) e->index = (e->index + n - 2) % n;
      }
    }
    c.marks.clear();
    REQUIRE(validate(c).ok());
    CHECK(absolute_period_module(c) == m);
  }
  SUBCASE("a chart translated") {
    FlatComplex c = base;
    for (Point2& p : c.faces[1].vertices) p = p + Vec2{QSqrt2(5) - r2, QSqrt2(Rational(1, 3))};
    REQUIRE(validate(c).ok());
    CHECK(absolute_period_module(c) == m);
  }
  SUBCASE("refined by a diagonal") {
    CHECK(absolute_period_module(split_torus()) == absolute_period_module(square_torus()));
  }
}

TEST_CASE("Oct_1 has a regular point from four strip corners") {
  const FlatComplex c = build_complex(normal_form(1));
  const Topology t(c);
  int cones = 0;
  for (const VertexClass& v : t.classes()) cones += v.order > 0;
  CHECK(cones == 1);
  const int cls = class_of_mark(t, c, "A'");
  CHECK(t.classes()[cls].order == 0);
  CHECK(class_of_mark(t, c, "B'") == cls);
  CHECK(class_of_mark(t, c, "D") == cls);
  CHECK(class_of_mark(t, c, "D'") == cls);
}

TEST_CASE("surface json round trip") {
  for (const FlatComplex& c : {octagon0(), build_complex(normal_form(3)), left_iterate(2)}) {
    const std::string text = save_surface_text(c);
    const FlatComplex back = load_surface(text);
    CHECK(back == c);
    CHECK(save_surface_text(back) == text);
  }
}

TEST_CASE("surface json errors") {
  const std::string zero_den =
      R"({"faces":[{"id":0,"vertices":[[{"a":["0","1"],"b":["0","1"]},{"a":["0","1"],"b":["0","1"]}]]}],"gluings":[]})";
  std::string bad = zero_den;
  bad.replace(bad.find(R"(["0","1"])"), 9, R"(["1","0"])");
  CHECK_THROWS_AS(load_surface(bad), ParseError);
  CHECK_THROWS_AS(load_surface("{\"faces\": ["), ParseError);

  nlohmann::json j = save_surface(square_torus());
  j["gluings"][0] = {{0, 0}, {0, 0}};
  try {
    load_surface(j.dump());
    FAIL("accepted a self-glued edge");
  } catch (const InvalidComplex& e) {
    CHECK(e.report.has(Violation::SelfGluedEdge));
  }

  // Face ids may be written as strings.
  nlohmann::json s = save_surface(square_torus());
  s["faces"][0]["id"] = "0";
  s["gluings"] = nlohmann::json::parse(R"([[["0", 0], ["0", 2]], [["0", 1], ["0", 3]]])");
  CHECK(load_surface(s.dump()) == square_torus());
}
