#include <doctest.h>

#include <algorithm>

#include "octfake/octagon.hpp"
#include "octfake/surgery.hpp"

using namespace octfake;

namespace {

const QSqrt2 r2 = QSqrt2::sqrt2();

std::vector<int> orders(const FlatComplex& c) {
  std::vector<int> out;
  for (const VertexClass& v : vertex_classes(c)) out.push_back(v.order);
  std::sort(out.begin(), out.end());
  std::erase(out, 0);
  return out;
}

void check_conserved(const FlatComplex& before, const FlatComplex& after) {
  CHECK(validate(after).ok());
  CHECK(area(after) == area(before));
  CHECK(genus(after) == genus(before));
  CHECK(orders(after) == orders(before));
  CHECK(absolute_period_module(after) == absolute_period_module(before));
}

}  // namespace

TEST_CASE("first left surgery on the octagon") {
  const FlatComplex c = octagon0();
  const Topology t(c);
  const SaddleConnection bc = unit_horizontal(t);
  const TracedSegment left = twin_on_side(t, bc, TwinSide::Left);
  const FlatComplex out = slit_and_reglue(t, bc, left);
  check_conserved(c, out);
  const StripPositions nf = extract_normal_form(out);
  CHECK(nf.P == QSqrt2(2));
  CHECK(nf.Pp == QSqrt2(1));

  // The saddle connection survives with the same length and direction.
  const Topology u(out);
  const SaddleConnection again = unit_horizontal(u);
  CHECK(again.closed);
  CHECK(again.sq_length() == QSqrt2(1));
  CHECK(again.direction() == Vec2{1, 0});
}

TEST_CASE("second left surgery gives P = 3") {
  const FlatComplex one = left_surgery(octagon0());
  const FlatComplex two = left_surgery(one);
  check_conserved(one, two);
  const StripPositions nf = extract_normal_form(two);
  CHECK(nf.P == QSqrt2(3));
  CHECK(nf.P == qs_mod(3, 2 + r2));
}

TEST_CASE("right surgery undoes left surgery") {
  FlatComplex c = octagon0();
  for (long n = 0; n <= 20; ++n) {
    const FlatComplex next = left_surgery(c);
    CHECK(extract_normal_form(right_surgery(next)) == extract_normal_form(c));
    c = next;
  }
}

TEST_CASE("surgery conserves invariants along the family") {
  FlatComplex c = octagon0();
  for (int k = 0; k < 6; ++k) {
    const FlatComplex next = left_surgery(c);
    check_conserved(c, next);
    c = next;
  }
  c = octagon0();
  for (int k = 0; k < 6; ++k) {
    const FlatComplex next = right_surgery(c);
    check_conserved(c, next);
    c = next;
  }
}

TEST_CASE("twins share the developed image of the base") {
  FlatComplex c = octagon0();
  for (int k = 0; k < 5; ++k) {
    const Topology t(c);
    for (const SaddleConnection& sc : saddle_connections_up_to(t, 3 + 2 * r2)) {
      for (const Twin& tw : twins_of(t, sc).twins) {
        CHECK(tw.segment.direction == sc.direction());
        if (!tw.hits_saddle) CHECK(tw.segment.sq_length == sc.sq_length());
        if (tw.hits_saddle) CHECK(tw.segment.sq_length < sc.sq_length());
      }
    }
    c = left_surgery(c);
  }
}

TEST_CASE("surgery refuses bad input") {
  const FlatComplex c = build_complex(normal_form(2));
  const Topology t(c);
  const SaddleConnection gamma = unit_horizontal(t);

  SUBCASE("not a twin") {
    const TracedSegment other = trace_from_heading(t, rotate_to(t, gamma.start(), {0, 1}, Sense::Ccw),
                                                   TraceLimit{std::nullopt, gamma.segment.param_length});
    CHECK_THROWS_AS(slit_and_reglue(t, gamma, other), NotATwin);
  }
  SUBCASE("the base itself") {
    CHECK_THROWS_AS(slit_and_reglue(t, gamma, gamma.segment), NotATwin);
  }
  SUBCASE("a saddle connection that is not closed") {
    // Oct_n has a single cone point, so every connection is closed; mark
    // one as open to exercise the precondition.
    SaddleConnection open = gamma;
    open.closed = false;
    CHECK_THROWS_AS(slit_and_reglue(t, open, twin_on_side(t, gamma, TwinSide::Left)), std::invalid_argument);
  }
  SUBCASE("a twin through a cone point") {
    // Systoles are short; the twins of a longer connection often hit the cone point.
    bool refused = false;
    for (const SaddleConnection& sc : saddle_connections_up_to(t, 6)) {
      for (const Twin& tw : twins_of(t, sc).twins) {
        if (!tw.hits_saddle) continue;
        CHECK_THROWS_AS(slit_and_reglue(t, sc, tw.segment), TwinHitsSaddle);
        refused = true;
      }
    }
    CHECK(refused);
  }
}

TEST_CASE("admissibility at the first iterates") {
  FlatComplex c = octagon0();
  for (int n = 0; n <= 4; ++n) {
    const Topology t(c);
    const SaddleConnection gamma = unit_horizontal(t);
    CHECK(surgery_admissible(t, gamma, twin_on_side(t, gamma, TwinSide::Left)).all());
    c = left_surgery(c);
  }
}

TEST_CASE("simplify keeps invariants and shrinks refinements") {
  const FlatComplex c = left_iterate(3);
  const FlatComplex s = simplify(c);
  check_conserved(c, s);
  std::size_t vc = 0, vs = 0;
  for (const Face& f : c.faces) vc += f.vertices.size();
  for (const Face& f : s.faces) vs += f.vertices.size();
  CHECK(vs <= vc);
}

TEST_CASE("surgery is deterministic") {
  CHECK(save_surface_text(left_iterate(4)) == save_surface_text(left_iterate(4)));
  CHECK(save_surface_text(left_iterate(-3)) == save_surface_text(left_iterate(-3)));
}
