#include "octfake/geometry.hpp"

namespace octfake {

namespace {

// 0 for angles in [0, pi) measured counterclockwise from ref, 1 for [pi, 2pi).
int half_of(const Vec2& ref, const Vec2& v) {
  const int c = cross(ref, v).sign();
  if (c > 0) return 0;
  if (c < 0) return 1;
  return dot(ref, v).sign() > 0 ? 0 : 1;
}

}  // namespace

Vec2 normalized_direction(const Vec2& u) {
  if (u.is_zero()) throw std::invalid_argument("zero direction");
  const QSqrt2 scale = u.x.is_zero() ? u.y.abs() : u.x.abs();
  return {u.x / scale, u.y / scale};
}

bool ccw_angle_less(const Vec2& ref, const Vec2& u, const Vec2& v) {
  const int hu = half_of(ref, u);
  const int hv = half_of(ref, v);
  if (hu != hv) return hu < hv;
  return cross(u, v).sign() > 0;
}

bool in_half_open_sector(const Vec2& start, const Vec2& end, const Vec2& v) {
  // angle(start -> v) < angle(start -> end); angle(start -> start) = 0.
  return ccw_angle_less(start, v, end);
}

bool on_segment(const Point2& a, const Point2& b, const Point2& p) {
  if (orientation(a, b, p) != 0) return false;
  return dot(p - a, p - b).sign() <= 0;
}

bool segments_intersect(const Point2& p1, const Point2& p2, const Point2& q1, const Point2& q2) {
  const int o1 = orientation(p1, p2, q1);
  const int o2 = orientation(p1, p2, q2);
  const int o3 = orientation(q1, q2, p1);
  const int o4 = orientation(q1, q2, p2);
  if (o1 * o2 < 0 && o3 * o4 < 0) return true;
  return on_segment(p1, p2, q1) || on_segment(p1, p2, q2) || on_segment(q1, q2, p1) ||
         on_segment(q1, q2, p2);
}

QSqrt2 squared_distance_to_segment(const Point2& p, const Point2& a, const Point2& b) {
  const Vec2 ab = b - a;
  const QSqrt2 len2 = norm2(ab);
  if (len2.is_zero()) return norm2(p - a);
  const QSqrt2 t = dot(p - a, ab);
  if (t.sign() <= 0) return norm2(p - a);
  if (t >= len2) return norm2(p - b);
  const QSqrt2 c = cross(ab, p - a);
  return c * c / len2;
}

bool polygon_is_simple(const std::vector<Point2>& v) {
  const int n = static_cast<int>(v.size());
  for (int i = 0; i < n; ++i) {
    const Point2& a = v[i];
    const Point2& b = v[(i + 1) % n];
    if (a == b) return false;
    // Adjacent edges may be collinear but must not fold back.
    const Vec2 e = b - a;
    const Vec2 f = v[(i + 2) % n] - b;
    if (parallel(e, f) && dot(e, f).sign() < 0) return false;
    for (int j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      if (segments_intersect(a, b, v[j], v[(j + 1) % n])) return false;
    }
  }
  return true;
}

RayHit ray_polygon_exit(const std::vector<Point2>& v, const Point2& p, const Vec2& u) {
  const int n = static_cast<int>(v.size());
  RayHit best;
  auto offer = [&](RayHit::Kind kind, int index, const QSqrt2& t) {
    if (t.sign() <= 0) return;
    if (best.kind == RayHit::None || t < best.t || (t == best.t && kind == RayHit::Vertex)) {
      best = {kind, index, t};
    }
  };
  const QSqrt2 uu = norm2(u);
  for (int j = 0; j < n; ++j) {
    const Point2& a = v[j];
    const Point2& b = v[(j + 1) % n];
    const Vec2 e = b - a;
    const QSqrt2 denom = cross(u, e);
    if (denom.is_zero()) {
      if (!cross(a - p, u).is_zero()) continue;
      offer(RayHit::Vertex, j, dot(a - p, u) / uu);
      offer(RayHit::Vertex, (j + 1) % n, dot(b - p, u) / uu);
      continue;
    }
    const QSqrt2 t = cross(a - p, e) / denom;
    const QSqrt2 s = cross(a - p, u) / denom;
    if (s.sign() < 0 || s > QSqrt2(1)) continue;
    if (s.is_zero()) {
      offer(RayHit::Vertex, j, t);
    } else if (s == QSqrt2(1)) {
      offer(RayHit::Vertex, (j + 1) % n, t);
    } else {
      offer(RayHit::Edge, j, t);
    }
  }
  return best;
}

std::pair<double, double> to_double(const Point2& p) { return {p.x.to_double(), p.y.to_double()}; }

}  // namespace octfake
