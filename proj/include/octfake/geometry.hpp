#pragma once

// Planar vectors over Q(sqrt 2) and the exact predicates built on them.

#include <utility>
#include <vector>

#include "octfake/exact_field.hpp"

namespace octfake {

struct Point2 {
  QSqrt2 x;
  QSqrt2 y;

  Point2& operator+=(const Point2& rhs) {
    x += rhs.x;
    y += rhs.y;
    return *this;
  }
  Point2& operator-=(const Point2& rhs) {
    x -= rhs.x;
    y -= rhs.y;
    return *this;
  }
  friend Point2 operator+(Point2 lhs, const Point2& rhs) { return lhs += rhs; }
  friend Point2 operator-(Point2 lhs, const Point2& rhs) { return lhs -= rhs; }
  friend Point2 operator*(const QSqrt2& s, const Point2& p) { return {s * p.x, s * p.y}; }
  Point2 operator-() const { return {-x, -y}; }
  friend bool operator==(const Point2&, const Point2&) = default;

  bool is_zero() const { return x.is_zero() && y.is_zero(); }
};

using Vec2 = Point2;

inline QSqrt2 cross(const Vec2& u, const Vec2& v) { return u.x * v.y - u.y * v.x; }
inline QSqrt2 dot(const Vec2& u, const Vec2& v) { return u.x * v.x + u.y * v.y; }
inline QSqrt2 norm2(const Vec2& u) { return dot(u, u); }

/// Sign of the turn a -> b -> c.
inline int orientation(const Point2& a, const Point2& b, const Point2& c) {
  return cross(b - a, c - a).sign();
}

inline bool parallel(const Vec2& u, const Vec2& v) { return cross(u, v).is_zero(); }

inline bool same_direction(const Vec2& u, const Vec2& v) {
  return parallel(u, v) && dot(u, v).sign() > 0;
}

/// Canonical representative of the ray spanned by u: scaled so the first
/// nonzero coordinate has absolute value one. Never divides by a norm.
Vec2 normalized_direction(const Vec2& u);

/// Total order on directions by counterclockwise angle from ref, in [0, 2pi).
bool ccw_angle_less(const Vec2& ref, const Vec2& u, const Vec2& v);

/// True iff v lies in the half-open counterclockwise sector [start, end).
/// start and end must not coincide as directions unless the sector is a
/// full turn, which corner sectors never are.
bool in_half_open_sector(const Vec2& start, const Vec2& end, const Vec2& v);

/// Closed segment intersection, exact.
bool segments_intersect(const Point2& p1, const Point2& p2, const Point2& q1, const Point2& q2);

/// Point on closed segment [a, b].
bool on_segment(const Point2& a, const Point2& b, const Point2& p);

/// Squared distance from p to the closed segment [a, b].
QSqrt2 squared_distance_to_segment(const Point2& p, const Point2& a, const Point2& b);

/// No repeated points, no crossings, no fold-backs; collinear runs allowed.
bool polygon_is_simple(const std::vector<Point2>& v);

/// First boundary point of a polygon hit by the ray p + t*u, t > 0. A hit
/// on a vertex is preferred over an edge hit at the same t.
struct RayHit {
  enum Kind { None, Edge, Vertex } kind = None;
  int index = -1;  // edge or vertex index
  QSqrt2 t;
};
RayHit ray_polygon_exit(const std::vector<Point2>& v, const Point2& p, const Vec2& u);

std::pair<double, double> to_double(const Point2& p);

}  // namespace octfake
