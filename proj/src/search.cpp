#include <algorithm>
#include <array>
#include <deque>
#include <map>
#include <set>

#include "octfake/surgery.hpp"

namespace octfake {

namespace {

// A triangle of an ear-clipped face. Side k runs from v[k] to v[k+1].
struct Triangle {
  int face = 0;
  std::array<Point2, 3> v;
  std::array<int, 3> tri{-1, -1, -1};  // neighbour across side k
  std::array<int, 3> side{-1, -1, -1};  // its side index
  std::array<Vec2, 3> shift;            // neighbour chart = this chart + shift
  std::array<int, 3> corner{};          // vertex index in the face
};

bool inside_closed_triangle(const Point2& a, const Point2& b, const Point2& c, const Point2& p) {
  return orientation(a, b, p) >= 0 && orientation(b, c, p) >= 0 && orientation(c, a, p) >= 0;
}

// Ear clipping with exact predicates; returns triples of vertex indices.
std::vector<std::array<int, 3>> ear_clip(const std::vector<Point2>& pts) {
  std::vector<int> idx(pts.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
  std::vector<std::array<int, 3>> out;
  while (idx.size() > 3) {
    const int n = static_cast<int>(idx.size());
    bool clipped = false;
    for (int k = 0; k < n && !clipped; ++k) {
      const int a = idx[(k + n - 1) % n], b = idx[k], c = idx[(k + 1) % n];
      if (orientation(pts[a], pts[b], pts[c]) <= 0) continue;
      bool empty = true;
      for (int m : idx) {
        if (m == a || m == b || m == c) continue;
        if (inside_closed_triangle(pts[a], pts[b], pts[c], pts[m])) {
          empty = false;
          break;
        }
      }
      if (!empty) continue;
      out.push_back({a, b, c});
      idx.erase(idx.begin() + k);
      clipped = true;
    }
    if (!clipped) throw std::logic_error("ear clipping failed on a face");
  }
  out.push_back({idx[0], idx[1], idx[2]});
  return out;
}

struct Triangulation {
  std::vector<Triangle> tris;
  // Triangles around each corner, counterclockwise, with the side index
  // opposite the corner.
  std::map<Corner, std::vector<std::pair<int, int>>> fan;
};

Triangulation triangulate(const Topology& t) {
  Triangulation out;
  // (face, from vertex, to vertex) -> (triangle, side)
  std::map<std::array<int, 3>, std::pair<int, int>> directed;
  for (int f = 0; f < t.face_count(); ++f) {
    const auto& pts = t.vertices(f);
    for (const auto& ear : ear_clip(pts)) {
      Triangle tr;
      tr.face = f;
      for (int k = 0; k < 3; ++k) {
        tr.v[k] = pts[ear[k]];
        tr.corner[k] = ear[k];
      }
      const int id = static_cast<int>(out.tris.size());
      for (int k = 0; k < 3; ++k) directed[{f, ear[k], ear[(k + 1) % 3]}] = {id, k};
      out.tris.push_back(tr);
    }
  }
  for (int id = 0; id < static_cast<int>(out.tris.size()); ++id) {
    Triangle& tr = out.tris[id];
    const int f = tr.face;
    const int n = t.degree(f);
    for (int k = 0; k < 3; ++k) {
      const int a = tr.corner[k], b = tr.corner[(k + 1) % 3];
      if (b == (a + 1) % n) {
        const EdgeRef p = t.partner(f, a);
        const auto [ot, os] = directed.at({p.face, p.index, t.next(p.face, p.index)});
        tr.tri[k] = ot;
        tr.side[k] = os;
        tr.shift[k] = t.crossing_translation(f, a);
      } else {
        const auto [ot, os] = directed.at({f, b, a});
        tr.tri[k] = ot;
        tr.side[k] = os;
        tr.shift[k] = Vec2{};
      }
    }
  }
  // Fans: the triangles of a face at a corner, sorted counterclockwise from
  // the outgoing edge.
  for (int id = 0; id < static_cast<int>(out.tris.size()); ++id) {
    const Triangle& tr = out.tris[id];
    for (int k = 0; k < 3; ++k) out.fan[{tr.face, tr.corner[k]}].push_back({id, (k + 1) % 3});
  }
  for (auto& [c, list] : out.fan) {
    const Vec2 ref = t.sector_start(c);
    std::sort(list.begin(), list.end(), [&](const auto& x, const auto& y) {
      const Triangle& tx = out.tris[x.first];
      const Triangle& ty = out.tris[y.first];
      return ccw_angle_less(ref, tx.v[x.second] - t.point(c), ty.v[y.second] - t.point(c));
    });
  }
  return out;
}

bool direction_less(const Vec2& a, const Vec2& b) { return ccw_angle_less(Vec2{1, 0}, a, b); }

// Wedge search state: a triangle in the unfolded chart of the start point,
// entered through `entry`, with the closed wedge [right, left].
struct Frame {
  int tri;
  int entry;
  Vec2 offset;  // unfolded = chart + offset
  Vec2 right;
  Vec2 left;
};

}  // namespace

std::optional<SaddleConnection> saddle_from(const Topology& t, const Heading& start, const QSqrt2& max_sq_len) {
  TracedSegment seg = trace_from_heading(t, start, TraceLimit{max_sq_len, std::nullopt});
  if (!seg.complete || seg.sq_length > max_sq_len) return std::nullopt;
  SaddleConnection sc;
  sc.closed = seg.end_class == seg.start_class;
  sc.segment = std::move(seg);
  return sc;
}

SaddleConnection reversed(const Topology& t, const SaddleConnection& sc) {
  if (!sc.segment.end) throw std::invalid_argument("saddle connection has no end");
  SaddleConnection r;
  r.segment = trace_from_heading(t, *sc.segment.end, TraceLimit{std::nullopt, sc.segment.param_length});
  r.closed = sc.closed;
  return r;
}

std::vector<SaddleConnection> saddle_connections_up_to(const Topology& t, const QSqrt2& max_sq_len) {
  std::vector<SaddleConnection> found;
  if (max_sq_len.sign() <= 0) return found;
  const Triangulation tri = triangulate(t);
  const long budget = search_budget();
  long work = 0;
  // Verified traces by start heading, so each direction is traced once.
  std::set<std::pair<Corner, std::pair<std::string, std::string>>> tried;

  auto consider = [&](Corner c, const Vec2& d) {
    const Heading h = make_heading(t, c, d);
    if (!tried.insert({h.corner, {h.dir.x.to_string(), h.dir.y.to_string()}}).second) return;
    auto sc = saddle_from(t, h, max_sq_len);
    if (!sc) return;
    if (heading_less(t, *sc->segment.end, sc->segment.start)) return;
    found.push_back(std::move(*sc));
  };

  for (int cls : t.cone_classes()) {
    for (const Corner& c : t.class_corners(cls)) {
      const Point2 o = t.point(c);
      std::deque<Frame> queue;
      for (const auto& [id, opp] : tri.fan.at(c)) {
        const Triangle& tr = tri.tris[id];
        const Point2& x = tr.v[opp];
        const Point2& y = tr.v[(opp + 1) % 3];
        for (const Point2* p : {&x, &y}) {
          if (norm2(*p - o) <= max_sq_len) consider(c, *p - o);
        }
        if (squared_distance_to_segment(o, x, y) <= max_sq_len) {
          queue.push_back({tr.tri[opp], tr.side[opp], -tr.shift[opp], x - o, y - o});
        }
      }
      while (!queue.empty()) {
        if (++work > budget) throw SearchBudgetExceeded("saddle connection search exceeded the budget");
        const Frame fr = queue.front();
        queue.pop_front();
        const Triangle& tr = tri.tris[fr.tri];
        std::array<Point2, 3> u;
        for (int k = 0; k < 3; ++k) u[k] = tr.v[k] + fr.offset;
        const int apex = (fr.entry + 2) % 3;
        const Vec2 dz = u[apex] - o;
        if (norm2(dz) <= max_sq_len && cross(fr.right, dz).sign() >= 0 && cross(dz, fr.left).sign() >= 0) {
          consider(c, dz);
        }
        for (int k : {(fr.entry + 1) % 3, (fr.entry + 2) % 3}) {
          const Point2& a = u[k];
          const Point2& b = u[(k + 1) % 3];
          if (orientation(a, b, o) <= 0) continue;
          const Vec2 da = a - o;
          const Vec2 db = b - o;
          const Vec2 nr = cross(fr.right, da).sign() >= 0 ? da : fr.right;
          const Vec2 nl = cross(db, fr.left).sign() >= 0 ? db : fr.left;
          if (cross(nr, nl).sign() < 0) continue;
          if (squared_distance_to_segment(o, a, b) > max_sq_len) continue;
          queue.push_back({tr.tri[k], tr.side[k], fr.offset - tr.shift[k], nr, nl});
        }
      }
    }
  }
  std::sort(found.begin(), found.end(), [&](const SaddleConnection& a, const SaddleConnection& b) {
    if (a.sq_length() != b.sq_length()) return a.sq_length() < b.sq_length();
    if (a.direction() != b.direction()) return direction_less(a.direction(), b.direction());
    return heading_less(t, a.start(), b.start());
  });
  return found;
}

std::vector<SaddleConnection> saddle_connections_up_to(const FlatComplex& c, const QSqrt2& max_sq_len) {
  return saddle_connections_up_to(Topology(c), max_sq_len);
}

Systole systole(const Topology& t) {
  if (t.cone_classes().empty()) throw NotAConePoint("surface has no cone point");
  QSqrt2 radius(1);
  for (;;) {
    auto all = saddle_connections_up_to(t, radius);
    if (!all.empty()) {
      Systole s;
      s.sq_length = all.front().sq_length();
      for (auto& sc : all) {
        if (sc.sq_length() == s.sq_length) s.connections.push_back(std::move(sc));
      }
      return s;
    }
    radius *= QSqrt2(2);
  }
}

Systole systole(const FlatComplex& c) { return systole(Topology(c)); }

// ---------------------------------------------------------------------------
// Twins

namespace {

// A chord of a traced path in one face chart.
struct Chord {
  int face;
  Point2 a;
  Point2 b;
};

// Face positions are what Topology indexes; steps record ids.
std::vector<Chord> chords_of(const Topology& t, const TracedSegment& s) {
  std::vector<Chord> out;
  for (const TraceStep& st : s.steps) out.push_back({t.face_index(st.face), st.entry, st.exit});
  return out;
}

// The chord as seen from each face whose boundary or interior carries it.
std::vector<Chord> representations(const Topology& t, const Chord& c) {
  std::vector<Chord> out{c};
  const int n = t.degree(c.face);
  const auto& v = t.vertices(c.face);
  for (int i = 0; i < n; ++i) {
    if (on_segment(v[i], v[(i + 1) % n], c.a) && on_segment(v[i], v[(i + 1) % n], c.b)) {
      const EdgeRef p = t.partner(c.face, i);
      const Vec2 s = t.crossing_translation(c.face, i);
      out.push_back({p.face, c.a + s, c.b + s});
    }
  }
  return out;
}

// Non-vertex positions of a point, one per face chart that holds it.
std::vector<std::pair<int, Point2>> point_positions(const Topology& t, int face, const Point2& p) {
  std::vector<std::pair<int, Point2>> out{{face, p}};
  const int n = t.degree(face);
  const auto& v = t.vertices(face);
  for (int i = 0; i < n; ++i) {
    if (v[i] == p) return {};
  }
  for (int i = 0; i < n; ++i) {
    if (on_segment(v[i], v[(i + 1) % n], p)) {
      const EdgeRef q = t.partner(face, i);
      out.push_back({q.face, p + t.crossing_translation(face, i)});
    }
  }
  return out;
}

bool strictly_inside(const Chord& c, const Point2& p) { return on_segment(c.a, c.b, p) && p != c.a && p != c.b; }

bool same_position(const std::vector<std::pair<int, Point2>>& x, const std::vector<std::pair<int, Point2>>& y) {
  for (const auto& a : x) {
    for (const auto& b : y) {
      if (a == b) return true;
    }
  }
  return false;
}

struct PathPoints {
  std::vector<Chord> chords;
  // Breakpoints between chords, plus the final point; vertex points are empty.
  std::vector<std::vector<std::pair<int, Point2>>> points;
};

PathPoints path_points(const Topology& t, const TracedSegment& s) {
  PathPoints out;
  out.chords = chords_of(t, s);
  for (const Chord& c : out.chords) out.points.push_back(point_positions(t, c.face, c.b));
  return out;
}

// True when some point of one path lies in the interior of a chord of the
// other, or two breakpoints coincide. Both paths are parallel, so this is
// the only way they can meet away from vertices.
bool paths_meet(const Topology& t, const PathPoints& x, const PathPoints& y, bool same) {
  for (std::size_t i = 0; i < x.chords.size(); ++i) {
    for (const Chord& rep : representations(t, x.chords[i])) {
      for (std::size_t j = 0; j < y.points.size(); ++j) {
        for (const auto& [f, p] : y.points[j]) {
          if (f == rep.face && strictly_inside(rep, p)) return true;
        }
      }
    }
  }
  for (std::size_t i = 0; i < x.points.size(); ++i) {
    for (std::size_t j = 0; j < y.points.size(); ++j) {
      if (same && i == j) continue;
      if (same_position(x.points[i], y.points[j])) return true;
    }
  }
  return false;
}

}  // namespace

bool path_is_embedded(const Topology& t, const TracedSegment& s) {
  const PathPoints p = path_points(t, s);
  return !paths_meet(t, p, p, true);
}

bool paths_interior_disjoint(const Topology& t, const TracedSegment& a, const TracedSegment& b) {
  return !paths_meet(t, path_points(t, a), path_points(t, b), false) &&
         !paths_meet(t, path_points(t, b), path_points(t, a), false);
}

TwinSet twins_of(const Topology& t, const SaddleConnection& sc) {
  const int cls = sc.segment.start_class;
  const int d = t.classes()[cls].order;
  if (d < 1) throw NotAConePoint("saddle connection does not start at a cone point");
  TwinSet out{sc, {}};
  Heading h = sc.start();
  for (int j = 1; j <= d; ++j) {
    h = rotate_to(t, h, sc.direction(), Sense::Ccw);
    Twin tw;
    tw.turns = j;
    tw.segment = trace_from_heading(t, h, TraceLimit{std::nullopt, sc.segment.param_length});
    tw.hits_saddle = tw.segment.complete && tw.segment.param_length < sc.segment.param_length;
    tw.embedded = !tw.hits_saddle && path_is_embedded(t, tw.segment);
    out.twins.push_back(std::move(tw));
  }
  return out;
}

std::string to_string(TwinSide s) { return s == TwinSide::Left ? "left" : "right"; }

namespace {

void require_twin(const Topology& t, const SaddleConnection& sc, const TracedSegment& twin) {
  if (!sc.segment.end) throw NotATwin("base is not a saddle connection");
  if (twin.start.corner.face < 0 || t.class_of(twin.start.corner) != sc.segment.start_class ||
      twin.direction != sc.direction() || twin.start == sc.start() ||
      twin.param_length > sc.segment.param_length ||
      (twin.param_length < sc.segment.param_length && !twin.complete)) {
    throw NotATwin("segment is not a twin of the saddle connection");
  }
}

}  // namespace

TwinSide classify_twin(const Topology& t, const SaddleConnection& sc, const TracedSegment& twin) {
  require_twin(t, sc, twin);
  if (!sc.closed) throw NotATwin("twin sides are defined for closed saddle connections");
  return half_turns(t, sc.end(), twin.start, Sense::Cw) == 1 ? TwinSide::Left : TwinSide::Right;
}

AdmissibilityReport surgery_admissible(const Topology& t, const SaddleConnection& sc, const TracedSegment& twin) {
  require_twin(t, sc, twin);
  AdmissibilityReport r;
  r.twin_to_start_2pi = half_turns(t, twin.start, sc.start(), Sense::Cw) == 2;
  r.end_to_twin_pi = sc.closed && half_turns(t, sc.end(), twin.start, Sense::Cw) == 1;
  // The continuation is followed far enough to close a cylinder core of
  // comparable size; a longer continuation counts as no saddle connection.
  const QSqrt2 reach = QSqrt2(64) * sc.sq_length();
  const TracedSegment cont = trace_from_heading(t, twin.start, TraceLimit{reach, std::nullopt});
  if (cont.complete) {
    r.continuation_bounds_cylinder =
        cont.end_class == cont.start_class && half_turns(t, cont.start, *cont.end, Sense::Cw) == 1;
  } else {
    r.continuation_bounds_cylinder = true;
  }
  const bool hits = twin.complete && twin.param_length < sc.segment.param_length;
  r.embedded = !hits && path_is_embedded(t, twin) && paths_interior_disjoint(t, sc.segment, twin);
  return r;
}

}  // namespace octfake
