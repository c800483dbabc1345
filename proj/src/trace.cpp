#include <cstdlib>

#include "octfake/surgery.hpp"

namespace octfake {

long search_budget() {
  if (const char* env = std::getenv("OCT_SEARCH_BUDGET")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return v;
  }
  return 5'000'000;
}

Heading make_heading(const Topology& t, Corner c, const Vec2& dir) {
  const Vec2 d = normalized_direction(dir);
  if (t.sector_contains(c, d)) return {c, d};
  if (same_direction(d, t.sector_end(c))) return {t.ccw_next(c), d};
  throw AmbiguousWedge("direction is outside the sector of the given corner");
}

namespace {

// Angle of a direction measured from the corner's sector start.
bool before_in_corner(const Topology& t, Corner c, const Vec2& u, const Vec2& v) {
  return ccw_angle_less(t.sector_start(c), u, v);
}

}  // namespace

Heading rotate_to(const Topology& t, const Heading& from, const Vec2& dir, Sense sense) {
  const Vec2 d = normalized_direction(dir);
  const int cls = t.class_of(from.corner);
  const int n = static_cast<int>(t.class_corners(cls).size());
  if (sense == Sense::Ccw) {
    if (t.sector_contains(from.corner, d) && before_in_corner(t, from.corner, from.dir, d)) return {from.corner, d};
    Corner c = from.corner;
    for (int k = 0; k < n; ++k) {
      c = t.ccw_next(c);
      if (t.sector_contains(c, d)) return {c, d};
    }
  } else {
    if (t.sector_contains(from.corner, d) && before_in_corner(t, from.corner, d, from.dir)) return {from.corner, d};
    Corner c = from.corner;
    for (int k = 0; k < n; ++k) {
      c = t.cw_next(c);
      if (t.sector_contains(c, d)) return {c, d};
    }
  }
  throw std::logic_error("direction not found around vertex");
}

int half_turns(const Topology& t, const Heading& from, const Heading& to, Sense sense) {
  if (!parallel(from.dir, to.dir)) throw std::invalid_argument("half_turns needs parallel headings");
  if (from == to) return 0;
  const int cls = t.class_of(from.corner);
  const int limit = 2 * t.classes()[cls].total_angle_multiple;
  Heading h = from;
  for (int count = 1; count <= limit; ++count) {
    h = rotate_to(t, h, -h.dir, sense);
    if (h == to) return count;
  }
  throw std::invalid_argument("headings are at different vertices");
}

std::vector<Heading> headings_of(const Topology& t, int vertex_class, const Vec2& dir) {
  const Vec2 d = normalized_direction(dir);
  std::vector<Heading> out;
  for (const Corner& c : t.class_corners(vertex_class)) {
    if (t.sector_contains(c, d)) out.push_back({c, d});
  }
  return out;
}

bool heading_less(const Topology& t, const Heading& a, const Heading& b) {
  const int ca = t.class_of(a.corner);
  const int cb = t.class_of(b.corner);
  if (ca != cb) return ca < cb;
  const int pa = t.position_in_class(a.corner);
  const int pb = t.position_in_class(b.corner);
  if (pa != pb) return pa < pb;
  return before_in_corner(t, a.corner, a.dir, b.dir);
}

// ---------------------------------------------------------------------------

namespace {

// Corner of a regular point's class whose sector contains dir.
Corner corner_containing(const Topology& t, Corner at, const Vec2& dir) {
  for (const Corner& c : t.class_corners(t.class_of(at))) {
    if (t.sector_contains(c, dir)) return c;
  }
  throw std::logic_error("no corner contains the direction");
}

struct Cursor {
  int face;
  Point2 point;
};

TracedSegment run_trace(const Topology& t, Cursor cur, const Vec2& u, const TraceLimit& limit,
                        TracedSegment seg) {
  const long budget = search_budget();
  const QSqrt2 uu = norm2(u);
  QSqrt2 param;
  for (long iter = 0;; ++iter) {
    if (iter > budget) throw SearchBudgetExceeded("trace exceeded the search budget");
    const RayHit hit = ray_polygon_exit(t.vertices(cur.face), cur.point, u);
    if (hit.kind == RayHit::None) throw std::logic_error("ray left a face without hitting its boundary");
    QSqrt2 next_param = param + hit.t;
    bool stop = false;
    bool reached = true;
    if (limit.max_param && next_param >= *limit.max_param) {
      stop = true;
      if (next_param > *limit.max_param) {
        next_param = *limit.max_param;
        reached = false;
      }
    }
    const Point2 exit = cur.point + (next_param - param) * u;
    seg.steps.push_back({t.complex().faces[cur.face].id, cur.point, exit});
    param = next_param;
    seg.param_length = param;
    seg.sq_length = param * param * uu;
    seg.end_face = cur.face;
    seg.end_point = exit;
    if (stop && !(reached && hit.kind == RayHit::Vertex)) return seg;
    if (!stop && limit.max_sq_len && seg.sq_length > *limit.max_sq_len) {
      seg.truncated = true;
      return seg;
    }
    if (hit.kind == RayHit::Edge) {
      const EdgeRef p = t.partner(cur.face, hit.index);
      cur = {p.face, exit + t.crossing_translation(cur.face, hit.index)};
      continue;
    }
    const Corner at{cur.face, hit.index};
    if (t.is_cone(at)) {
      seg.complete = true;
      seg.end = make_heading(t, at, -u);
      seg.end_class = t.class_of(at);
      return seg;
    }
    if (stop) return seg;
    const Corner out = corner_containing(t, at, u);
    cur = {out.face, t.point(out)};
  }
}

}  // namespace

TracedSegment trace_from_heading(const Topology& t, const Heading& start, const TraceLimit& limit) {
  TracedSegment seg;
  seg.start = make_heading(t, start.corner, start.dir);
  seg.start_class = t.class_of(seg.start.corner);
  seg.wedge = t.position_in_class(seg.start.corner);
  seg.direction = seg.start.dir;
  seg.end_face = seg.start.corner.face;
  seg.end_point = t.point(seg.start.corner);
  const Vec2 u = seg.direction;
  return run_trace(t, {seg.start.corner.face, t.point(seg.start.corner)}, u, limit, std::move(seg));
}

TracedSegment trace_from_point(const Topology& t, int face, const Point2& p, const Vec2& dir,
                               const TraceLimit& limit) {
  const Vec2 u = normalized_direction(dir);
  const auto& v = t.vertices(face);
  const int n = t.degree(face);
  for (int i = 0; i < n; ++i) {
    if (v[i] == p) {
      const Corner at{face, i};
      if (t.is_cone(at)) return trace_from_heading(t, make_heading(t, at, u), limit);
      const Corner out = corner_containing(t, at, u);
      TracedSegment seg;
      seg.direction = u;
      seg.start = {out, u};
      seg.end_face = out.face;
      seg.end_point = t.point(out);
      return run_trace(t, {out.face, t.point(out)}, u, limit, std::move(seg));
    }
  }
  Cursor cur{face, p};
  for (int i = 0; i < n; ++i) {
    if (on_segment(v[i], v[(i + 1) % n], p) && cross(t.edge_vector(face, i), u).sign() < 0) {
      const EdgeRef q = t.partner(face, i);
      cur = {q.face, p + t.crossing_translation(face, i)};
      break;
    }
  }
  TracedSegment seg;
  seg.direction = u;
  seg.start = {Corner{-1, -1}, u};
  seg.end_face = cur.face;
  seg.end_point = cur.point;
  return run_trace(t, cur, u, limit, std::move(seg));
}

TracedSegment trace_from_cone(const Topology& t, int vertex_class, const Vec2& direction, int wedge,
                              const QSqrt2& max_sq_len) {
  if (vertex_class < 0 || vertex_class >= static_cast<int>(t.classes().size())) {
    throw std::out_of_range("no vertex class " + std::to_string(vertex_class));
  }
  if (t.classes()[vertex_class].order == 0) {
    throw NotAConePoint("vertex class " + std::to_string(vertex_class) + " is a regular point");
  }
  const auto& corners = t.class_corners(vertex_class);
  if (wedge < 0 || wedge >= static_cast<int>(corners.size())) {
    throw AmbiguousWedge("wedge " + std::to_string(wedge) + " out of range");
  }
  const Vec2 d = normalized_direction(direction);
  const Corner c = corners[wedge];
  if (!t.sector_contains(c, d) && !same_direction(d, t.sector_end(c))) {
    throw AmbiguousWedge("direction does not lie in wedge " + std::to_string(wedge));
  }
  return trace_from_heading(t, make_heading(t, c, d), TraceLimit{max_sq_len, std::nullopt});
}

TracedSegment trace_from_cone(const FlatComplex& c, int vertex_class, const Vec2& direction, int wedge,
                              const QSqrt2& max_sq_len) {
  return trace_from_cone(Topology(c), vertex_class, direction, wedge, max_sq_len);
}

nlohmann::json trace_to_json(const TracedSegment& s) {
  nlohmann::json steps = nlohmann::json::array();
  for (const TraceStep& st : s.steps) {
    steps.push_back({{"face", st.face}, {"entry", st.entry}, {"exit", st.exit}});
  }
  nlohmann::json j = {{"start_class", s.start_class},
                      {"wedge", s.wedge},
                      {"direction", s.direction},
                      {"steps", steps},
                      {"param_length", s.param_length},
                      {"sq_length", s.sq_length},
                      {"sq_length_text", s.sq_length.to_string()},
                      {"complete", s.complete},
                      {"truncated", s.truncated}};
  if (s.end) j["end_class"] = s.end_class;
  return j;
}

}  // namespace octfake
