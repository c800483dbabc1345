#include <algorithm>
#include <set>
#include <tuple>

#include "octfake/surgery.hpp"

namespace octfake {

namespace {

// Mutable polygon complex used while refining and regluing. Edge (f, i)
// runs from v[i] to v[i+1]; partner[i] is the edge it is glued to.
struct WFace {
  std::vector<Point2> v;
  std::vector<EdgeRef> partner;
  int origin = 0;  // face position in the input complex
};

class Workspace {
 public:
  explicit Workspace(const Topology& t) {
    for (int f = 0; f < t.face_count(); ++f) {
      WFace w;
      w.v = t.vertices(f);
      w.origin = f;
      for (int i = 0; i < t.degree(f); ++i) w.partner.push_back(t.partner(f, i));
      faces.push_back(std::move(w));
    }
  }

  std::vector<WFace> faces;

  int size(int f) const { return static_cast<int>(faces[f].v.size()); }
  const Point2& at(int f, int i) const { return faces[f].v[((i % size(f)) + size(f)) % size(f)]; }
  EdgeRef& partner(EdgeRef e) { return faces[e.face].partner[e.index]; }

  void glue(EdgeRef a, EdgeRef b) {
    partner(a) = b;
    partner(b) = a;
  }

  // g chart = f chart + translation, across edge (f, i).
  Vec2 translation(int f, int i) const {
    const EdgeRef q = faces[f].partner[i];
    return at(q.face, q.index + 1) - at(f, i);
  }

  int vertex_index(int f, const Point2& p) const {
    for (int i = 0; i < size(f); ++i) {
      if (faces[f].v[i] == p) return i;
    }
    return -1;
  }

  int edge_containing(int f, const Point2& p) const {
    for (int i = 0; i < size(f); ++i) {
      const Point2& a = at(f, i);
      const Point2& b = at(f, i + 1);
      if (p != a && p != b && on_segment(a, b, p)) return i;
    }
    return -1;
  }

  // Rewrites every edge reference through `map`.
  template <class Map>
  void remap(Map map) {
    for (WFace& w : faces) {
      for (EdgeRef& e : w.partner) e = map(e);
    }
  }

  // Splits edge (f, i) and its partner at the point p of (f, i).
  void insert_vertex(int f, int i, const Point2& p) {
    const EdgeRef q = faces[f].partner[i];
    const Point2 pg = p + translation(f, i);
    int g = q.face, j = q.index;
    remap([&](EdgeRef e) {
      if (e.face == f && e.index > i) ++e.index;
      return e;
    });
    faces[f].v.insert(faces[f].v.begin() + i + 1, p);
    faces[f].partner.insert(faces[f].partner.begin() + i + 1, EdgeRef{});
    if (g == f && j > i) ++j;
    remap([&](EdgeRef e) {
      if (e.face == g && e.index > j) ++e.index;
      return e;
    });
    faces[g].v.insert(faces[g].v.begin() + j + 1, pg);
    faces[g].partner.insert(faces[g].partner.begin() + j + 1, EdgeRef{});
    if (g == f && i > j) ++i;
    glue({f, i}, {g, j + 1});
    glue({f, i + 1}, {g, j});
  }

  // Ensures p is a vertex of face f, splitting the edge it lies on.
  void ensure_vertex(int f, const Point2& p) {
    if (vertex_index(f, p) >= 0) return;
    const int e = edge_containing(f, p);
    if (e >= 0) insert_vertex(f, e, p);
  }

  // Cuts face f along the diagonal from vertex i to vertex j. The part
  // i..j keeps position f, the part j..i is appended.
  void split_face(int f, int i, int j) {
    const int n = size(f);
    const int la = (j - i + n) % n + 1;
    const int lb = (i - j + n) % n + 1;
    const int nb = static_cast<int>(faces.size());
    WFace a, b;
    a.origin = b.origin = faces[f].origin;
    for (int k = 0; k < la; ++k) a.v.push_back(at(f, i + k));
    for (int k = 0; k < lb; ++k) b.v.push_back(at(f, j + k));
    a.partner.assign(la, EdgeRef{});
    b.partner.assign(lb, EdgeRef{});
    for (int k = 0; k < la - 1; ++k) a.partner[k] = faces[f].partner[(i + k) % n];
    for (int k = 0; k < lb - 1; ++k) b.partner[k] = faces[f].partner[(j + k) % n];
    faces[f] = std::move(a);
    faces.push_back(std::move(b));
    remap([&](EdgeRef e) {
      if (e.face != f) return e;
      const int off_a = (e.index - i + n) % n;
      if (off_a < la - 1) return EdgeRef{f, off_a};
      return EdgeRef{nb, (e.index - j + n) % n};
    });
    glue({f, la - 1}, {nb, lb - 1});
  }

  // Directed edge from a to b among faces descending from `origin`.
  std::optional<EdgeRef> find_edge(int origin, const Point2& a, const Point2& b) const {
    for (int f = 0; f < static_cast<int>(faces.size()); ++f) {
      if (faces[f].origin != origin) continue;
      for (int i = 0; i < size(f); ++i) {
        if (at(f, i) == a && at(f, i + 1) == b) return EdgeRef{f, i};
      }
    }
    return std::nullopt;
  }

  // Adds the chord a-b of an input face as an edge, unless it already is one.
  void cut(int origin, const Point2& a, const Point2& b) {
    if (find_edge(origin, a, b) || find_edge(origin, b, a)) return;
    for (int f = 0; f < static_cast<int>(faces.size()); ++f) {
      if (faces[f].origin != origin) continue;
      const int i = vertex_index(f, a);
      const int j = vertex_index(f, b);
      if (i < 0 || j < 0) continue;
      const Vec2 start = at(f, i + 1) - at(f, i);
      const Vec2 end = at(f, i - 1) - at(f, i);
      const Vec2 d = b - a;
      if (parallel(start, d) && dot(start, d).sign() > 0) continue;
      if (!in_half_open_sector(start, end, d)) continue;
      split_face(f, i, j);
      return;
    }
    throw std::logic_error("chord is not a diagonal of any refined face");
  }

  // Splits every edge of a descendant of `origin` that has p in its interior.
  void ensure_vertex_in(int origin, const Point2& p) {
    for (int f = 0; f < static_cast<int>(faces.size()); ++f) {
      if (faces[f].origin != origin) continue;
      if (vertex_index(f, p) >= 0) return;
    }
    for (int f = 0; f < static_cast<int>(faces.size()); ++f) {
      if (faces[f].origin != origin) continue;
      const int e = edge_containing(f, p);
      if (e >= 0) {
        insert_vertex(f, e, p);
        return;
      }
    }
    throw std::logic_error("subdivision point is not on a refined edge");
  }

  void remove_face(int g) {
    faces.erase(faces.begin() + g);
    remap([&](EdgeRef e) {
      if (e.face > g) --e.face;
      return e;
    });
  }

  FlatComplex to_complex() const {
    FlatComplex c;
    for (int f = 0; f < static_cast<int>(faces.size()); ++f) c.faces.push_back({f, faces[f].v});
    for (int f = 0; f < static_cast<int>(faces.size()); ++f) {
      for (int i = 0; i < size(f); ++i) {
        const EdgeRef e{f, i};
        const EdgeRef p = faces[f].partner[i];
        if (e < p) c.gluings.push_back({e, p});
      }
    }
    return c;
  }
};

struct Piece {
  int origin;
  Point2 a;
  Point2 b;
  QSqrt2 s0;
  QSqrt2 s1;
};

std::vector<Piece> pieces_of(const Topology& t, const TracedSegment& s) {
  std::vector<Piece> out;
  const QSqrt2 uu = norm2(s.direction);
  QSqrt2 param;
  for (const TraceStep& st : s.steps) {
    const QSqrt2 len = dot(st.exit - st.entry, s.direction) / uu;
    if (len.is_zero()) continue;
    out.push_back({t.face_index(st.face), st.entry, st.exit, param, param + len});
    param += len;
  }
  return out;
}

struct Side {
  EdgeRef left;
  EdgeRef right;
};

// Breaks a path into pieces ending at every parameter in `cuts`.
std::vector<Piece> subdivide(const std::vector<Piece>& path, const std::vector<QSqrt2>& cuts, const Vec2& u) {
  std::vector<Piece> out;
  for (const Piece& p : path) {
    QSqrt2 s = p.s0;
    Point2 a = p.a;
    for (const QSqrt2& c : cuts) {
      if (c <= p.s0 || c >= p.s1) continue;
      const Point2 b = p.a + (c - p.s0) * u;
      out.push_back({p.origin, a, b, s, c});
      a = b;
      s = c;
    }
    out.push_back({p.origin, a, p.b, s, p.s1});
  }
  return out;
}

Side sides_of(Workspace& w, const Piece& p) {
  if (auto e = w.find_edge(p.origin, p.a, p.b)) return {*e, w.partner(*e)};
  if (auto e = w.find_edge(p.origin, p.b, p.a)) return {w.partner(*e), *e};
  throw std::logic_error("path piece is not an edge after refinement");
}

}  // namespace

FlatComplex slit_and_reglue(const Topology& t, const SaddleConnection& sc, const TracedSegment& twin) {
  if (!sc.closed || !sc.segment.complete) throw std::invalid_argument("surgery needs a closed saddle connection");
  if (twin.start.corner.face < 0 || t.class_of(twin.start.corner) != sc.segment.start_class ||
      twin.direction != sc.direction() || twin.start == sc.start() ||
      twin.param_length > sc.segment.param_length ||
      (twin.param_length < sc.segment.param_length && !twin.complete)) {
    throw NotATwin("segment is not a twin of the saddle connection");
  }
  if (twin.complete && twin.param_length < sc.segment.param_length) {
    throw TwinHitsSaddle("twin runs into a cone point");
  }
  if (half_turns(t, twin.start, sc.start(), Sense::Cw) != 2 && half_turns(t, twin.start, sc.start(), Sense::Ccw) != 2) {
    throw AngleNot2Pi("twin does not make angle 2pi with the saddle connection");
  }
  if (!path_is_embedded(t, twin) || !paths_interior_disjoint(t, sc.segment, twin)) {
    throw TwinNotEmbedded("twin is not embedded or meets the saddle connection");
  }

  const Vec2& u = sc.direction();
  const std::vector<Piece> gamma = pieces_of(t, sc.segment);
  const std::vector<Piece> eta = pieces_of(t, twin);
  Workspace w(t);

  // Chord endpoints become vertices; a twin ending inside a face is cut
  // through to the boundary so the cut still splits the face.
  std::vector<Piece> chords = gamma;
  chords.insert(chords.end(), eta.begin(), eta.end());
  std::optional<Point2> twin_end;
  {
    Piece& last = chords.back();
    if (w.vertex_index(last.origin, last.b) < 0 && w.edge_containing(last.origin, last.b) < 0) {
      const RayHit hit = ray_polygon_exit(w.faces[last.origin].v, last.b, u);
      twin_end = last.b;
      last.b = last.b + hit.t * u;
    }
  }
  for (const Piece& c : chords) {
    w.ensure_vertex(c.origin, c.a);
    w.ensure_vertex(c.origin, c.b);
  }
  for (const Piece& c : chords) w.cut(c.origin, c.a, c.b);

  std::set<QSqrt2> cut_set;
  for (const Piece& p : gamma) cut_set.insert(p.s1);
  for (const Piece& p : eta) cut_set.insert(p.s1);
  const std::vector<QSqrt2> cuts(cut_set.begin(), cut_set.end());
  const std::vector<Piece> g2 = subdivide(gamma, cuts, u);
  const std::vector<Piece> e2 = subdivide(eta, cuts, u);
  if (g2.size() != e2.size()) throw std::logic_error("paths subdivide differently");
  for (const std::vector<Piece>* path : {&g2, &e2}) {
    for (const Piece& p : *path) {
      w.ensure_vertex_in(p.origin, p.a);
      w.ensure_vertex_in(p.origin, p.b);
    }
  }
  if (twin_end) w.ensure_vertex_in(e2.back().origin, *twin_end);

  std::vector<Side> gs, es;
  for (const Piece& p : g2) gs.push_back(sides_of(w, p));
  for (const Piece& p : e2) es.push_back(sides_of(w, p));
  for (std::size_t k = 0; k < gs.size(); ++k) {
    w.glue(gs[k].left, es[k].right);
    w.glue(es[k].left, gs[k].right);
  }

  FlatComplex out = w.to_complex();
  const ValidationReport report = validate(out);
  if (report.has(Violation::Disconnected)) throw DisconnectedResult("surgery disconnected the surface");
  if (!report.ok()) throw InvalidComplex("surgery produced an invalid complex: " + report.summary(), report);
  return simplify(out);
}

FlatComplex slit_and_reglue(const FlatComplex& c, const SaddleConnection& sc, const TracedSegment& twin) {
  return slit_and_reglue(Topology(c), sc, twin);
}

// ---------------------------------------------------------------------------

namespace {

// Glues face g onto face f across edge (f, i); returns false if the union is
// not a simple polygon.
bool try_merge(Workspace& w, int f, int i) {
  const EdgeRef q = w.faces[f].partner[i];
  const int g = q.face, k = q.index;
  if (g == f) return false;
  const int nf = w.size(f), ng = w.size(g);
  const Vec2 tau = w.translation(f, i);
  std::vector<Point2> merged;
  for (int m = 1; m <= nf; ++m) merged.push_back(w.at(f, i + m));
  for (int m = 2; m < ng; ++m) merged.push_back(w.at(g, k + m) - tau);
  if (!polygon_is_simple(merged) || signed_area(merged).sign() <= 0) return false;

  WFace out;
  out.v = std::move(merged);
  out.origin = w.faces[f].origin;
  out.partner.assign(nf + ng - 2, EdgeRef{});
  auto map = [&](EdgeRef e) {
    if (e.face == f) return EdgeRef{f, (e.index - i - 1 + nf) % nf};
    if (e.face == g) return EdgeRef{f, nf - 1 + (e.index - k - 1 + ng) % ng};
    return e;
  };
  for (int m = 0; m < nf; ++m) {
    if (m != i) out.partner[map({f, m}).index] = w.faces[f].partner[m];
  }
  for (int m = 0; m < ng; ++m) {
    if (m != k) out.partner[map({g, m}).index] = w.faces[g].partner[m];
  }
  w.faces[f] = std::move(out);
  w.remap(map);
  w.remove_face(g);
  return true;
}

// Removes vertex r of face f; its two edges become one.
void drop_vertex(Workspace& w, int f, int r) {
  const int n = w.size(f);
  w.faces[f].v.erase(w.faces[f].v.begin() + r);
  w.faces[f].partner.erase(w.faces[f].partner.begin() + r);
  w.remap([&](EdgeRef e) {
    if (e.face != f) return e;
    if (r == 0) return EdgeRef{f, (e.index == 0 || e.index == n - 1) ? n - 2 : e.index - 1};
    if (e.index == r - 1 || e.index == r) return EdgeRef{f, r - 1};
    if (e.index > r) return EdgeRef{f, e.index - 1};
    return e;
  });
}

// Removes a flat regular vertex made of two straight corners.
bool try_straighten(Workspace& w, int f, int i) {
  const int n = w.size(f);
  if (n <= 3) return false;
  const Vec2 in = w.at(f, i) - w.at(f, i - 1);
  const Vec2 out = w.at(f, i + 1) - w.at(f, i);
  if (!same_direction(in, out)) return false;
  const EdgeRef e2 = w.faces[f].partner[i];
  const EdgeRef e1 = w.faces[f].partner[(i + n - 1) % n];
  const int g = e2.face;
  const int r = (e2.index + 1) % w.size(g);
  if (e1.face != g || e1.index != r) return false;
  if (w.size(g) - (g == f ? 2 : 1) < 3) return false;
  // Merged edges are found again by their start points.
  const Point2 af = w.at(f, i - 1);
  const Point2 ag = w.at(g, r - 1);
  drop_vertex(w, f, i);
  drop_vertex(w, g, g == f && r > i ? r - 1 : r);
  w.glue({f, w.vertex_index(f, af)}, {g, w.vertex_index(g, ag)});
  return true;
}

}  // namespace

FlatComplex simplify(const FlatComplex& c) {
  const Topology t(c);
  Workspace w(t);
  for (bool changed = true; changed;) {
    changed = false;
    for (int f = 0; f < static_cast<int>(w.faces.size()) && !changed; ++f) {
      for (int i = 0; i < w.size(f) && !changed; ++i) changed = try_merge(w, f, i);
    }
  }
  for (bool changed = true; changed;) {
    changed = false;
    for (int f = 0; f < static_cast<int>(w.faces.size()) && !changed; ++f) {
      for (int i = 0; i < w.size(f) && !changed; ++i) changed = try_straighten(w, f, i);
    }
  }
  FlatComplex out = w.to_complex();
  std::sort(out.gluings.begin(), out.gluings.end(),
            [](const Gluing& a, const Gluing& b) { return std::tie(a.first, a.second) < std::tie(b.first, b.second); });
  return out;
}

}  // namespace octfake
