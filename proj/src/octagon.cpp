#include "octfake/octagon.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace octfake {

namespace {

const QSqrt2 kS = StripGeometry::half_root();
const QSqrt2 kL = StripGeometry::circle();
const QSqrt2 kT = StripGeometry::top();

Point2 pt(const QSqrt2& x, const QSqrt2& y) { return {x, y}; }

int find_vertex(const Face& f, const Point2& p) {
  for (std::size_t i = 0; i < f.vertices.size(); ++i) {
    if (f.vertices[i] == p) return static_cast<int>(i);
  }
  return -1;
}

int find_edge_through(const Face& f, const Point2& p) {
  const int n = static_cast<int>(f.vertices.size());
  for (int i = 0; i < n; ++i) {
    const Point2& a = f.vertices[i];
    const Point2& b = f.vertices[(i + 1) % n];
    if (p != a && p != b && on_segment(a, b, p)) return i;
  }
  return -1;
}

}  // namespace

FlatComplex octagon0() {
  const QSqrt2 one(1);
  Face hex{0,
           {pt(0, 0), pt(1, 0), pt(one + kS, kS), pt(one + kS, one + kS), pt(-kS, one + kS), pt(-kS, kS)}};
  Face trap{1, {pt(0, 0), pt(kT, 0), pt(one + kS, kS), pt(kS, kS)}};
  FlatComplex c;
  c.faces = {hex, trap};
  // AB~C'F, CD~EB', A'E~D'F, BC~B'C', AD~A'D'
  c.gluings = {{{1, 3}, {0, 1}}, {{1, 1}, {0, 5}}, {{0, 4}, {0, 2}}, {{1, 2}, {0, 0}}, {{1, 0}, {0, 3}}};
  const char* hex_names[] = {"B'", "C'", "F", "D'", "A'", "E"};
  const char* trap_names[] = {"A", "D", "C", "B"};
  for (int i = 0; i < 6; ++i) c.marks[hex_names[i]] = {0, i};
  for (int i = 0; i < 4; ++i) c.marks[trap_names[i]] = {1, i};
  return c;
}

NormalForm normal_form(long n) {
  return {n, qs_mod(QSqrt2(n + 1), kL), qs_mod(QSqrt2(n), kT)};
}

FlatComplex build_complex(const NormalForm& nf) { return build_complex(StripPositions{nf.P, nf.Pp}); }

FlatComplex build_complex(const StripPositions& pos) {
  const QSqrt2& P = pos.P;
  const QSqrt2& Pp = pos.Pp;
  if (P.sign() < 0 || P >= kL) throw DegenerateConfiguration("P outside [0, 2+√2): " + P.to_string());
  if (Pp.sign() < 0 || Pp >= kT) throw DegenerateConfiguration("P' outside [0, 1+√2): " + Pp.to_string());
  const QSqrt2 one(1);
  const QSqrt2 Bx = one + kS;
  const QSqrt2 Cx = QSqrt2(2) + kS;
  const QSqrt2 top_y = one + kS;
  const QSqrt2 p1 = qs_mod(P - one, kL);
  const bool wraps = p1 > P;  // the segment glued to BC crosses B'~D

  // Breakpoints of the two paths identified with each other, by parameter.
  std::vector<QSqrt2> taus;
  for (const QSqrt2& tau : {kL - P, kT - Pp}) {
    if (tau.sign() > 0 && tau < kT) taus.push_back(tau);
  }
  std::set<QSqrt2> bottom{p1, P};
  std::set<QSqrt2> top{Pp};
  for (const QSqrt2& tau : taus) {
    bottom.insert(qs_mod(P + tau, kL));
    top.insert(qs_mod(Pp + tau, kT));
  }
  std::set<QSqrt2> bc;
  if (wraps) bc.insert(Bx + (kL - p1));

  Face f{0, {}};
  auto& v = f.vertices;
  v.push_back(pt(0, 0));
  for (const QSqrt2& x : bottom) {
    if (x.sign() > 0 && x < kL) v.push_back(pt(x, 0));
  }
  v.push_back(pt(kL, 0));
  v.push_back(pt(Cx, kS));
  for (auto it = bc.rbegin(); it != bc.rend(); ++it) {
    if (*it > Bx && *it < Cx) v.push_back(pt(*it, kS));
  }
  v.push_back(pt(Bx, kS));
  v.push_back(pt(Bx, top_y));
  for (auto it = top.rbegin(); it != top.rend(); ++it) {
    if (it->sign() > 0 && *it < kT) v.push_back(pt(-kS + *it, top_y));
  }
  v.push_back(pt(-kS, top_y));
  v.push_back(pt(-kS, kS));

  FlatComplex c;
  c.faces = {f};
  const int n = static_cast<int>(v.size());
  auto idx = [&](const Point2& p) {
    const int i = find_vertex(f, p);
    if (i < 0) throw std::logic_error("strip vertex missing");
    return i;
  };
  // Image of a bottom point under the gluing.
  auto image = [&](const QSqrt2& x) {
    const bool on_bc = wraps ? (x > p1 || x < P) : (x > p1 && x < P);
    if (on_bc) {
      const QSqrt2 along = x > p1 ? x - p1 : (kL - p1) + x;
      return pt(Bx + along, kS);
    }
    const QSqrt2 tau = qs_mod(x - P, kL);
    return pt(-kS + qs_mod(Pp + tau, kT), top_y);
  };
  for (int i = 0; i < n; ++i) {
    const Point2& a = v[i];
    const Point2& b = v[(i + 1) % n];
    if (!a.y.is_zero() || !b.y.is_zero()) continue;
    const Point2 mid{(a.x + b.x) * QSqrt2(Rational(1, 2)), 0};
    const int j = find_edge_through(f, image(mid.x));
    if (j < 0) throw DegenerateConfiguration("bottom edge has no partner");
    c.gluings.push_back({{0, i}, {0, j}});
  }
  c.gluings.push_back({{0, idx(pt(kL, 0))}, {0, idx(pt(-kS, kS))}});        // CD ~ EB'
  c.gluings.push_back({{0, idx(pt(Bx, kS))}, {0, idx(pt(-kS, top_y))}});   // BD' ~ A'E

  c.marks["B'"] = {0, 0};
  c.marks["D"] = {0, idx(pt(kL, 0))};
  c.marks["C"] = {0, idx(pt(Cx, kS))};
  c.marks["B"] = {0, idx(pt(Bx, kS))};
  c.marks["D'"] = {0, idx(pt(Bx, top_y))};
  c.marks["A'"] = {0, idx(pt(-kS, top_y))};
  c.marks["E"] = {0, idx(pt(-kS, kS))};
  c.marks["P"] = {0, idx(pt(P, 0))};
  c.marks["P_prev"] = {0, idx(pt(p1, 0))};
  c.marks["P'"] = {0, Pp.is_zero() ? idx(pt(-kS, top_y)) : idx(pt(-kS + Pp, top_y))};

  const ValidationReport r = validate(c);
  if (!r.ok()) throw DegenerateConfiguration("strip does not validate: " + r.summary());
  return c;
}

// ---------------------------------------------------------------------------

SaddleConnection unit_horizontal(const Topology& t) {
  const auto cones = t.cone_classes();
  if (cones.size() != 1 || t.classes()[cones[0]].order != 2) {
    throw NotInOctFamily("expected a single cone point of order 2");
  }
  const QSqrt2 long_sq = kT * kT;
  std::vector<SaddleConnection> unit;
  int long_count = 0;
  for (const Heading& h : headings_of(t, cones[0], Vec2{1, 0})) {
    const TracedSegment s = trace_from_heading(t, h, TraceLimit{long_sq, std::nullopt});
    if (!s.complete || s.end_class != s.start_class) throw NotInOctFamily("horizontal trace is not a closed saddle connection");
    if (s.sq_length == QSqrt2(1)) {
      unit.push_back({s, true});
    } else if (s.sq_length == long_sq) {
      ++long_count;
    } else {
      throw NotInOctFamily("unexpected horizontal saddle connection of squared length " + s.sq_length.to_string());
    }
  }
  if (unit.size() != 1 || long_count != 2) throw NotInOctFamily("horizontal saddle connections do not match the family");
  return unit.front();
}

TracedSegment twin_on_side(const Topology& t, const SaddleConnection& sc, TwinSide side) {
  const TwinSet ts = twins_of(t, sc);
  std::vector<const Twin*> found;
  for (const Twin& tw : ts.twins) {
    if (classify_twin(t, sc, tw.segment) == side) found.push_back(&tw);
  }
  if (found.size() != 1) throw std::logic_error("expected exactly one " + to_string(side) + " twin");
  return found.front()->segment;
}

StripPositions extract_normal_form(const FlatComplex& c) { return extract_normal_form(Topology(c)); }

StripPositions extract_normal_form(const Topology& t) {
  const SaddleConnection gamma = unit_horizontal(t);
  const Heading& he = gamma.end();
  const QSqrt2 far(12);
  StripPositions out;

  // Drop from the end of gamma to the bottom of the lower cylinder, then run
  // right along it to the first cone point.
  const Heading h1 = rotate_to(t, he, Vec2{1, -1}, Sense::Ccw);
  const TracedSegment down = trace_from_heading(t, h1, TraceLimit{std::nullopt, kS});
  if (down.param_length != kS) throw NotInOctFamily("lower cylinder is too short");
  if (down.complete) {
    out.P = *down.end == rotate_to(t, he, Vec2{-1, 1}, Sense::Cw) ? QSqrt2(0) : QSqrt2(1);
  } else {
    const TracedSegment run = trace_from_point(t, down.end_face, down.end_point, Vec2{1, 0}, TraceLimit{far, std::nullopt});
    if (!run.complete) throw NotInOctFamily("bottom circle has no cone point");
    out.P = *run.end == he ? run.param_length : run.param_length + QSqrt2(1);
  }

  // Climb the upper cylinder from the start of EF, then run right along its
  // top circle.
  const Heading ef = rotate_to(t, he, Vec2{1, 0}, Sense::Ccw);
  const Heading h2 = rotate_to(t, ef, Vec2{0, 1}, Sense::Ccw);
  const TracedSegment up = trace_from_heading(t, h2, TraceLimit{std::nullopt, QSqrt2(1)});
  if (up.param_length != QSqrt2(1)) throw NotInOctFamily("upper cylinder is too short");
  if (up.complete) {
    out.Pp = 0;
  } else {
    const TracedSegment run = trace_from_point(t, up.end_face, up.end_point, Vec2{1, 0}, TraceLimit{far, std::nullopt});
    if (!run.complete) throw NotInOctFamily("top circle has no cone point");
    out.Pp = run.param_length;
  }
  if (out.P >= kL || out.Pp >= kT) throw NotInOctFamily("marked positions out of range");
  return out;
}

FlatComplex left_surgery(const FlatComplex& c) {
  const Topology t(c);
  const SaddleConnection gamma = unit_horizontal(t);
  return slit_and_reglue(t, gamma, twin_on_side(t, gamma, TwinSide::Left));
}

FlatComplex right_surgery(const FlatComplex& c) {
  const Topology t(c);
  const SaddleConnection inv = reversed(t, unit_horizontal(t));
  return slit_and_reglue(t, inv, twin_on_side(t, inv, TwinSide::Right));
}

std::vector<FlatComplex> iterate_sequence(long k) {
  std::vector<FlatComplex> out{octagon0()};
  for (long i = 0; i < std::labs(k); ++i) {
    out.push_back(k > 0 ? left_surgery(out.back()) : right_surgery(out.back()));
  }
  return out;
}

FlatComplex left_iterate(long k) { return iterate_sequence(k).back(); }

// ---------------------------------------------------------------------------

namespace {

const QSqrt2 kHalf(Rational(1, 2));

// Family boundaries on the bottom circle.
const QSqrt2 kF1Hi = QSqrt2(1) + (QSqrt2(1) + QSqrt2::sqrt2()) * kHalf;  // 1+(1+√2)/2
const QSqrt2 kF2Hi = QSqrt2(2) + (QSqrt2(1) + QSqrt2::sqrt2()) * kHalf;  // 2+(1+√2)/2

QSqrt2 sq(const QSqrt2& dx) { return dx * dx + kHalf; }

int family_of(const QSqrt2& P) {
  if (P == QSqrt2(1) || P == kF1Hi || P == kF2Hi) {
    throw BoundaryCase("P on a family boundary: " + P.to_string());
  }
  if (P > QSqrt2(1) && P < kF1Hi) return 1;
  if (P > kF1Hi && P < kF2Hi) return 2;
  return 3;
}

}  // namespace

QSqrt2 circle_distance(const QSqrt2& a, const QSqrt2& b, const QSqrt2& modulus) {
  const QSqrt2 d = qs_mod(a - b, modulus);
  const QSqrt2 e = modulus - d;
  return d < e ? d : e;
}

SystoleReport systole_closed_form(long n) {
  SystoleReport r;
  if (n == 0) {
    r.family = 0;
    r.sq_len = 1;
    r.count = 4;
    return r;
  }
  const QSqrt2 P = normal_form(n).P;
  const QSqrt2 Bx = StripGeometry::B().x;
  const QSqrt2 Cx = StripGeometry::C().x;
  r.family = family_of(P);
  switch (r.family) {
    case 1:
      r.sq_len = sq(P - Bx);
      r.count = 1;
      r.endpoints = {"P_n-B"};
      break;
    case 2:
      // P_{n-1}P_nCB is a parallelogram: both sides have this length.
      r.sq_len = sq(P - Cx);
      if (sq(P - QSqrt2(1) - Bx) != r.sq_len) throw std::logic_error("parallelogram identity failed");
      r.count = 2;
      r.endpoints = {"P_n-C", "P_{n-1}-B"};
      break;
    default: {
      const QSqrt2 p1 = qs_mod(P - QSqrt2(1), kL);
      r.sq_len = sq(circle_distance(p1, Cx, kL));
      r.count = 1;
      r.endpoints = {"P_{n-1}-C"};
    }
  }
  std::sort(r.endpoints.begin(), r.endpoints.end());
  return r;
}

QSqrt2 systole_sq(long n) { return systole_closed_form(n).sq_len; }

namespace {

std::set<long> partners_of_representative(long c, const QSqrt2& x) {
  const QSqrt2 mid = (QSqrt2(1) + QSqrt2::sqrt2()) * kHalf;
  if (x > mid) return {c, -c, c + 1, -c - 1, c + 2, -c - 2};
  return {c, -c};
}

}  // namespace

SystoleReport systole_geometric(long n) {
  const NormalForm nf = normal_form(n);
  const FlatComplex c = build_complex(nf);
  const Topology t(c);
  const Systole s = systole(t);
  const QSqrt2 p1 = qs_mod(nf.P - QSqrt2(1), kL);
  auto label = [&](const Point2& p) -> std::string {
    if (p.y.is_zero() && p.x == nf.P) return "P_n";
    if (p.y.is_zero() && p.x == p1) return "P_{n-1}";
    if (p == StripGeometry::B()) return "B";
    if (p == StripGeometry::C() || p == Point2{-kS, kS}) return "C";
    return "?";
  };
  SystoleReport r;
  r.sq_len = s.sq_length;
  r.count = static_cast<int>(s.connections.size());
  for (const SaddleConnection& sc : s.connections) {
    std::string a = label(t.point(sc.start().corner));
    std::string b = label(t.point(sc.end().corner));
    if (a == "B" || a == "C") std::swap(a, b);
    r.endpoints.push_back(a + "-" + b);
  }
  std::sort(r.endpoints.begin(), r.endpoints.end());
  if (n == 0) {
    r.family = 0;
    r.endpoints.clear();
  } else {
    r.family = family_of(nf.P);
  }
  return r;
}

std::pair<long, QSqrt2> family_one_representative(long n) {
  if (n == 0) throw std::invalid_argument("the octagon has no family");
  const QSqrt2 hi = QSqrt2(1) + kS;
  for (long c : {n, -n - 2, n - 1, -n - 1, n - 2, -n}) {
    const QSqrt2 x = normal_form(c).P;
    if (c == 0 || !(x > QSqrt2(1) && x < hi)) continue;
    const std::set<long> s = partners_of_representative(c, x);
    if (s.count(n)) return {c, x};
  }
  throw std::logic_error("no family-one representative");
}

std::set<long> same_systole_partners(long n) {
  const auto [c, x] = family_one_representative(n);
  return partners_of_representative(c, x);
}

std::set<long> brute_force_partners(long n, long window) {
  const QSqrt2 target = systole_sq(n);
  std::set<long> out;
  for (long m = -window; m <= window; ++m) {
    if (m != 0 && systole_sq(m) == target) out.insert(m);
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

double circle_distance_float(double a, double m) {
  double d = std::fmod(a, m);
  if (d < 0) d += m;
  return std::min(d, m - d);
}

}  // namespace

Approximation approximate(long m, double eps, long N) {
  if (!(eps > 0)) throw std::invalid_argument("eps must be positive");
  if (N < 1) throw std::invalid_argument("N must be at least 1");
  const double L = kL.to_double();
  const double T = kT.to_double();
  // P_n - P_m = n - m on both circles.
  auto dist = [&](long n) {
    const double k = static_cast<double>(n - m);
    return std::max(circle_distance_float(k, L), circle_distance_float(k, T));
  };
  std::optional<long> best;
  double best_d = 0;
  std::optional<long> hit;
  for (long r = 1; r <= 2 * N && !hit; ++r) {
    for (long n : {m - r, m + r}) {
      if (n < -N || n > N) continue;
      const double d = dist(n);
      if (!best || d < best_d) {
        best = n;
        best_d = d;
      }
      if (d < eps) {
        hit = n;
        break;
      }
    }
  }
  if (!best) throw std::invalid_argument("search range holds no candidate");
  Approximation a;
  a.n = hit ? *hit : *best;
  const NormalForm x = normal_form(a.n);
  const NormalForm y = normal_form(m);
  a.dist_P = circle_distance(x.P, y.P, kL);
  a.dist_Pp = circle_distance(x.Pp, y.Pp, kT);
  const QSqrt2 exact = a.dist_P < a.dist_Pp ? a.dist_Pp : a.dist_P;
  a.dist = exact.to_double();
  a.reached = exact < QSqrt2(Rational(eps));
  return a;
}

bool density_relation_holds() {
  return QSqrt2(2) / kL + QSqrt2(1) / kT == QSqrt2(1);
}

// ---------------------------------------------------------------------------

bool FakeReport::is_fake() const {
  if (!invariants_pass()) return false;
  return !(normal_form && *normal_form == StripPositions{QSqrt2(1), QSqrt2(0)});
}

FakeReport verify_fake(const FlatComplex& c) {
  static const PeriodModule reference = absolute_period_module(octagon0());
  FakeReport r;
  const Topology t(c);
  int cones = 0;
  bool orders_ok = true;
  for (const VertexClass& v : t.classes()) {
    if (v.order > 0) {
      ++cones;
      orders_ok = orders_ok && v.order == 2;
    }
  }
  r.single_cone_point = cones == 1 && orders_ok;
  r.genus = genus(c);
  r.genus_two = r.genus == 2;
  r.area = area(c);
  r.area_matches = r.area == QSqrt2(2, 2);
  r.periods_match = absolute_period_module(c) == reference;
  try {
    r.normal_form = extract_normal_form(t);
  } catch (const NotInOctFamily& e) {
    r.extraction_error = e.what();
  }
  return r;
}

nlohmann::json to_json(const FakeReport& r) {
  nlohmann::json j = {{"single_cone_point", r.single_cone_point},
                      {"genus", r.genus},
                      {"genus_two", r.genus_two},
                      {"area", r.area.to_string()},
                      {"area_matches", r.area_matches},
                      {"periods_match", r.periods_match},
                      {"invariants_pass", r.invariants_pass()},
                      {"is_fake", r.is_fake()}};
  if (r.normal_form) {
    j["P"] = r.normal_form->P.to_string();
    j["Pp"] = r.normal_form->Pp.to_string();
  } else {
    j["extraction_error"] = r.extraction_error;
  }
  return j;
}

nlohmann::json to_json(const SystoleReport& r) {
  return {{"family", r.family},
          {"sq_len", r.sq_len.to_string()},
          {"sq_len_float", format_float(r.sq_len)},
          {"count", r.count},
          {"endpoints", r.endpoints}};
}

// ---------------------------------------------------------------------------

std::string format_exact(const QSqrt2& x) { return x.to_string(); }

std::string format_float(const QSqrt2& x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12f", x.to_double());
  return buf;
}

TableRow table_row(long n) {
  TableRow r;
  r.nf = normal_form(n);
  r.systole = systole_closed_form(n);
  if (n != 0) r.partners = same_systole_partners(n);
  return r;
}

namespace {

std::string join(const std::set<long>& s, const char* sep) {
  std::string out;
  for (long m : s) {
    if (!out.empty()) out += sep;
    out += std::to_string(m);
  }
  return out;
}

std::vector<std::vector<std::string>> table_cells(const std::vector<TableRow>& rows) {
  std::vector<std::vector<std::string>> cells{
      {"n", "P", "P_float", "Pp", "Pp_float", "family", "systole_sq", "systole_sq_float", "count", "partners"}};
  for (const TableRow& r : rows) {
    cells.push_back({std::to_string(r.nf.n), format_exact(r.nf.P), format_float(r.nf.P), format_exact(r.nf.Pp),
                     format_float(r.nf.Pp), std::to_string(r.systole.family), format_exact(r.systole.sq_len),
                     format_float(r.systole.sq_len), std::to_string(r.systole.count), join(r.partners, " ")});
  }
  return cells;
}

}  // namespace

std::string table_csv(const std::vector<TableRow>& rows) {
  std::ostringstream os;
  for (const auto& line : table_cells(rows)) {
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (i) os << ',';
      const bool quote = line[i].find_first_of(", ") != std::string::npos;
      os << (quote ? "\"" + line[i] + "\"" : line[i]);
    }
    os << '\n';
  }
  return os.str();
}

std::string table_text(const std::vector<TableRow>& rows) {
  const auto cells = table_cells(rows);
  std::vector<std::size_t> width(cells.front().size(), 0);
  // Exact values contain the two-byte-wide UTF-8 root sign; pad by code points.
  auto length = [](const std::string& s) {
    std::size_t n = 0;
    for (unsigned char ch : s) n += (ch & 0xC0) != 0x80;
    return n;
  };
  for (const auto& line : cells) {
    for (std::size_t i = 0; i < line.size(); ++i) width[i] = std::max(width[i], length(line[i]));
  }
  std::ostringstream os;
  for (const auto& line : cells) {
    std::string row;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (i) row += "  ";
      row += line[i];
      if (i + 1 < line.size()) row += std::string(width[i] - length(line[i]), ' ');
    }
    os << row << '\n';
  }
  return os.str();
}

// ---------------------------------------------------------------------------

std::string render_svg(const FlatComplex& c) {
  constexpr double kScale = 100.0;
  constexpr double kMargin = 40.0;
  const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
                           "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  // Faces are laid out left to right by their bounding boxes.
  std::vector<double> shift_x;
  double cursor = kMargin;
  double max_y = 0, min_y = 0;
  for (const Face& f : c.faces) {
    double lo = 1e300, hi = -1e300;
    for (const Point2& p : f.vertices) {
      const auto [x, y] = to_double(p);
      lo = std::min(lo, x);
      hi = std::max(hi, x);
      max_y = std::max(max_y, y);
      min_y = std::min(min_y, y);
    }
    shift_x.push_back(cursor - lo * kScale);
    cursor += (hi - lo) * kScale + kMargin;
  }
  const double height = (max_y - min_y) * kScale + 2 * kMargin;
  auto X = [&](int face, double x) { return shift_x[face] + x * kScale; };
  auto Y = [&](double y) { return kMargin + (max_y - y) * kScale; };

  std::map<EdgeRef, int> color;
  for (std::size_t g = 0; g < c.gluings.size(); ++g) {
    color[c.gluings[g].first] = static_cast<int>(g);
    color[c.gluings[g].second] = static_cast<int>(g);
  }
  std::ostringstream os;
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.1f\" height=\"%.1f\" viewBox=\"0 0 %.1f %.1f\">\n",
                cursor, height, cursor, height);
  os << buf;
  for (std::size_t fi = 0; fi < c.faces.size(); ++fi) {
    const Face& f = c.faces[fi];
    const int n = static_cast<int>(f.vertices.size());
    os << "<polygon fill=\"#f4f4f4\" stroke=\"none\" points=\"";
    for (const Point2& p : f.vertices) {
      const auto [x, y] = to_double(p);
      std::snprintf(buf, sizeof buf, "%.2f,%.2f ", X(static_cast<int>(fi), x), Y(y));
      os << buf;
    }
    os << "\"/>\n";
    for (int i = 0; i < n; ++i) {
      const auto [x0, y0] = to_double(f.vertices[i]);
      const auto [x1, y1] = to_double(f.vertices[(i + 1) % n]);
      const auto it = color.find({f.id, i});
      const int g = it == color.end() ? 0 : it->second;
      const bool horizontal = f.vertices[i].y == f.vertices[(i + 1) % n].y;
      std::snprintf(buf, sizeof buf,
                    "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"%s\" stroke-width=\"3\"%s/>\n",
                    X(static_cast<int>(fi), x0), Y(y0), X(static_cast<int>(fi), x1), Y(y1), palette[g % 10],
                    horizontal ? " stroke-dasharray=\"8,4\"" : "");
      os << buf;
    }
  }
  for (const auto& [label, ref] : c.marks) {
    int fi = -1;
    for (std::size_t k = 0; k < c.faces.size(); ++k) {
      if (c.faces[k].id == ref.face) fi = static_cast<int>(k);
    }
    if (fi < 0 || ref.index >= static_cast<int>(c.faces[fi].vertices.size())) continue;
    const auto [x, y] = to_double(c.faces[fi].vertices[ref.index]);
    std::snprintf(buf, sizeof buf,
                  "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"4\" fill=\"black\"/><text x=\"%.2f\" y=\"%.2f\" "
                  "font-size=\"14\">%s</text>\n",
                  X(fi, x), Y(y), X(fi, x) + 5, Y(y) - 6, label.c_str());
    os << buf;
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace octfake
