#include "octfake/flat_complex.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>

namespace octfake {

namespace {

constexpr double kAngleSnapTolerance = 1e-9;

const char* violation_name(Violation v) {
  switch (v) {
    case Violation::TooFewVertices: return "TooFewVertices";
    case Violation::NonSimpleFace: return "NonSimpleFace";
    case Violation::NonPositiveArea: return "NonPositiveArea";
    case Violation::DuplicateFaceId: return "DuplicateFaceId";
    case Violation::BadEdgeRef: return "BadEdgeRef";
    case Violation::UnpairedEdge: return "UnpairedEdge";
    case Violation::EdgeGluedTwice: return "EdgeGluedTwice";
    case Violation::SelfGluedEdge: return "SelfGluedEdge";
    case Violation::NotParallel: return "NotParallel";
    case Violation::LengthMismatch: return "LengthMismatch";
    case Violation::OrientationMismatch: return "OrientationMismatch";
    case Violation::Disconnected: return "Disconnected";
    case Violation::BadConeAngle: return "BadConeAngle";
    case Violation::BadMark: return "BadMark";
  }
  return "Unknown";
}

std::string edge_name(const EdgeRef& e) {
  return "(" + std::to_string(e.face) + "," + std::to_string(e.index) + ")";
}

Vec2 face_edge(const Face& f, int i) {
  const auto n = f.vertices.size();
  return f.vertices[(i + 1) % n] - f.vertices[i];
}

}  // namespace

std::string to_string(Violation v) { return violation_name(v); }

bool ValidationReport::has(Violation v) const {
  for (const auto& issue : issues) {
    if (issue.kind == v) return true;
  }
  return false;
}

std::string ValidationReport::summary() const {
  if (issues.empty()) return "valid";
  std::ostringstream os;
  for (std::size_t i = 0; i < issues.size(); ++i) {
    if (i) os << "; ";
    os << violation_name(issues[i].kind) << ": " << issues[i].detail;
  }
  return os.str();
}

QSqrt2 signed_area(const std::vector<Point2>& polygon) {
  QSqrt2 twice;
  const auto n = polygon.size();
  for (std::size_t i = 0; i < n; ++i) twice += cross(polygon[i], polygon[(i + 1) % n]);
  return twice / QSqrt2(2);
}

ValidationReport validate(const FlatComplex& c) {
  ValidationReport report;
  auto add = [&](Violation v, std::string detail) { report.issues.push_back({v, std::move(detail)}); };

  std::map<int, int> index_of_id;
  for (std::size_t f = 0; f < c.faces.size(); ++f) {
    const Face& face = c.faces[f];
    const std::string name = "face " + std::to_string(face.id);
    if (!index_of_id.emplace(face.id, static_cast<int>(f)).second) add(Violation::DuplicateFaceId, name);
    if (face.vertices.size() < 3) {
      add(Violation::TooFewVertices, name);
      continue;
    }
    if (!polygon_is_simple(face.vertices)) add(Violation::NonSimpleFace, name);
    if (signed_area(face.vertices).sign() <= 0) add(Violation::NonPositiveArea, name);
  }

  // Edge usage counts, keyed by (face id, index).
  std::map<EdgeRef, int> uses;
  bool pairing_ok = true;
  auto edge_ok = [&](const EdgeRef& e) {
    auto it = index_of_id.find(e.face);
    if (it == index_of_id.end()) return false;
    const auto n = static_cast<int>(c.faces[it->second].vertices.size());
    return n >= 3 && e.index >= 0 && e.index < n;
  };
  for (const Gluing& g : c.gluings) {
    const bool ok_a = edge_ok(g.first);
    const bool ok_b = edge_ok(g.second);
    if (!ok_a || !ok_b) {
      add(Violation::BadEdgeRef, edge_name(ok_a ? g.second : g.first));
      pairing_ok = false;
      continue;
    }
    if (g.first == g.second) {
      add(Violation::SelfGluedEdge, edge_name(g.first));
      pairing_ok = false;
      ++uses[g.first];
      continue;
    }
    ++uses[g.first];
    ++uses[g.second];
    const Vec2 u = face_edge(c.faces[index_of_id[g.first.face]], g.first.index);
    const Vec2 v = face_edge(c.faces[index_of_id[g.second.face]], g.second.index);
    const std::string name = edge_name(g.first) + "~" + edge_name(g.second);
    if (!parallel(u, v)) {
      add(Violation::NotParallel, name);
      pairing_ok = false;
      continue;
    }
    if (norm2(u) != norm2(v)) {
      add(Violation::LengthMismatch, name);
      pairing_ok = false;
    }
    if (dot(u, v).sign() > 0) {
      add(Violation::OrientationMismatch, name);
      pairing_ok = false;
    }
  }
  for (const Face& face : c.faces) {
    for (int i = 0; i < static_cast<int>(face.vertices.size()); ++i) {
      const EdgeRef e{face.id, i};
      const auto it = uses.find(e);
      const int count = it == uses.end() ? 0 : it->second;
      if (count == 0) {
        add(Violation::UnpairedEdge, edge_name(e));
        pairing_ok = false;
      } else if (count > 1) {
        add(Violation::EdgeGluedTwice, edge_name(e));
        pairing_ok = false;
      }
    }
  }

  // Connectivity of the face gluing graph.
  if (!c.faces.empty()) {
    std::vector<std::vector<int>> adj(c.faces.size());
    for (const Gluing& g : c.gluings) {
      if (!edge_ok(g.first) || !edge_ok(g.second)) continue;
      const int a = index_of_id[g.first.face];
      const int b = index_of_id[g.second.face];
      adj[a].push_back(b);
      adj[b].push_back(a);
    }
    std::vector<char> seen(c.faces.size(), 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
      const int f = stack.back();
      stack.pop_back();
      for (int g : adj[f]) {
        if (!seen[g]) {
          seen[g] = 1;
          stack.push_back(g);
        }
      }
    }
    if (std::find(seen.begin(), seen.end(), 0) != seen.end()) {
      add(Violation::Disconnected, "face gluing graph has more than one component");
    }
  }

  for (const auto& [label, ref] : c.marks) {
    auto it = index_of_id.find(ref.face);
    if (it == index_of_id.end() || ref.index < 0 ||
        ref.index >= static_cast<int>(c.faces[it->second].vertices.size())) {
      add(Violation::BadMark, label);
    }
  }

  const bool faces_ok = !report.has(Violation::TooFewVertices) && !report.has(Violation::DuplicateFaceId);
  if (pairing_ok && faces_ok) {
    try {
      Topology topo(c);
    } catch (const ConeAngleNotMultipleOf2Pi& e) {
      add(Violation::BadConeAngle, e.what());
    }
  }
  return report;
}

// ---------------------------------------------------------------------------

Topology::Topology(const FlatComplex& c) : complex_(c) {
  const int nf = face_count();
  bool ok = true;
  for (int f = 0; f < nf; ++f) {
    if (!index_of_id_.emplace(complex_.faces[f].id, f).second || degree(f) < 3) ok = false;
  }
  partner_.resize(nf);
  for (int f = 0; f < nf && ok; ++f) partner_[f].assign(degree(f), EdgeRef{-1, -1});
  for (const Gluing& g : complex_.gluings) {
    if (!ok) break;
    auto a = index_of_id_.find(g.first.face);
    auto b = index_of_id_.find(g.second.face);
    if (a == index_of_id_.end() || b == index_of_id_.end()) {
      ok = false;
      break;
    }
    const EdgeRef ea{a->second, g.first.index};
    const EdgeRef eb{b->second, g.second.index};
    if (ea.index < 0 || ea.index >= degree(ea.face) || eb.index < 0 || eb.index >= degree(eb.face) ||
        ea == eb || partner_[ea.face][ea.index].face >= 0 || partner_[eb.face][eb.index].face >= 0 ||
        !(edge_vector(ea.face, ea.index) + edge_vector(eb.face, eb.index)).is_zero()) {
      ok = false;
      break;
    }
    partner_[ea.face][ea.index] = eb;
    partner_[eb.face][eb.index] = ea;
  }
  for (int f = 0; f < nf && ok; ++f) {
    for (const EdgeRef& e : partner_[f]) {
      if (e.face < 0) ok = false;
    }
  }
  if (!ok) {
    ValidationReport report = validate(c);
    throw InvalidComplex("invalid complex: " + report.summary(), std::move(report));
  }

  // Orbits of corners under ccw_next.
  class_of_.resize(nf);
  position_.resize(nf);
  for (int f = 0; f < nf; ++f) {
    class_of_[f].assign(degree(f), -1);
    position_[f].assign(degree(f), -1);
  }
  for (int f = 0; f < nf; ++f) {
    for (int v = 0; v < degree(f); ++v) {
      if (class_of_[f][v] >= 0) continue;
      const int cls = static_cast<int>(classes_.size());
      std::vector<Corner> orbit;
      Corner cur{f, v};
      do {
        class_of_[cur.face][cur.vertex] = cls;
        orbit.push_back(cur);
        cur = ccw_next(cur);
      } while (!(cur == Corner{f, v}));
      // Orbit discovered from its smallest corner, since scanning is ordered.
      VertexClass vc;
      double sum = 0.0;
      for (std::size_t k = 0; k < orbit.size(); ++k) {
        position_[orbit[k].face][orbit[k].vertex] = static_cast<int>(k);
        vc.members.push_back({complex_.faces[orbit[k].face].id, orbit[k].vertex});
        sum += corner_angle(*this, orbit[k]);
      }
      const double turns = sum / (2.0 * std::numbers::pi);
      const long k = std::lround(turns);
      if (k < 1 || std::abs(sum - 2.0 * std::numbers::pi * static_cast<double>(k)) > kAngleSnapTolerance) {
        std::ostringstream os;
        os.precision(17);
        os << "vertex class of face " << complex_.faces[f].id << " vertex " << v << " has angle sum " << sum;
        throw ConeAngleNotMultipleOf2Pi(os.str());
      }
      vc.total_angle_multiple = static_cast<int>(k);
      vc.order = static_cast<int>(k) - 1;
      vc.angle_sum = sum;
      classes_.push_back(std::move(vc));
      class_corners_.push_back(std::move(orbit));
    }
  }
}

int Topology::face_index(int id) const {
  auto it = index_of_id_.find(id);
  if (it == index_of_id_.end()) throw std::out_of_range("no face with id " + std::to_string(id));
  return it->second;
}

Vec2 Topology::edge_vector(int face, int i) const {
  return vertices(face)[next(face, i)] - vertices(face)[i];
}

Vec2 Topology::crossing_translation(int face, int i) const {
  const EdgeRef p = partner(face, i);
  return vertices(p.face)[next(p.face, p.index)] - vertices(face)[i];
}

Vec2 Topology::sector_start(Corner c) const { return edge_vector(c.face, c.vertex); }

Vec2 Topology::sector_end(Corner c) const {
  return vertices(c.face)[prev(c.face, c.vertex)] - point(c);
}

bool Topology::sector_contains(Corner c, const Vec2& dir) const {
  return in_half_open_sector(sector_start(c), sector_end(c), dir);
}

Corner Topology::ccw_next(Corner c) const {
  // Crossing the incoming edge lands on the corner whose outgoing edge it is.
  const EdgeRef p = partner(c.face, prev(c.face, c.vertex));
  return {p.face, p.index};
}

Corner Topology::cw_next(Corner c) const {
  const EdgeRef p = partner(c.face, c.vertex);
  return {p.face, next(p.face, p.index)};
}

std::vector<int> Topology::cone_classes() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < classes_.size(); ++i) {
    if (classes_[i].order > 0) out.push_back(static_cast<int>(i));
  }
  return out;
}

double corner_angle(const Topology& t, Corner c) {
  const auto [ax, ay] = to_double(t.sector_start(c));
  const auto [bx, by] = to_double(t.sector_end(c));
  double angle = std::atan2(ax * by - ay * bx, ax * bx + ay * by);
  if (angle <= 0.0) angle += 2.0 * std::numbers::pi;
  return angle;
}

// ---------------------------------------------------------------------------

std::vector<VertexClass> vertex_classes(const FlatComplex& c) { return Topology(c).classes(); }

QSqrt2 area(const FlatComplex& c) {
  QSqrt2 total;
  for (const Face& f : c.faces) total += signed_area(f.vertices);
  return total;
}

int genus(const FlatComplex& c) {
  const Topology t(c);
  const long chi = static_cast<long>(t.classes().size()) - static_cast<long>(c.gluings.size()) +
                   static_cast<long>(c.faces.size());
  if ((2 - chi) % 2 != 0) throw EulerMismatch("odd Euler characteristic " + std::to_string(chi));
  const long g = (2 - chi) / 2;
  long orders = 0;
  for (const VertexClass& vc : t.classes()) orders += vc.order;
  if (orders != 2 * g - 2) {
    throw EulerMismatch("Euler genus " + std::to_string(g) + " disagrees with cone orders summing to " +
                        std::to_string(orders));
  }
  return static_cast<int>(g);
}

std::vector<std::vector<Integer>> hermite_normal_form(std::vector<std::vector<Integer>> rows) {
  if (rows.empty()) return rows;
  const std::size_t cols = rows.front().size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
    // Euclid on column c among rows r.. until a single nonzero remains.
    for (;;) {
      std::size_t best = rows.size();
      for (std::size_t i = r; i < rows.size(); ++i) {
        if (rows[i][c] != 0 && (best == rows.size() || abs(rows[i][c]) < abs(rows[best][c]))) best = i;
      }
      if (best == rows.size()) break;
      std::swap(rows[r], rows[best]);
      bool done = true;
      for (std::size_t i = r + 1; i < rows.size(); ++i) {
        if (rows[i][c] == 0) continue;
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), rows[i][c].get_mpz_t(), rows[r][c].get_mpz_t());
        for (std::size_t k = c; k < cols; ++k) rows[i][k] -= q * rows[r][k];
        if (rows[i][c] != 0) done = false;
      }
      if (done) break;
    }
    if (rows[r][c] == 0) continue;
    if (rows[r][c] < 0) {
      for (auto& x : rows[r]) x = -x;
    }
    for (std::size_t i = 0; i < r; ++i) {
      Integer q;
      mpz_fdiv_q(q.get_mpz_t(), rows[i][c].get_mpz_t(), rows[r][c].get_mpz_t());
      if (q == 0) continue;
      for (std::size_t k = c; k < cols; ++k) rows[i][k] -= q * rows[r][k];
    }
    ++r;
  }
  rows.resize(r);
  return rows;
}

PeriodModule span_module(const std::vector<Vec2>& generators) {
  PeriodModule out;
  if (generators.empty()) return out;
  Integer den = 1;
  for (const Vec2& v : generators) {
    for (const Rational* q : {&v.x.a(), &v.x.b(), &v.y.a(), &v.y.b()}) {
      mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), q->get_den_mpz_t());
    }
  }
  std::vector<std::vector<Integer>> rows;
  for (const Vec2& v : generators) {
    std::vector<Integer> row;
    for (const Rational* q : {&v.x.a(), &v.x.b(), &v.y.a(), &v.y.b()}) {
      const Rational scaled = *q * Rational(den);
      row.push_back(scaled.get_num());
    }
    rows.push_back(std::move(row));
  }
  rows = hermite_normal_form(std::move(rows));
  Integer g = den;
  for (const auto& row : rows) {
    for (const auto& x : row) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
  }
  out.denominator = den / g;
  for (auto& row : rows) {
    for (auto& x : row) x /= g;
  }
  out.basis = std::move(rows);
  return out;
}

std::vector<Vec2> period_generators(const FlatComplex& c) {
  const Topology t(c);
  const int nf = t.face_count();
  std::vector<std::optional<Vec2>> offset(nf);
  std::set<std::pair<int, int>> tree_edges;
  offset[0] = Vec2{};
  std::queue<int> queue;
  queue.push(0);
  while (!queue.empty()) {
    const int f = queue.front();
    queue.pop();
    for (int i = 0; i < t.degree(f); ++i) {
      const EdgeRef p = t.partner(f, i);
      if (offset[p.face]) continue;
      offset[p.face] = *offset[f] - t.crossing_translation(f, i);
      tree_edges.insert({f, i});
      tree_edges.insert({p.face, p.index});
      queue.push(p.face);
    }
  }
  std::vector<Vec2> gens;
  for (int f = 0; f < nf; ++f) {
    for (int i = 0; i < t.degree(f); ++i) {
      const EdgeRef p = t.partner(f, i);
      if (tree_edges.count({f, i}) || std::pair{p.face, p.index} < std::pair{f, i}) continue;
      const Vec2 hol = *offset[f] - t.crossing_translation(f, i) - *offset[p.face];
      if (!hol.is_zero()) gens.push_back(hol);
    }
  }
  return gens;
}

PeriodModule absolute_period_module(const FlatComplex& c) { return span_module(period_generators(c)); }

std::string PeriodModule::to_string() const {
  std::ostringstream os;
  os << "1/" << denominator.get_str() << " * [";
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (i) os << "; ";
    for (std::size_t k = 0; k < basis[i].size(); ++k) os << (k ? " " : "") << basis[i][k].get_str();
  }
  os << "]";
  return os.str();
}

// ---------------------------------------------------------------------------

void to_json(nlohmann::json& j, const Point2& p) { j = nlohmann::json::array({p.x, p.y}); }

void from_json(const nlohmann::json& j, Point2& p) {
  if (!j.is_array() || j.size() != 2) throw ParseError("point must be a pair, got " + j.dump());
  p.x = j[0].get<QSqrt2>();
  p.y = j[1].get<QSqrt2>();
}

nlohmann::json save_surface(const FlatComplex& c) {
  nlohmann::json faces = nlohmann::json::array();
  for (const Face& f : c.faces) {
    faces.push_back({{"id", f.id}, {"vertices", f.vertices}});
  }
  nlohmann::json gluings = nlohmann::json::array();
  for (const Gluing& g : c.gluings) {
    gluings.push_back({{g.first.face, g.first.index}, {g.second.face, g.second.index}});
  }
  nlohmann::json marks = nlohmann::json::object();
  for (const auto& [label, ref] : c.marks) marks[label] = {ref.face, ref.index};
  return {{"faces", faces}, {"gluings", gluings}, {"marks", marks}};
}

std::string save_surface_text(const FlatComplex& c) { return save_surface(c).dump(1) + "\n"; }

namespace {

int parse_id(const nlohmann::json& j, const std::string& where) {
  if (j.is_number_integer()) return j.get<int>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    try {
      std::size_t used = 0;
      const int v = std::stoi(s, &used);
      if (used == s.size()) return v;
    } catch (const std::exception&) {
    }
  }
  throw ParseError(where + ": expected an integer id, got " + j.dump());
}

std::pair<int, int> parse_ref(const nlohmann::json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) throw ParseError(where + ": expected [faceId, index], got " + j.dump());
  return {parse_id(j[0], where), parse_id(j[1], where)};
}

}  // namespace

FlatComplex parse_surface(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("faces") || !j.contains("gluings")) {
    throw ParseError("surface must be an object with 'faces' and 'gluings'");
  }
  FlatComplex c;
  const auto& faces = j.at("faces");
  if (!faces.is_array()) throw ParseError("'faces' must be an array");
  for (std::size_t i = 0; i < faces.size(); ++i) {
    const std::string where = "faces[" + std::to_string(i) + "]";
    const auto& fj = faces[i];
    if (!fj.is_object() || !fj.contains("id") || !fj.contains("vertices") || !fj.at("vertices").is_array()) {
      throw ParseError(where + ": expected {id, vertices}");
    }
    Face f;
    f.id = parse_id(fj.at("id"), where + ".id");
    const auto& vs = fj.at("vertices");
    for (std::size_t k = 0; k < vs.size(); ++k) {
      try {
        f.vertices.push_back(vs[k].get<Point2>());
      } catch (const ParseError& e) {
        throw ParseError(where + ".vertices[" + std::to_string(k) + "]: " + e.what());
      }
    }
    c.faces.push_back(std::move(f));
  }
  const auto& gluings = j.at("gluings");
  if (!gluings.is_array()) throw ParseError("'gluings' must be an array");
  for (std::size_t i = 0; i < gluings.size(); ++i) {
    const std::string where = "gluings[" + std::to_string(i) + "]";
    const auto& gj = gluings[i];
    if (!gj.is_array() || gj.size() != 2) throw ParseError(where + ": expected a pair of edge refs");
    const auto [fa, ia] = parse_ref(gj[0], where);
    const auto [fb, ib] = parse_ref(gj[1], where);
    c.gluings.push_back({{fa, ia}, {fb, ib}});
  }
  if (j.contains("marks")) {
    const auto& mj = j.at("marks");
    if (!mj.is_object()) throw ParseError("'marks' must be an object");
    for (const auto& [label, ref] : mj.items()) {
      const auto [f, v] = parse_ref(ref, "marks." + label);
      c.marks[label] = {f, v};
    }
  }
  return c;
}

FlatComplex load_surface(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("JSON syntax error at byte ") + std::to_string(e.byte) + ": " + e.what());
  }
  FlatComplex c = parse_surface(j);
  ValidationReport report = validate(c);
  if (!report.ok()) throw InvalidComplex("surface failed validation: " + report.summary(), std::move(report));
  return c;
}

}  // namespace octfake
