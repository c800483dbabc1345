#pragma once

// Translation surfaces as Euclidean polygons glued edge-to-edge by
// translations, and their intrinsic invariants.

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "octfake/exact_field.hpp"
#include "octfake/geometry.hpp"

namespace octfake {

/// A polygon in its own chart, vertices counterclockwise.
struct Face {
  int id = 0;
  std::vector<Point2> vertices;

  friend bool operator==(const Face&, const Face&) = default;
};

/// Edge `index` of a face runs from vertex index to vertex index + 1.
struct EdgeRef {
  int face = 0;
  int index = 0;

  friend auto operator<=>(const EdgeRef&, const EdgeRef&) = default;
};

struct Gluing {
  EdgeRef first;
  EdgeRef second;

  friend bool operator==(const Gluing&, const Gluing&) = default;
};

struct VertexRef {
  int face = 0;
  int index = 0;

  friend auto operator<=>(const VertexRef&, const VertexRef&) = default;
};

struct FlatComplex {
  std::vector<Face> faces;
  std::vector<Gluing> gluings;
  std::map<std::string, VertexRef> marks;

  friend bool operator==(const FlatComplex&, const FlatComplex&) = default;
};

// ---------------------------------------------------------------------------
// Validation

enum class Violation {
  TooFewVertices,
  NonSimpleFace,
  NonPositiveArea,
  DuplicateFaceId,
  BadEdgeRef,
  UnpairedEdge,
  EdgeGluedTwice,
  SelfGluedEdge,
  NotParallel,
  LengthMismatch,
  OrientationMismatch,
  Disconnected,
  BadConeAngle,
  BadMark,
};

std::string to_string(Violation v);

struct ValidationIssue {
  Violation kind;
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;

  bool ok() const { return issues.empty(); }
  bool has(Violation v) const;
  std::string summary() const;
};

ValidationReport validate(const FlatComplex& c);

struct InvalidComplex : std::runtime_error {
  InvalidComplex(const std::string& what, ValidationReport r)
      : std::runtime_error(what), report(std::move(r)) {}
  ValidationReport report;
};

struct ConeAngleNotMultipleOf2Pi : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EulerMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Combinatorics

/// A polygon corner, by face position (not id) and vertex index.
struct Corner {
  int face = 0;
  int vertex = 0;

  friend auto operator<=>(const Corner&, const Corner&) = default;
};

struct VertexClass {
  /// Corners as (face id, vertex index), in counterclockwise order around
  /// the point, starting from the smallest.
  std::vector<VertexRef> members;
  /// Total angle is 2*pi*total_angle_multiple.
  int total_angle_multiple = 1;
  /// Cone order d = total_angle_multiple - 1; zero for a regular point.
  int order = 0;
  /// Unsnapped numeric angle sum, for reporting.
  double angle_sum = 0.0;
};

/// Gluing structure of a complex whose pairing checks pass. Indices are face
/// positions in the complex; ids only appear at the public edges.
class Topology {
 public:
  /// Throws InvalidComplex when edges are not paired one-to-one by opposite
  /// vectors, and ConeAngleNotMultipleOf2Pi on a failed angle snap.
  explicit Topology(const FlatComplex& c);

  const FlatComplex& complex() const { return complex_; }
  int face_count() const { return static_cast<int>(complex_.faces.size()); }
  int face_index(int id) const;
  int degree(int face) const { return static_cast<int>(complex_.faces[face].vertices.size()); }
  const std::vector<Point2>& vertices(int face) const { return complex_.faces[face].vertices; }
  const Point2& point(Corner c) const { return complex_.faces[c.face].vertices[c.vertex]; }
  int next(int face, int i) const { return (i + 1) % degree(face); }
  int prev(int face, int i) const { return (i + degree(face) - 1) % degree(face); }

  Vec2 edge_vector(int face, int i) const;
  /// Partner edge, as (face position, index).
  EdgeRef partner(int face, int i) const { return partner_[face][i]; }
  /// Adds this to a point of edge (face, i) to get the same point in the
  /// partner face's chart.
  Vec2 crossing_translation(int face, int i) const;

  /// First direction of the corner's sector (along the outgoing edge).
  Vec2 sector_start(Corner c) const;
  /// Last direction of the sector (back along the incoming edge), exclusive.
  Vec2 sector_end(Corner c) const;
  bool sector_contains(Corner c, const Vec2& dir) const;
  /// Neighbouring corner counterclockwise around the shared point.
  Corner ccw_next(Corner c) const;
  Corner cw_next(Corner c) const;

  int class_of(Corner c) const { return class_of_[c.face][c.vertex]; }
  const std::vector<VertexClass>& classes() const { return classes_; }
  /// Corners of a class in counterclockwise order.
  const std::vector<Corner>& class_corners(int cls) const { return class_corners_[cls]; }
  int position_in_class(Corner c) const { return position_[c.face][c.vertex]; }
  bool is_cone(Corner c) const { return classes_[class_of(c)].order > 0; }
  std::vector<int> cone_classes() const;

 private:
  FlatComplex complex_;
  std::map<int, int> index_of_id_;
  std::vector<std::vector<EdgeRef>> partner_;
  std::vector<std::vector<int>> class_of_;
  std::vector<std::vector<int>> position_;
  std::vector<std::vector<Corner>> class_corners_;
  std::vector<VertexClass> classes_;
};

/// Interior angle of a corner in radians, in (0, 2pi). Numeric only.
double corner_angle(const Topology& t, Corner c);

// ---------------------------------------------------------------------------
// Invariants

std::vector<VertexClass> vertex_classes(const FlatComplex& c);
QSqrt2 signed_area(const std::vector<Point2>& polygon);
QSqrt2 area(const FlatComplex& c);
int genus(const FlatComplex& c);

/// Z-module of absolute periods. Each row holds the coordinates of a period
/// over the basis {1, sqrt2, i, i*sqrt2}, multiplied by `denominator`.
struct PeriodModule {
  Integer denominator = 1;
  std::vector<std::vector<Integer>> basis;

  int rank() const { return static_cast<int>(basis.size()); }
  friend bool operator==(const PeriodModule&, const PeriodModule&) = default;
  std::string to_string() const;
};

/// Row-style Hermite normal form of an integer matrix, zero rows removed.
std::vector<std::vector<Integer>> hermite_normal_form(std::vector<std::vector<Integer>> rows);

/// Canonical module spanned by the given plane vectors.
PeriodModule span_module(const std::vector<Vec2>& generators);
/// Holonomy vectors of one loop per non-tree gluing.
std::vector<Vec2> period_generators(const FlatComplex& c);
PeriodModule absolute_period_module(const FlatComplex& c);

// ---------------------------------------------------------------------------
// Interchange format

nlohmann::json save_surface(const FlatComplex& c);
std::string save_surface_text(const FlatComplex& c);
/// Parses without semantic checks; throws ParseError on malformed input.
FlatComplex parse_surface(const nlohmann::json& j);
/// Parses and validates; throws ParseError or InvalidComplex.
FlatComplex load_surface(const std::string& text);

void to_json(nlohmann::json& j, const Point2& p);
void from_json(const nlohmann::json& j, Point2& p);

}  // namespace octfake
