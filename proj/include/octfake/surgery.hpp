#pragma once

// Straight-line tracing on flat complexes, saddle connections and their
// twins, and the slit-and-reglue surgery along a closed saddle connection
// and one of its twins.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "octfake/flat_complex.hpp"

namespace octfake {

struct NotAConePoint : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct AmbiguousWedge : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SearchBudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotATwin : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct TwinNotEmbedded : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct AngleNot2Pi : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct TwinHitsSaddle : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DisconnectedResult : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An angular position at a vertex: a corner together with a direction in
/// its half-open sector [sector_start, sector_end). The direction is kept
/// normalized, so equal positions compare equal.
struct Heading {
  Corner corner;
  Vec2 dir;

  friend bool operator==(const Heading&, const Heading&) = default;
};

enum class Sense { Ccw, Cw };

/// Canonical heading for a direction in the closed sector of a corner.
Heading make_heading(const Topology& t, Corner c, const Vec2& dir);
/// First heading with direction `dir` strictly after `from`, turning in `sense`.
Heading rotate_to(const Topology& t, const Heading& from, const Vec2& dir, Sense sense);
/// Angle from `from` to `to` in multiples of pi, turning in `sense`. The two
/// directions must be parallel. Zero when the headings coincide.
int half_turns(const Topology& t, const Heading& from, const Heading& to, Sense sense);
/// All headings of a direction around a vertex class, in counterclockwise
/// order of the class corners.
std::vector<Heading> headings_of(const Topology& t, int vertex_class, const Vec2& dir);
/// Total order used for deterministic output.
bool heading_less(const Topology& t, const Heading& a, const Heading& b);

struct TraceStep {
  int face = 0;  // face id
  Point2 entry;
  Point2 exit;

  friend bool operator==(const TraceStep&, const TraceStep&) = default;
};

struct TracedSegment {
  int start_class = -1;
  Heading start;
  /// Position of the start corner among its class's corners.
  int wedge = 0;
  /// Normalized direction; displacement = param_length * direction.
  Vec2 direction;
  std::vector<TraceStep> steps;
  QSqrt2 param_length;
  QSqrt2 sq_length;
  /// Ended on a cone point.
  bool complete = false;
  /// Stopped by the length budget before reaching a cone point.
  bool truncated = false;
  /// Arrival heading (direction -direction) when complete.
  std::optional<Heading> end;
  int end_class = -1;
  /// Last position (face position and chart point).
  int end_face = -1;
  Point2 end_point;
};

struct SaddleConnection {
  TracedSegment segment;
  bool closed = false;

  const QSqrt2& sq_length() const { return segment.sq_length; }
  const Vec2& direction() const { return segment.direction; }
  const Heading& start() const { return segment.start; }
  const Heading& end() const { return *segment.end; }
};

/// Tracing limit: either a squared length or an exact parameter bound on
/// the (normalized) direction.
struct TraceLimit {
  std::optional<QSqrt2> max_sq_len;
  std::optional<QSqrt2> max_param;
};

TracedSegment trace_from_heading(const Topology& t, const Heading& start, const TraceLimit& limit);
/// Traces from an arbitrary point of a face (face position), e.g. a regular
/// point. The result has start_class = -1 unless the point is a vertex.
TracedSegment trace_from_point(const Topology& t, int face, const Point2& p, const Vec2& dir,
                               const TraceLimit& limit);

/// Traces from the cone point `vertex_class` in `direction`, leaving through
/// the corner at position `wedge` of the class.
TracedSegment trace_from_cone(const Topology& t, int vertex_class, const Vec2& direction, int wedge,
                              const QSqrt2& max_sq_len);
TracedSegment trace_from_cone(const FlatComplex& c, int vertex_class, const Vec2& direction, int wedge,
                              const QSqrt2& max_sq_len);

/// Every saddle connection of squared length <= max_sq_len, one per
/// unoriented segment, ordered by squared length then direction.
std::vector<SaddleConnection> saddle_connections_up_to(const Topology& t, const QSqrt2& max_sq_len);
std::vector<SaddleConnection> saddle_connections_up_to(const FlatComplex& c, const QSqrt2& max_sq_len);

struct Systole {
  QSqrt2 sq_length;
  std::vector<SaddleConnection> connections;
};
Systole systole(const Topology& t);
Systole systole(const FlatComplex& c);

/// The saddle connection leaving `start`, traced to its first cone point.
std::optional<SaddleConnection> saddle_from(const Topology& t, const Heading& start, const QSqrt2& max_sq_len);
SaddleConnection reversed(const Topology& t, const SaddleConnection& sc);

struct Twin {
  TracedSegment segment;
  /// Twin number j: its start makes angle 2*pi*j counterclockwise with the base.
  int turns = 0;
  bool hits_saddle = false;
  bool embedded = false;
};

struct TwinSet {
  SaddleConnection base;
  std::vector<Twin> twins;
};

/// No point of the path is visited twice.
bool path_is_embedded(const Topology& t, const TracedSegment& s);
/// Neither path passes through an interior point of the other.
bool paths_interior_disjoint(const Topology& t, const TracedSegment& a, const TracedSegment& b);

TwinSet twins_of(const Topology& t, const SaddleConnection& sc);

enum class TwinSide { Left, Right };
std::string to_string(TwinSide s);

/// Left iff the clockwise angle from the end of sc to the start of the twin is pi.
TwinSide classify_twin(const Topology& t, const SaddleConnection& sc, const TracedSegment& twin);

struct AdmissibilityReport {
  bool twin_to_start_2pi = false;
  bool end_to_twin_pi = false;
  bool continuation_bounds_cylinder = false;
  bool embedded = false;

  bool all() const { return twin_to_start_2pi && end_to_twin_pi && continuation_bounds_cylinder && embedded; }
};

AdmissibilityReport surgery_admissible(const Topology& t, const SaddleConnection& sc, const TracedSegment& twin);

/// Cuts along the closed saddle connection and the twin and reglues the four
/// sides crosswise. The result is simplified and renumbered.
FlatComplex slit_and_reglue(const Topology& t, const SaddleConnection& sc, const TracedSegment& twin);
FlatComplex slit_and_reglue(const FlatComplex& c, const SaddleConnection& sc, const TracedSegment& twin);

/// Merges faces across gluings while the union stays a simple polygon, and
/// drops straight regular vertices. Ids are renumbered 0..n-1.
FlatComplex simplify(const FlatComplex& c);

nlohmann::json trace_to_json(const TracedSegment& s);

/// Work cap for searches; reads OCT_SEARCH_BUDGET, default 5,000,000 steps.
long search_budget();

}  // namespace octfake
