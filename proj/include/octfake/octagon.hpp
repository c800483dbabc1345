#pragma once

// The octagon, its strip normal forms Oct_n, the closed-form systole data
// of the family, and the surgery iteration that produces it.

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "octfake/flat_complex.hpp"
#include "octfake/surgery.hpp"

namespace octfake {

struct DegenerateConfiguration : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotInOctFamily : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct BoundaryCase : std::logic_error {
  using std::logic_error::logic_error;
};

/// Coordinates of the strip presentation (unit-edge regular octagon).
struct StripGeometry {
  static QSqrt2 half_root() { return QSqrt2(0, Rational(1, 2)); }
  /// Length of the bottom circle B'D.
  static QSqrt2 circle() { return QSqrt2(2, 1); }
  /// Length of the top circle A'D'.
  static QSqrt2 top() { return QSqrt2(1, 1); }
  static QSqrt2 height() { return half_root(); }
  static Point2 B() { return {QSqrt2(1) + half_root(), half_root()}; }
  static Point2 C() { return {QSqrt2(2) + half_root(), half_root()}; }
};

/// Positions of P_n on [0, 2+sqrt2) and P'_n on [0, 1+sqrt2).
struct NormalForm {
  long n = 0;
  QSqrt2 P;
  QSqrt2 Pp;
};

struct StripPositions {
  QSqrt2 P;
  QSqrt2 Pp;

  friend bool operator==(const StripPositions&, const StripPositions&) = default;
};

FlatComplex octagon0();
NormalForm normal_form(long n);
/// The single-strip complex for the given positions. Marks name the strip
/// vertices (B', D, C, B, D', A', E) and the points P_prev, P, P'.
FlatComplex build_complex(const StripPositions& pos);
FlatComplex build_complex(const NormalForm& nf);
StripPositions extract_normal_form(const FlatComplex& c);
StripPositions extract_normal_form(const Topology& t);

/// The unit horizontal closed saddle connection, oriented rightward.
SaddleConnection unit_horizontal(const Topology& t);
/// Its twin on the requested side.
TracedSegment twin_on_side(const Topology& t, const SaddleConnection& sc, TwinSide side);

FlatComplex left_surgery(const FlatComplex& c);
/// Right surgery along the reversed unit saddle connection; undoes left_surgery.
FlatComplex right_surgery(const FlatComplex& c);
/// |k| left (k > 0) or right (k < 0) surgeries starting from the octagon.
FlatComplex left_iterate(long k);
/// Every iterate from 0 to k, in order (index i holds left_iterate(sign*i)).
std::vector<FlatComplex> iterate_sequence(long k);

// ---------------------------------------------------------------------------
// Closed forms

struct SystoleReport {
  /// 1, 2 or 3; 0 for the octagon.
  int family = 0;
  QSqrt2 sq_len;
  int count = 0;
  /// Labels such as "P_n-B", sorted.
  std::vector<std::string> endpoints;
};

SystoleReport systole_closed_form(long n);
/// The same report read off a geometric systole search on build_complex(n).
SystoleReport systole_geometric(long n);
/// Squared systole length from the closed form; 1 for n = 0.
QSqrt2 systole_sq(long n);

/// Partner set: indices m whose Oct_m has the systole
/// length of Oct_n. Six elements when the family-one representative x lies
/// in ((1+sqrt2)/2, 1+sqrt2/2), two when it lies in (1, (1+sqrt2)/2).
std::set<long> same_systole_partners(long n);
/// Family-one representative index and its position.
std::pair<long, QSqrt2> family_one_representative(long n);
std::set<long> brute_force_partners(long n, long window);

struct Approximation {
  long n = 0;
  double dist = 0.0;
  QSqrt2 dist_P;   // exact circle distance of P
  QSqrt2 dist_Pp;  // exact circle distance of P'
  bool reached = false;
};

/// Distance on R/(modulus Z) of two points, exactly.
QSqrt2 circle_distance(const QSqrt2& a, const QSqrt2& b, const QSqrt2& modulus);
/// First n in [-N, N] \ {m}, by increasing |n - m| then n, within eps of m;
/// otherwise the closest one found, with reached = false.
Approximation approximate(long m, double eps, long N);
/// 2/(2+sqrt2) + 1/(1+sqrt2) == 1, exactly.
bool density_relation_holds();

struct FakeReport {
  bool single_cone_point = false;
  bool genus_two = false;
  bool area_matches = false;
  bool periods_match = false;
  std::optional<StripPositions> normal_form;
  std::string extraction_error;
  int genus = 0;
  QSqrt2 area;

  bool invariants_pass() const { return single_cone_point && genus_two && area_matches && periods_match; }
  /// Same invariants as the octagon but not the octagon itself.
  bool is_fake() const;
};

FakeReport verify_fake(const FlatComplex& c);
nlohmann::json to_json(const FakeReport& r);
nlohmann::json to_json(const SystoleReport& r);

// ---------------------------------------------------------------------------
// Output

struct TableRow {
  NormalForm nf;
  SystoleReport systole;
  std::set<long> partners;
};

TableRow table_row(long n);
std::string table_csv(const std::vector<TableRow>& rows);
std::string table_text(const std::vector<TableRow>& rows);

/// SVG drawing of a complex: faces side by side, glued edge pairs share a
/// color, horizontal edges dashed, marks labelled.
std::string render_svg(const FlatComplex& c);

/// Canonical exact string and a 12-digit float.
std::string format_exact(const QSqrt2& x);
std::string format_float(const QSqrt2& x);

}  // namespace octfake
