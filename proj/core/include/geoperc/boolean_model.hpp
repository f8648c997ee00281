#pragma once

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "geoperc/fields.hpp"
#include "geoperc/geometry.hpp"
#include "geoperc/radial_distribution.hpp"
#include "geoperc/sampling.hpp"

namespace geoperc {

inline constexpr double kDefaultEpsLeak = 1e-6;

enum class Marking { geostatistical, iid };

/// Radii from a field realization (geostatistical) or from the quantile of
/// each point's uniform mark (i.i.d.).
using MarkingRule = std::variant<FieldRealization, RadialDistribution>;

/// Distance by which a window must be padded with Poisson points, and the
/// probability bound that a disc centred farther out still meets the window.
struct PadPlan {
  double distance = 0.0;
  double leakage_budget = 0.0;
};

/// Bounded laws pad by their supremum (budget 0). Otherwise the smallest d
/// with lambda * int_d^inf (perimeter + 2 pi t) P(R > t) dt <= eps_leak.
/// Throws ContractError when E[R^2] is infinite.
PadPlan plan_iid_padding(const RadialDistribution& radii, const Rect& window, double lambda,
                         double eps_leak);

/// Bounded fields pad by their supremum (budget 0). Unbounded cylinder
/// fields use the better of the marginal-tail bound above and a bound on the
/// expected number of far-reaching cylinders with value above d.
PadPlan plan_geostat_padding(const FieldSpec& field, const Rect& window, double lambda,
                             double eps_leak);

/// Discs of the occupied set that can meet `window`, with the intensity
/// mark of their centre kept alongside for monotone coupling in lambda.
class OccupiedRealization {
 public:
  OccupiedRealization(std::vector<Disc> discs, std::vector<double> intensity_marks, Rect window,
                      Rect padded_window, Marking marking, double lambda, double leakage_budget);

  std::span<const Disc> discs() const { return discs_; }
  std::span<const double> intensity_marks() const { return marks_; }
  const Rect& window() const { return window_; }
  const Rect& padded_window() const { return padded_window_; }
  Marking marking() const { return marking_; }
  double lambda() const { return lambda_; }
  double leakage_budget() const { return leakage_budget_; }

  /// The coupled realization at a smaller intensity.
  OccupiedRealization at_intensity(double lambda) const;

 private:
  std::vector<Disc> discs_;
  std::vector<double> marks_;
  Rect window_;
  Rect padded_window_;
  Marking marking_;
  double lambda_;
  double leakage_budget_;
};

/// Throws ContractError if the points do not cover the window padded as
/// the plan requires, or if the field window does not cover the points.
OccupiedRealization realize_occupied(const MarkedPointSet& points, double lambda,
                                     const MarkingRule& rule, const Rect& window,
                                     double eps_leak = kDefaultEpsLeak);

enum class Direction { horizontal, vertical };
enum class Phase { occupied, vacant };

/// horizontal = left-right crossing of rect, vertical = top-bottom.
struct CrossingQuery {
  Rect rect;
  Direction direction = Direction::horizontal;
  Phase phase = Phase::occupied;
};

/// Closed-disc test. Throws QueryError outside the window.
bool covers_point(const OccupiedRealization& occ, Point2 x);

/// Whether [0, s] x {0} is covered, by an exact interval sweep.
bool covers_segment(const OccupiedRealization& occ, double s);

struct AreaFraction {
  double fraction = 0.0;
  double standard_error = 0.0;
  std::size_t probes = 0;
};

/// Fraction of n_probe jittered-stratified probes of rect that are covered.
AreaFraction covered_area_fraction(const OccupiedRealization& occ, const Rect& rect,
                                   std::size_t n_probe, std::uint64_t seed);

/// Whether disc1 ∩ disc2 ∩ rect is nonempty (exact up to rounding).
bool clipped_adjacent(const Disc& d1, const Disc& d2, const Rect& rect);

/// Crossing of q.rect by the occupied set clipped to the rect (occupied
/// phase), or by its complement (vacant phase, via planar duality).
bool has_crossing(const OccupiedRealization& occ, const CrossingQuery& q);

/// Vacant crossing in q.direction: true iff no occupied crossing in the
/// perpendicular direction of the same rect.
bool has_vacant_crossing(const OccupiedRealization& occ, const CrossingQuery& q);

/// Whether the component of O ∩ B_inf(0, n) containing the origin meets the
/// boundary of that box.
bool origin_cluster_reaches(const OccupiedRealization& occ, double radius_n);

/// Smallest intensity at which the coupled occupied set crosses rect
/// left-right and top-bottom (+inf if not by occ.lambda()).
struct CrossingThresholds {
  double left_right;
  double top_bottom;
};
CrossingThresholds crossing_thresholds(const OccupiedRealization& occ, const Rect& rect);

/// Raster sandwich used as an independent oracle. For the occupied phase,
/// cells inside one disc (4-connected) prove a crossing and cells meeting
/// some disc (8-connected) bound it from above; the vacant phase swaps the
/// roles. Undecided instances are retried at resolution / 2, then reported
/// as uncertain.
Tristate grid_oracle_crossing(const OccupiedRealization& occ, const CrossingQuery& q,
                              double resolution);

}  // namespace geoperc
