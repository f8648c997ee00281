#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "geoperc/geometry.hpp"

namespace geoperc {

/// A point of the Poisson process on R^2 x [0, lambda_max] x [0, 1].
///
/// `intensity_mark` realizes the monotone coupling across intensities: the
/// process at intensity lambda is the set of points with intensity_mark <=
/// lambda. `uniform_mark` is the independent uniform used for i.i.d. radii.
struct MarkedPoint {
  Point2 location;
  double intensity_mark = 0.0;
  double uniform_mark = 0.0;

  friend bool operator==(const MarkedPoint&, const MarkedPoint&) = default;
};

/// Immutable realization of the marked Poisson process on a rectangle.
/// Points are sorted lexicographically by location.
class MarkedPointSet {
 public:
  MarkedPointSet(Rect region, double lambda_max, std::vector<MarkedPoint> points,
                 std::uint64_t seed);

  const Rect& region() const { return region_; }
  double lambda_max() const { return lambda_max_; }
  std::uint64_t seed() const { return seed_; }
  std::span<const MarkedPoint> points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }

  friend bool operator==(const MarkedPointSet&, const MarkedPointSet&) = default;

 private:
  Rect region_;
  double lambda_max_;
  std::vector<MarkedPoint> points_;
  std::uint64_t seed_;
};

/// A line l(theta, x): the line perpendicular to the ray at angle theta, at
/// distance `distance` from the origin, with an independent uniform mark.
struct MarkedLine {
  double theta = 0.0;
  double distance = 0.0;
  double uniform_mark = 0.0;

  Point2 normal() const;
  /// Signed offset of p from the line along its normal.
  double signed_offset(Point2 p) const;
  double distance_to(Point2 p) const;

  friend bool operator==(const MarkedLine&, const MarkedLine&) = default;
};

/// Homogeneous Poisson process of intensity lambda_max on `region`, with
/// intensity marks uniform on (0, lambda_max] and uniform marks on [0, 1).
MarkedPointSet sample_marked_points(double lambda_max, const Rect& region, std::uint64_t seed);

/// The sub-process {intensity_mark <= lambda}; nested in lambda pathwise.
MarkedPointSet couple_to_intensity(const MarkedPointSet& points, double lambda);

/// Poisson line process of intensity u restricted to lines at distance at
/// most max_distance from the origin (count has mean 2*pi*u*max_distance).
std::vector<MarkedLine> sample_marked_lines(double u, double max_distance, std::uint64_t seed);

}  // namespace geoperc
