#include "geoperc/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "geoperc/rng.hpp"

namespace geoperc {

MarkedPointSet::MarkedPointSet(Rect region, double lambda_max, std::vector<MarkedPoint> points,
                               std::uint64_t seed)
    : region_(region), lambda_max_(lambda_max), points_(std::move(points)), seed_(seed) {}

Point2 MarkedLine::normal() const { return {std::cos(theta), std::sin(theta)}; }

double MarkedLine::signed_offset(Point2 p) const { return dot(p, normal()) - distance; }

double MarkedLine::distance_to(Point2 p) const { return std::abs(signed_offset(p)); }

MarkedPointSet sample_marked_points(double lambda_max, const Rect& region, std::uint64_t seed) {
  if (!std::isfinite(lambda_max) || lambda_max < 0.0)
    throw ParameterError("sample_marked_points: lambda_max must be finite and >= 0");

  Engine eng = make_engine(seed);
  const std::uint64_t count = poisson(eng, lambda_max * region.area());
  std::vector<MarkedPoint> pts;
  pts.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    MarkedPoint p;
    p.location.x = uniform(eng, region.x_min(), region.x_max());
    p.location.y = uniform(eng, region.y_min(), region.y_max());
    p.intensity_mark = lambda_max * uniform01_open_low(eng);
    p.uniform_mark = uniform01(eng);
    pts.push_back(p);
  }
  std::sort(pts.begin(), pts.end(), [](const MarkedPoint& a, const MarkedPoint& b) {
    return a.location < b.location;
  });
  return MarkedPointSet(region, lambda_max, std::move(pts), seed);
}

MarkedPointSet couple_to_intensity(const MarkedPointSet& points, double lambda) {
  if (!(lambda >= 0.0) || lambda > points.lambda_max())
    throw ParameterError("couple_to_intensity: lambda must lie in [0, lambda_max]");
  std::vector<MarkedPoint> kept;
  for (const MarkedPoint& p : points.points())
    if (p.intensity_mark <= lambda) kept.push_back(p);
  return MarkedPointSet(points.region(), lambda, std::move(kept), points.seed());
}

std::vector<MarkedLine> sample_marked_lines(double u, double max_distance, std::uint64_t seed) {
  if (!std::isfinite(u) || u < 0.0 || !std::isfinite(max_distance) || max_distance < 0.0)
    throw ParameterError("sample_marked_lines: intensity and distance must be finite and >= 0");

  Engine eng = make_engine(seed);
  const std::uint64_t count = poisson(eng, 2.0 * std::numbers::pi * u * max_distance);
  std::vector<MarkedLine> lines;
  lines.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    MarkedLine l;
    l.theta = uniform(eng, 0.0, 2.0 * std::numbers::pi);
    l.distance = uniform(eng, 0.0, max_distance);
    l.uniform_mark = uniform01(eng);
    lines.push_back(l);
  }
  return lines;
}

}  // namespace geoperc
