#include "cylinder_scene.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/exp_sinh.hpp>

#include "geoperc/rng.hpp"

namespace geoperc::detail {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kShellGrowth = 8.0;

struct Strip {
  Point2 normal;
  Point2 tangent;
  double offset;  // axis distance from the window centre
  double value;

  bool holds(Point2 rel, double half_width) const {
    return std::abs(dot(rel, normal) - offset) <= half_width;
  }
};

Strip strip_of(const MarkedLine& l, double value) {
  const Point2 n = l.normal();
  return {n, {-n.y, n.x}, l.distance, value};
}

}  // namespace

Scene realize_cylinder_scene(const CylinderFieldParams& params, double eps_leak, double lambda,
                             const Rect& window, std::uint64_t replication_seed) {
  if (!(eps_leak > 0.0 && eps_leak < 1.0)) throw ParameterError("eps_leak must lie in (0, 1)");
  if (!std::isfinite(lambda) || lambda < 0.0) throw ParameterError("lambda must be >= 0");
  const double u = params.line_intensity, r = params.base_radius;
  const RadialDistribution& law = params.values;
  const Point2 centre = window.center();
  const double reach = window.circumradius() + r;
  const std::uint64_t field_seed = derive_seed(replication_seed, StreamLabel::field);

  // Lines meeting the window dilated by r: all of them matter.
  std::vector<MarkedLine> lines = sample_marked_lines(u, reach, derive_seed(field_seed, {1}));

  // Farther lines at axis distance reach + y matter iff their value is >= y.
  // Thinning per shell [a, b): candidates from the law conditioned on v > a.
  Engine eng = make_engine(derive_seed(field_seed, {2}));
  boost::math::quadrature::exp_sinh<double> integrator;
  double leakage = 0.0;
  for (double a = 0.0, b = std::max(1.0, law.quantile(0.5)); a < law.support_max();
       a = b, b *= kShellGrowth) {
    const double g = law.tail(a);
    const std::uint64_t m = poisson(eng, kTwoPi * u * (b - a) * g);
    for (std::uint64_t k = 0; k < m; ++k) {
      const double y = uniform(eng, a, b);
      const double theta = uniform(eng, 0.0, 2.0 * std::numbers::pi);
      const double z = 1.0 - g * uniform01_open_low(eng);
      if (law.quantile(z) >= y) lines.push_back({theta, reach + y, z});
    }
    if (law.bounded()) continue;
    const double rest =
        kTwoPi * u * integrator.integrate([&](double t) { return law.tail(t); }, b,
                                          std::numeric_limits<double>::infinity());
    if (rest <= 1e-3 * eps_leak) {
      leakage = rest;
      break;
    }
  }
  const std::size_t relevant_count = lines.size();

  std::vector<Strip> relevant;
  double v_max = 0.0;
  for (const MarkedLine& l : lines) {
    relevant.push_back(strip_of(l, law.quantile(l.uniform_mark)));
    v_max = std::max(v_max, relevant.back().value);
  }

  // Lines within reach + v_max that cannot host a reaching disc still lower
  // the field where they overlap a relevant strip.
  Engine rest_eng = make_engine(derive_seed(field_seed, {3}));
  const std::uint64_t m = poisson(rest_eng, kTwoPi * u * v_max);
  for (std::uint64_t k = 0; k < m; ++k) {
    const double y = uniform(rest_eng, 0.0, v_max);
    const double theta = uniform(rest_eng, 0.0, 2.0 * std::numbers::pi);
    const double z = uniform01(rest_eng);
    if (law.quantile(z) < y) lines.push_back({theta, reach + y, z});
  }

  const Rect region = window.dilated(v_max);
  const FieldRealization wide = FieldRealization::cylinder_from_lines(params, region, lines);

  // Poisson points on the union of the relevant strips, each clipped to
  // distance <= value from the window; a point belongs to its first strip.
  Engine pt_eng = make_engine(derive_seed(replication_seed, StreamLabel::points));
  std::vector<MarkedPoint> points;
  for (std::size_t k = 0; k < relevant.size(); ++k) {
    const Strip& s = relevant[k];
    const double half_len = window.circumradius() + s.value;
    const std::uint64_t count = poisson(pt_eng, lambda * 2.0 * r * 2.0 * half_len);
    for (std::uint64_t i = 0; i < count; ++i) {
      const double w = uniform(pt_eng, -r, r);
      const double along = uniform(pt_eng, -half_len, half_len);
      MarkedPoint p;
      p.location = centre + (s.offset + w) * s.normal + along * s.tangent;
      p.intensity_mark = lambda * uniform01_open_low(pt_eng);
      p.uniform_mark = uniform01(pt_eng);
      if (window.distance_to(p.location) > s.value) continue;
      const Point2 rel = p.location - centre;
      bool owned = false;
      for (std::size_t j = 0; j < k && !owned; ++j)
        owned = relevant[j].holds(rel, r) && window.distance_to(p.location) <= relevant[j].value;
      if (!owned) points.push_back(p);
    }
  }
  std::sort(points.begin(), points.end(),
            [](const MarkedPoint& a, const MarkedPoint& b) { return a.location < b.location; });

  std::vector<Disc> discs;
  std::vector<double> marks;
  for (const MarkedPoint& p : points) {
    const double radius = wide.evaluate(p.location);
    if (radius <= 0.0 || window.distance_to(p.location) > radius) continue;
    discs.push_back({p.location, radius});
    marks.push_back(p.intensity_mark);
  }

  lines.resize(relevant_count);
  FieldRealization field = FieldRealization::cylinder_from_lines(params, window, std::move(lines));
  MarkedPointSet point_set(region, lambda, std::move(points),
                           derive_seed(replication_seed, StreamLabel::points));
  OccupiedRealization occ(std::move(discs), std::move(marks), window, region,
                          Marking::geostatistical, lambda, leakage);
  return Scene{std::move(point_set), std::move(field), std::move(occ)};
}

}  // namespace geoperc::detail
