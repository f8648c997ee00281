#include <cmath>
#include <numbers>

#include "doctest.h"
#include "geoperc/errors.hpp"
#include "geoperc/fields.hpp"

using namespace geoperc;

namespace {

constexpr double kPi = std::numbers::pi;

CylinderFieldParams unit_cylinders(double u, double r) {
  return {u, r, RadialDistribution::point_mass(1.0)};
}

}  // namespace

TEST_CASE("constant field") {
  const auto f = build_constant_field(2.5, Rect(-1, 1, -1, 1));
  CHECK(f.family() == FieldFamily::constant);
  CHECK(f.evaluate({0.3, -0.9}) == 2.5);
  CHECK(f.supremum() == 2.5);
  CHECK(f.failure_probability_budget() == 0.0);
  CHECK_THROWS_AS(f.evaluate({1.5, 0.0}), QueryError);
}

TEST_CASE("cylinder field from explicit lines takes the minimum value") {
  const CylinderFieldParams params{0.1, 1.0, RadialDistribution::two_point(0.5, 1.0, 3.0)};
  // A horizontal strip |y| <= 1 with mark 0.9 (value 3) and a vertical strip
  // |x - 2| <= 1 with mark 0.1 (value 1).
  std::vector<MarkedLine> lines{{kPi / 2.0, 0.0, 0.9}, {0.0, 2.0, 0.1}};
  const auto f = FieldRealization::cylinder_from_lines(params, Rect(-5, 5, -5, 5), lines);
  CHECK(f.evaluate({-3.0, 0.5}) == 3.0);
  CHECK(f.evaluate({2.5, 0.0}) == 1.0);
  CHECK(f.evaluate({2.0, 4.0}) == 1.0);
  CHECK(f.evaluate({-3.0, 3.0}) == 0.0);
  CHECK(f.evaluate({-3.0, 1.0}) == 3.0);  // closed strip
  CHECK(f.lines().size() == 2);
}

TEST_CASE("cylinder field: P(no cylinder over 0) = exp(-2 pi u r)") {
  const double u = 0.1, r = 2.0;
  const int reps = 6000;
  int uncovered = 0;
  double line_count = 0.0;
  const Rect window(-3, 3, -3, 3);
  for (int k = 0; k < reps; ++k) {
    const auto f = build_cylinder_field(unit_cylinders(u, r), window, 1e-6, 100 + k);
    uncovered += f.evaluate({0.0, 0.0}) == 0.0 ? 1 : 0;
    line_count += static_cast<double>(f.lines().size());
  }
  const double p = std::exp(-2.0 * kPi * u * r);
  CHECK(std::abs(uncovered / double(reps) - p) < 4.0 * std::sqrt(p * (1 - p) / reps));
  // All lines within circumradius + r of the centre are sampled.
  const double m = 2.0 * kPi * u * (window.circumradius() + r);
  CHECK(std::abs(line_count / reps - m) < 4.0 * std::sqrt(m / reps));
}

TEST_CASE("cylinder marginal law matches FieldSpec::marginal") {
  const CylinderFieldParams params{0.05, 1.0, RadialDistribution::pareto(2.5, 0.5)};
  const FieldSpec spec = FieldSpec::cylinder(params);
  const auto marginal = spec.marginal();
  const int reps = 6000;
  int above = 0;
  const double t = marginal.quantile(0.8);
  for (int k = 0; k < reps; ++k)
    above += build_field(spec, Rect(-1, 1, -1, 1), 1e-6, 7000 + k).evaluate({0.2, 0.1}) > t;
  const double p = marginal.tail(t);
  CHECK(std::abs(above / double(reps) - p) < 4.0 * std::sqrt(p * (1 - p) / reps));
}

TEST_CASE("voronoi field: high cells have probability p") {
  const VoronoiFieldParams params{2.0, 0.3, 1.0, 2.0};
  const int reps = 5000;
  int high = 0;
  for (int k = 0; k < reps; ++k)
    high += build_voronoi_field(params, Rect(-1, 1, -1, 1), 1e-6, k).evaluate({0.0, 0.0}) == 2.0;
  CHECK(std::abs(high / double(reps) - 0.3) < 4.0 * std::sqrt(0.21 / reps));
}

TEST_CASE("voronoi field does not depend on the window it is built on") {
  const VoronoiFieldParams params{0.7, 0.5, 1.0, 3.0};
  const auto a = build_voronoi_field(params, Rect(-5, 5, -5, 5), 1e-6, 11);
  const auto b = build_voronoi_field(params, Rect(0, 40, -3, 7), 1e-6, 11);
  int mismatches = 0;
  for (double x = 0.0; x <= 5.0; x += 0.05)
    for (double y = -3.0; y <= 5.0; y += 0.05) mismatches += a.evaluate({x, y}) != b.evaluate({x, y});
  CHECK(mismatches == 0);
  CHECK(a.supremum() <= 3.0);
}

TEST_CASE("voronoi boundary crossings along a line match the Poisson-Voronoi rate") {
  // A line crosses cell boundaries at rate 4 sqrt(mu) / pi; a crossing
  // changes the value with probability 2 p (1 - p).
  const double mu = 1.0, p = 0.5, len = 60.0, step = 0.005;
  const int reps = 60;
  double changes = 0.0;
  for (int k = 0; k < reps; ++k) {
    const auto f = build_voronoi_field({mu, p, 1.0, 2.0}, Rect(0, len, -1, 1), 1e-6, 300 + k);
    double prev = f.evaluate({0.0, 0.0});
    for (double x = step; x <= len; x += step) {
      const double v = f.evaluate({x, 0.0});
      changes += v != prev;
      prev = v;
    }
  }
  const double rate = changes / (reps * len);
  const double expected = 4.0 * std::sqrt(mu) / kPi * 2.0 * p * (1.0 - p);
  CHECK(rate == doctest::Approx(expected).epsilon(0.06));
}

TEST_CASE("truncation is the pointwise minimum") {
  const auto f = build_voronoi_field({1.0, 0.5, 1.0, 3.0}, Rect(-4, 4, -4, 4), 1e-6, 5);
  const auto g = truncate_field(f, 2.0);
  CHECK(g.family() == FieldFamily::truncated);
  for (double x = -4.0; x <= 4.0; x += 0.25) CHECK(g.evaluate({x, 0.3}) == std::min(f.evaluate({x, 0.3}), 2.0));
  CHECK(g.supremum() <= 2.0);
  const auto spec = FieldSpec::voronoi({1.0, 0.5, 1.0, 3.0}).truncated(2.0);
  CHECK(spec.supremum() == 2.0);
  CHECK(spec.marginal().support_max() == 2.0);
  CHECK(build_field(spec, Rect(-4, 4, -4, 4), 1e-6, 5).evaluate({1.0, 1.0}) ==
        g.evaluate({1.0, 1.0}));
}

TEST_CASE("field spec marginals") {
  CHECK(FieldSpec::constant(2.0).marginal() == RadialDistribution::point_mass(2.0));
  CHECK(FieldSpec::voronoi({1.0, 0.25, 1.0, 3.0}).marginal() ==
        RadialDistribution::two_point(0.25, 1.0, 3.0));
  const auto cyl = FieldSpec::cylinder(unit_cylinders(0.1, 2.0)).marginal();
  CHECK(cyl.tail(0.5) == doctest::Approx(1.0 - std::exp(-2.0 * kPi * 0.1 * 2.0)));
  CHECK(FieldSpec::cylinder(unit_cylinders(0.1, 2.0)).supremum() == 1.0);
  CHECK(FieldSpec::constant(1.0).family_name() == "constant");
}

TEST_CASE("level set crossings") {
  const Rect window(-5, 5, -5, 5), rect(-4, 4, -2, 2);
  const auto c = build_constant_field(1.0, window);
  CHECK(level_set_crossing(c, 0.5, rect, 0.25) == Tristate::yes);
  CHECK(level_set_crossing(c, 1.0, rect, 0.25) == Tristate::no);  // strict level set

  const CylinderFieldParams params{0.1, 0.5, RadialDistribution::point_mass(2.0)};
  const auto horizontal =
      FieldRealization::cylinder_from_lines(params, window, {{kPi / 2.0, 0.3, 0.5}});
  const auto vertical = FieldRealization::cylinder_from_lines(params, window, {{0.0, 1.0, 0.5}});
  CHECK(level_set_crossing(horizontal, 1.0, rect, 0.1) == Tristate::yes);
  CHECK(level_set_crossing(vertical, 1.0, rect, 0.1) == Tristate::no);
  CHECK_THROWS_AS(level_set_crossing(c, 0.5, Rect(0, 6, 0, 1), 0.1), QueryError);
  CHECK(to_string(Tristate::uncertain) == "uncertain");
}

TEST_CASE("invalid field parameters are rejected") {
  CHECK_THROWS_AS(FieldSpec::voronoi({0.0, 0.5, 1.0, 2.0}), ParameterError);
  CHECK_THROWS_AS(FieldSpec::voronoi({1.0, 1.5, 1.0, 2.0}), ParameterError);
  CHECK_THROWS_AS(FieldSpec::cylinder({-0.1, 1.0, RadialDistribution::point_mass(1.0)}),
                  ParameterError);
  CHECK_THROWS_AS(FieldSpec::constant(-1.0), ParameterError);
}
