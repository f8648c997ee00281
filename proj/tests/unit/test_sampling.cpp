#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "geoperc/errors.hpp"
#include "geoperc/rng.hpp"
#include "geoperc/sampling.hpp"

using namespace geoperc;

namespace {

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
};

template <class V>
Moments moments(const V& xs) {
  Moments m;
  for (double x : xs) m.mean += x;
  m.mean /= static_cast<double>(xs.size());
  for (double x : xs) m.variance += (x - m.mean) * (x - m.mean);
  m.variance /= static_cast<double>(xs.size() - 1);
  return m;
}

}  // namespace

TEST_CASE("point count is Poisson with mean lambda * area") {
  const Rect region(0.0, 5.0, -1.0, 4.0);
  const double lambda = 2.0, expected = lambda * region.area();
  const int reps = 4000;
  std::vector<double> counts;
  for (int k = 0; k < reps; ++k)
    counts.push_back(static_cast<double>(sample_marked_points(lambda, region, 1000 + k).size()));
  const Moments m = moments(counts);
  CHECK(std::abs(m.mean - expected) < 4.0 * std::sqrt(expected / reps));
  // Var of the sample variance of Poisson(50) is about 2 * 50^2 / reps.
  CHECK(std::abs(m.variance - expected) < 4.0 * expected * std::sqrt(2.0 / reps));
}

TEST_CASE("locations are uniform in the region and marks lie in range") {
  const Rect region(-2.0, 2.0, 0.0, 1.0);
  const auto pts = sample_marked_points(500.0, region, 7);
  REQUIRE(pts.size() > 1000);
  std::size_t left = 0, low_mark = 0;
  for (const MarkedPoint& p : pts.points()) {
    REQUIRE(region.contains(p.location));
    REQUIRE(p.intensity_mark > 0.0);
    REQUIRE(p.intensity_mark <= 500.0);
    REQUIRE(p.uniform_mark >= 0.0);
    REQUIRE(p.uniform_mark < 1.0);
    left += p.location.x < 0.0 ? 1 : 0;
    low_mark += p.uniform_mark < 0.25 ? 1 : 0;
  }
  const double n = static_cast<double>(pts.size());
  CHECK(std::abs(left / n - 0.5) < 4.0 * std::sqrt(0.25 / n));
  CHECK(std::abs(low_mark / n - 0.25) < 4.0 * std::sqrt(0.1875 / n));
  CHECK(std::is_sorted(pts.points().begin(), pts.points().end(),
                       [](const MarkedPoint& a, const MarkedPoint& b) {
                         return a.location < b.location;
                       }));
}

TEST_CASE("same seed gives the same sample, different seeds differ") {
  const Rect region(0.0, 3.0, 0.0, 3.0);
  CHECK(sample_marked_points(1.5, region, 42) == sample_marked_points(1.5, region, 42));
  CHECK_FALSE(sample_marked_points(1.5, region, 42) == sample_marked_points(1.5, region, 43));
}

TEST_CASE("coupling is nested and thins to the right intensity") {
  const Rect region(0.0, 10.0, 0.0, 10.0);
  const auto full = sample_marked_points(3.0, region, 99);
  const auto mid = couple_to_intensity(full, 1.0);
  const auto low = couple_to_intensity(full, 0.4);
  CHECK(mid.lambda_max() == 1.0);
  for (const MarkedPoint& p : low.points())
    CHECK(std::find(mid.points().begin(), mid.points().end(), p) != mid.points().end());
  CHECK(couple_to_intensity(full, 0.0).empty());
  CHECK(couple_to_intensity(full, 3.0) == full);

  std::vector<double> counts;
  for (int k = 0; k < 2000; ++k)
    counts.push_back(static_cast<double>(
        couple_to_intensity(sample_marked_points(3.0, Rect(0, 4, 0, 4), k), 0.5).size()));
  CHECK(std::abs(moments(counts).mean - 8.0) < 4.0 * std::sqrt(8.0 / 2000));
}

TEST_CASE("lines within distance D number Poisson(2 pi u D)") {
  const double u = 0.3, D = 5.0, expected = 2.0 * std::numbers::pi * u * D;
  std::vector<double> counts, inner;
  for (int k = 0; k < 3000; ++k) {
    const auto lines = sample_marked_lines(u, D, 500 + k);
    counts.push_back(static_cast<double>(lines.size()));
    // A line meets B(0, 2) iff its distance is at most 2.
    inner.push_back(static_cast<double>(std::count_if(
        lines.begin(), lines.end(), [](const MarkedLine& l) { return l.distance_to({0, 0}) <= 2.0; })));
  }
  CHECK(std::abs(moments(counts).mean - expected) < 4.0 * std::sqrt(expected / 3000));
  const double inner_expected = 2.0 * std::numbers::pi * u * 2.0;
  CHECK(std::abs(moments(inner).mean - inner_expected) < 4.0 * std::sqrt(inner_expected / 3000));
}

TEST_CASE("line geometry") {
  const MarkedLine l{std::numbers::pi / 2.0, 3.0, 0.5};
  CHECK(l.distance_to({17.0, 3.0}) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(l.signed_offset({0.0, 5.0}) == doctest::Approx(2.0));
  CHECK(l.signed_offset({0.0, 0.0}) == doctest::Approx(-3.0));
}

TEST_CASE("invalid sampling arguments are rejected") {
  const Rect region(0.0, 1.0, 0.0, 1.0);
  CHECK_THROWS_AS(sample_marked_points(-1.0, region, 1), ParameterError);
  CHECK_THROWS_AS(sample_marked_points(NAN, region, 1), ParameterError);
  CHECK_THROWS_AS(couple_to_intensity(sample_marked_points(1.0, region, 1), 2.0), ParameterError);
  CHECK_THROWS_AS(sample_marked_lines(-0.1, 1.0, 1), ParameterError);
  CHECK_THROWS_AS(Rect(1.0, 0.0, 0.0, 1.0), ParameterError);
  CHECK(sample_marked_points(0.0, region, 1).empty());
}

TEST_CASE("derived seeds separate streams") {
  CHECK(derive_seed(1, StreamLabel::points) != derive_seed(1, StreamLabel::field));
  CHECK(derive_seed(1, {2, 3}) != derive_seed(1, {3, 2}));
  CHECK(derive_seed(5, {7}) == derive_seed(5, {7}));
}
