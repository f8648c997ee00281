#include <algorithm>
#include <cmath>
#include <limits>

#include "doctest.h"
#include "geoperc/errors.hpp"
#include "geoperc/threshold.hpp"

using namespace geoperc;

namespace {

RunOptions opts(std::size_t reps, std::uint64_t seed = 1, unsigned threads = 1) {
  RunOptions o;
  o.replications = reps;
  o.master_seed = seed;
  o.threads = threads;
  return o;
}

ModelSpec constant(double a) { return ModelSpec::geostatistical(FieldSpec::constant(a)); }

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

}  // namespace

TEST_CASE("finite-size classification") {
  const Estimate one = make_estimate(10000, 10000, 1);
  const Estimate zero = make_estimate(0, 10000, 1);
  const Estimate half = make_estimate(5000, 10000, 1);
  CHECK(finite_size_classify(one, one) == Criterion::supercritical);
  CHECK(finite_size_classify(zero, zero) == Criterion::subcritical);
  CHECK(finite_size_classify(half, half) == Criterion::undetermined);
  // 100 successes out of 100 cannot certify 1 - 1/200.
  CHECK(finite_size_classify(make_estimate(100, 100, 1), one) == Criterion::undetermined);
  CHECK(to_string(Criterion::subcritical) == "subcritical");
}

TEST_CASE("crossing curves are monotone and start at zero") {
  const std::vector<double> grid{0.0, 0.15, 0.3, 0.45, 0.6, 0.9};
  const CrossingCurve c = crossing_curve(constant(1.0), 5.0, grid, opts(400, 2));
  CHECK(c.hard.front().value == 0.0);
  CHECK(c.easy.front().value == 0.0);
  for (std::size_t k = 1; k < grid.size(); ++k) {
    CHECK(c.hard[k].successes >= c.hard[k - 1].successes);
    CHECK(c.easy[k].successes >= c.easy[k - 1].successes);
  }
  for (std::size_t k = 0; k < grid.size(); ++k) CHECK(c.easy[k].successes >= c.hard[k].successes);
  CHECK(c.hard.back().value > 0.9);

  CHECK_THROWS_AS(crossing_curve(constant(1.0), 5.0, {}, opts(10)), ParameterError);
  CHECK_THROWS_AS(crossing_curve(constant(1.0), 5.0, {0.5, 0.2}, opts(10)), ParameterError);
}

TEST_CASE("unit discs at scale 10 cross near 0.36") {
  // Square crossing has its median at about 0.36; the 3:1 rectangle the
  // long way needs more, with a median near 0.46.
  const Rect square(0.0, 10.0, 0.0, 10.0);
  const auto square_lr =
      run_replications<double>(opts(1000, 3), [&](std::size_t, std::uint64_t s) {
        const Scene scene = realize_scene(constant(1.0), 0.8, square, s);
        return crossing_thresholds(scene.occupied, square).left_right;
      });
  CHECK(median(square_lr) == doctest::Approx(0.36).epsilon(0.05 / 0.36));

  const auto samples = sample_crossing_thresholds(constant(1.0), 10.0, 0.8, opts(1000, 3));
  std::vector<double> hard, easy;
  for (const CrossingSample& s : samples) {
    hard.push_back(s.hard);
    easy.push_back(s.easy);
  }
  CHECK(median(hard) == doctest::Approx(0.46).epsilon(0.05 / 0.46));
  CHECK(median(easy) < median(square_lr));
}

TEST_CASE("thresholds scale exactly with the radius") {
  // Dilating space by a and dividing the intensity by a^2 maps one model
  // onto the other, replication by replication.
  const auto unit = sample_crossing_thresholds(constant(1.0), 6.0, 0.8, opts(100, 4));
  for (double a : {0.5, 2.0}) {
    const auto scaled = sample_crossing_thresholds(constant(a), 6.0 * a, 0.8 / (a * a),
                                                   opts(100, 4));
    for (std::size_t r = 0; r < unit.size(); ++r) {
      CAPTURE(r);
      if (std::isinf(unit[r].hard)) CHECK(std::isinf(scaled[r].hard));
      else CHECK(scaled[r].hard * a * a == doctest::Approx(unit[r].hard).epsilon(1e-9));
      if (std::isinf(unit[r].easy)) CHECK(std::isinf(scaled[r].easy));
      else CHECK(scaled[r].easy * a * a == doctest::Approx(unit[r].easy).epsilon(1e-9));
    }
  }
}

TEST_CASE("threshold brackets") {
  const ThresholdResult r =
      estimate_lambda_c(constant(1.0), 10.0, {0.0, 1.2}, 0.005, opts(1000, 5));
  CHECK(r.lambda_low < r.lambda_high);
  CHECK(r.lambda_low < 0.36);
  CHECK(r.lambda_high > 0.36);
  CHECK(r.n_used == 10.0);
  CHECK(r.curve.lambda_grid.size() == 3);
  CHECK(r.curve.easy[0].ci_high < kFiniteSizeGamma);
  CHECK(r.curve.hard[2].ci_low > 1.0 - kFiniteSizeGamma);

  const ThresholdResult again =
      estimate_lambda_c(constant(1.0), 10.0, {0.0, 1.2}, 0.005, opts(1000, 5, 2));
  CHECK(again.lambda_low == r.lambda_low);
  CHECK(again.lambda_high == r.lambda_high);

  // Brackets at ten radii are wide, so compare radii a factor 4 apart.
  const ThresholdResult big =
      estimate_lambda_c(constant(4.0), 40.0, {0.0, 0.08}, 0.0005, opts(1000, 6));
  CHECK(ordering(big, r) == -1);

  CHECK_THROWS_AS(estimate_lambda_c(constant(1.0), 5.0, {0.3, 0.4}, 0.01, opts(300)),
                  BracketError);
  // 100 replications can never certify 1/200, whatever the bracket.
  CHECK_THROWS_AS(estimate_lambda_c_auto(constant(1.0), 5.0, 1.0, 0.01, opts(100)), BracketError);
  CHECK_THROWS_AS(estimate_lambda_c(constant(1.0), 5.0, {0.4, 0.3}, 0.01, opts(10)),
                  ParameterError);
  CHECK_THROWS_AS(estimate_lambda_c(constant(1.0), 5.0, {0.0, 1.0}, 0.0, opts(10)),
                  ParameterError);
}

TEST_CASE("automatic bracket and stability check") {
  const ThresholdResult r =
      estimate_lambda_c_auto(constant(1.0), 5.0, 0.2, 0.01, opts(800, 7), true);
  CHECK(r.lambda_low < r.lambda_high);
  REQUIRE(r.stability_bracket.has_value());
  CHECK(r.stability_bracket->low < r.stability_bracket->high);
  // A larger box certifies a tighter bracket.
  CHECK(r.stability_bracket->high - r.stability_bracket->low < r.lambda_high - r.lambda_low);
  CHECK(r.converged);
}

TEST_CASE("contraction report") {
  const ContractionReport empty = check_contraction(constant(1.0), 0.0, 3.0, opts(50));
  CHECK(empty.q_n.value == 1.0);
  CHECK(empty.q_3n.value == 1.0);
  CHECK(empty.holds);

  const ContractionReport dense = check_contraction(constant(1.0), 3.0, 10.0, opts(100));
  CHECK(dense.q_n.value == 0.0);
  CHECK(dense.pi_9n.value == 0.0);
  CHECK(dense.holds);
  CHECK(dense.status == "holds");

  CHECK_THROWS_AS(check_contraction(ModelSpec::iid(RadialDistribution::pareto(3.0, 0.5)), 1.0,
                                    3.0, opts(10)),
                  ParameterError);
}

TEST_CASE("voronoi scan preconditions and fine mosaics") {
  CHECK_THROWS_AS(voronoi_threshold_scan({1.0}, {0.5}, 1.0, 2.0, 30.0, 0.01, opts(10)),
                  ParameterError);
  CHECK_THROWS_AS(voronoi_threshold_scan({}, {0.5}, 1.0, 2.0, 50.0, 0.01, opts(10)),
                  ParameterError);

  // Cells much smaller than a disc: the mosaic looks i.i.d. Certifying
  // gamma = 1/200 takes at least 770 replications.
  const auto rows = voronoi_threshold_scan({25.0}, {0.5}, 0.5, 1.0, 25.0, 0.005, opts(800, 8));
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].ordering == 0);
  CHECK(rows[0].iid.lambda_low < rows[0].iid.lambda_high);
}
