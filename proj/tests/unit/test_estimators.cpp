#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "geoperc/errors.hpp"
#include "geoperc/estimators.hpp"

using namespace geoperc;

namespace {

RunOptions opts(std::size_t reps, std::uint64_t seed = 1, unsigned threads = 1) {
  RunOptions o;
  o.replications = reps;
  o.master_seed = seed;
  o.threads = threads;
  return o;
}

Trial coin(std::uint64_t seed) {
  Engine eng = make_engine(seed);
  return {uniform01(eng) < 0.5, 0.0};
}

}  // namespace

TEST_CASE("wilson interval matches tabulated values") {
  const Interval half = wilson_interval(50, 100);
  CHECK(half.low == doctest::Approx(0.4038).epsilon(1e-3));
  CHECK(half.high == doctest::Approx(0.5962).epsilon(1e-3));
  const Interval none = wilson_interval(0, 100);
  CHECK(none.low == 0.0);
  CHECK(none.high == doctest::Approx(0.0370).epsilon(2e-3));
  const Estimate all = make_estimate(100, 100, 7);
  CHECK(all.value == 1.0);
  CHECK(all.ci_high == 1.0);
  CHECK(all.ci_low <= all.value);
  CHECK(normal_critical_value(0.95) == doctest::Approx(1.959964));
  CHECK_THROWS_AS(wilson_interval(3, 0), ParameterError);
}

TEST_CASE("wilson interval covers at the nominal rate") {
  // Exact coverage at stream length 200 is 0.944-0.948 for these p.
  constexpr int kMeta = 10000, kLength = 200;
  std::mt19937_64 eng(2024);
  for (double p : {0.01, 0.5, 0.99}) {
    std::binomial_distribution<int> draw(kLength, p);
    int covered = 0;
    for (int m = 0; m < kMeta; ++m) {
      const Interval ci = wilson_interval(draw(eng), kLength);
      covered += ci.low <= p && p <= ci.high;
    }
    const double rate = double(covered) / kMeta;
    CAPTURE(p);
    CHECK(rate >= 0.93);
    CHECK(rate <= 0.97);
  }
}

TEST_CASE("estimate_probability on trivial and synthetic events") {
  const Estimate always = estimate_probability([](std::uint64_t) { return Trial{true, 0.0}; },
                                               opts(50));
  CHECK(always.value == 1.0);
  CHECK(always.ci_high == 1.0);

  const Estimate fair = estimate_probability(coin, opts(10000, 3));
  CHECK(std::abs(fair.value - 0.5) <= 3.0 * 0.005);
  CHECK(fair.ci_low <= fair.value);
  CHECK(fair.value <= fair.ci_high);
  CHECK(fair.successes == static_cast<std::size_t>(std::lround(fair.value * 10000)));

  const ModelSpec m = ModelSpec::iid(RadialDistribution::point_mass(1.0));
  const Estimate empty = estimate_probability(
      [&](std::uint64_t seed) {
        const Scene s = realize_scene(m, 0.0, Rect::square({0, 0}, 1.0), seed);
        return Trial{covers_point(s.occupied, {0, 0}), s.occupied.leakage_budget()};
      },
      opts(200));
  CHECK(empty.value == 0.0);

  CHECK_THROWS_AS(estimate_probability(coin, opts(0)), ParameterError);
}

TEST_CASE("replications are schedule independent") {
  const auto leaky = [](std::uint64_t seed) { return Trial{seed % 3 == 0, 1e-9}; };
  const Estimate one = estimate_probability(leaky, opts(3000, 11, 1));
  const Estimate four = estimate_probability(leaky, opts(3000, 11, 4));
  CHECK(one.successes == four.successes);
  CHECK(one.leakage_budget_total == four.leakage_budget_total);
  CHECK(one.leakage_budget_total == doctest::Approx(3e-6));

  const auto seeds = run_replications<std::uint64_t>(
      opts(64, 5, 4), [](std::size_t, std::uint64_t s) { return s; });
  for (std::size_t r = 0; r < seeds.size(); ++r) CHECK(seeds[r] == replication_seed(5, r));

  const auto boom = [](std::uint64_t seed) -> Trial {
    if (seed == replication_seed(1, 17)) throw ContractError("pad violated");
    return {};
  };
  CHECK_THROWS_AS(estimate_probability(boom, opts(40, 1, 3)), ContractError);
}

TEST_CASE("covariance estimate agrees with the sample formula") {
  std::mt19937_64 eng(9);
  std::bernoulli_distribution b(0.3);
  std::vector<std::uint8_t> x(5000), y(5000), z(5000);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = b(eng);
    y[i] = x[i] || b(eng);
    z[i] = b(eng);
  }
  double mx = 0, my = 0, mxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
    mxy += x[i] * y[i];
  }
  const double n = double(x.size());
  const double cov = (mxy / n - (mx / n) * (my / n)) * n / (n - 1.0);
  // True value: P(x) - P(x) P(y) = 0.3 - 0.3 * 0.51 = 0.147.
  const CovarianceEstimate c = estimate_covariance(x, y, 0.95);
  CHECK(c.covariance == doctest::Approx(cov).epsilon(1e-3));
  CHECK(c.value == doctest::Approx(std::abs(cov)));
  CHECK(c.ci_low <= 0.147);
  CHECK(0.147 <= c.ci_high);

  const CovarianceEstimate indep = estimate_covariance(x, z, 0.95, 4);
  CHECK(indep.ci_low == 0.0);
  CHECK(indep.family_size == 4);
  CHECK(indep.ci_high > estimate_covariance(x, z, 0.95, 1).ci_high);

  const std::vector<std::uint8_t> ones(x.size(), 1);
  CHECK(estimate_covariance(ones, x, 0.95).value == 0.0);
}

TEST_CASE("locality defect vanishes for bounded reach") {
  const ModelSpec constant = ModelSpec::geostatistical(FieldSpec::constant(1.0));
  // (eps0 / 4) n = 1.5 > 1: no disc from outside K' meets K.
  const Estimate pi = estimate_pi_lambda(constant, 2.0, 30.0, 0.2, opts(300));
  CHECK(pi.successes == 0);
  CHECK(estimate_pi_lambda(constant, 0.0, 3.0, 0.2, opts(100)).value == 0.0);

  // With reach above (eps0 / 4) n the defect is visible.
  const Estimate close = estimate_pi_lambda(constant, 2.0, 4.0, 0.2, opts(300));
  CHECK(close.value > 0.5);

  CHECK_THROWS_AS(estimate_pi_lambda(constant, 1.0, 5.0, 0.3, opts(10)), ParameterError);
  CHECK_THROWS_AS(estimate_pi_lambda(constant, 1.0, 5.0, 0.0, opts(10)), ParameterError);
}

TEST_CASE("locality defect decays for light-tailed i.i.d. radii") {
  ModelSpec m = ModelSpec::iid(RadialDistribution::pareto(6.0, 0.3));
  m.eps_leak = 1e-4;
  std::vector<Estimate> est;
  for (double n : {8.0, 16.0, 32.0})
    est.push_back(estimate_pi_lambda(m, 1.0, n, 0.2, opts(1000, 4)));
  CHECK(est[0].ci_low > est[1].ci_high);
  CHECK(est[1].ci_low > est[2].ci_high);
}

TEST_CASE("field mixing proxy") {
  const auto levels = std::vector<double>{0.5, 1.5};
  const CovarianceEstimate flat =
      estimate_field_mixing_proxy(FieldSpec::constant(1.0), 5.0, 0.2, levels, opts(100));
  CHECK(flat.value == 0.0);

  const FieldSpec fine = FieldSpec::voronoi({25.0, 0.5, 1.0, 2.0});
  const CovarianceEstimate far =
      estimate_field_mixing_proxy(fine, 2.0, 0.2, default_test_levels(fine), opts(1000, 2));
  CHECK(far.ci_low == 0.0);
  CHECK(far.family_size == 16);

  // Shared lines couple the boxes; the coupling fades with distance.
  const FieldSpec cyl = FieldSpec::cylinder({0.3, 0.5, RadialDistribution::point_mass(1.0)});
  std::vector<double> v;
  for (double n : {0.5, 2.0, 8.0})
    v.push_back(estimate_field_mixing_proxy(cyl, n, 0.2, {0.5}, opts(2000, 3)).value);
  CHECK(v[0] > v[2]);
  CHECK(v[0] > 0.01);

  CHECK_THROWS_AS(estimate_field_mixing_proxy(cyl, 1.0, 0.2, {}, opts(10)), ParameterError);
}

TEST_CASE("crossing correlation sandwich") {
  const ModelSpec constant = ModelSpec::geostatistical(FieldSpec::constant(1.0));
  const RhoReport zero = estimate_rho_proxy(constant, 0.0, 30.0, 0.2, opts(50));
  CHECK(zero.rho.value == 0.0);

  const RhoReport r = estimate_rho_proxy(constant, 0.35, 30.0, 0.2, opts(400, 8));
  CHECK(r.pi.successes == 0);
  CHECK(r.pibar.value == 0.0);
  CHECK(r.upper_bound == 0.0);
  CHECK(r.rho.value <= r.upper_bound + 3.0 * r.slack_sigma + 3.0 * r.rho.standard_error);

  CHECK_THROWS_AS(estimate_rho_proxy(constant, 0.35, 0.0, 0.2, opts(10)), ParameterError);
  CHECK_THROWS_AS(estimate_rho_proxy(constant, 0.35, 5.0, 0.5, opts(10)), ParameterError);
}

TEST_CASE("geostatistical and i.i.d. comparison") {
  const FieldSpec vor = FieldSpec::voronoi({1.0, 0.5, 0.5, 1.5});
  CHECK_THROWS_AS(compare_geostat_iid(vor, RadialDistribution::point_mass(1.0), 1.0, {}, {},
                                      opts(10)),
                  ParameterError);

  const ComparisonReport none =
      compare_geostat_iid(vor, vor.marginal(), 0.0, {1.0}, {1.0}, opts(20));
  CHECK(none.point.geostat.value == 0.0);
  CHECK(none.point.iid.value == 0.0);
  CHECK(none.segments[0].iid.value == 0.0);
  CHECK(none.crossings[0].geostat.value == 0.0);

  const ComparisonReport a = compare_geostat_iid(vor, vor.marginal(), 0.5, {0.5, 2.0}, {1.0},
                                                 opts(3000, 6, 1));
  const double sigma = std::hypot(a.point.geostat.standard_error(), a.point.iid.standard_error());
  CHECK(a.point.geostat.value <= a.point.iid.value + 3.0 * sigma);
  CHECK(a.segments.size() == 2);
  CHECK(a.segments[1].parameter == 2.0);
  CHECK(a.segments[1].geostat.value <= a.segments[0].geostat.value);

  const ComparisonReport b = compare_geostat_iid(vor, vor.marginal(), 0.5, {0.5, 2.0}, {1.0},
                                                 opts(3000, 6, 3));
  CHECK(a.point.geostat.successes == b.point.geostat.successes);
  CHECK(a.segments[1].iid.successes == b.segments[1].iid.successes);
  CHECK(a.crossings[0].geostat.successes == b.crossings[0].geostat.successes);
}
