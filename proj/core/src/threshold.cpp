#include "geoperc/threshold.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

#include "geoperc/errors.hpp"

namespace geoperc {
namespace {

void validate_scale(double n) {
  if (!std::isfinite(n) || n <= 0.0) throw ParameterError("scale n must be finite and > 0");
}

struct Counts {
  std::size_t hard = 0;
  std::size_t easy = 0;
};

Counts count_at(const std::vector<CrossingSample>& samples, double lambda) {
  Counts c;
  for (const CrossingSample& s : samples) {
    c.hard += s.hard <= lambda ? 1 : 0;
    c.easy += s.easy <= lambda ? 1 : 0;
  }
  return c;
}

double total_leakage(const std::vector<CrossingSample>& samples) {
  double sum = 0.0;
  for (const CrossingSample& s : samples) sum += s.leakage_budget;
  return sum;
}

Criterion classify_at(const std::vector<CrossingSample>& samples, double lambda,
                      const RunOptions& options) {
  const Counts c = count_at(samples, lambda);
  return finite_size_classify(
      make_estimate(c.hard, samples.size(), options.master_seed, 0.0, options.confidence),
      make_estimate(c.easy, samples.size(), options.master_seed, 0.0, options.confidence));
}

// Bracket [sup of certified-subcritical, inf of certified-supercritical]
// by two bisections on a fixed coupled sample.
Interval bisect_bracket(const std::vector<CrossingSample>& samples, Interval bracket,
                        double tolerance, const RunOptions& options) {
  double a = bracket.low, b = bracket.high;
  while (b - a > tolerance) {
    const double m = 0.5 * (a + b);
    (classify_at(samples, m, options) == Criterion::subcritical ? a : b) = m;
  }
  const double sub_edge = a;
  a = bracket.low;
  b = bracket.high;
  while (b - a > tolerance) {
    const double m = 0.5 * (a + b);
    (classify_at(samples, m, options) == Criterion::supercritical ? b : a) = m;
  }
  return {sub_edge, b};
}

std::string describe(const std::vector<CrossingSample>& samples, double lambda,
                     const RunOptions& options) {
  const Counts c = count_at(samples, lambda);
  std::ostringstream os;
  os << "lambda=" << lambda << ": P(Cross(3n,n))=" << c.hard << "/" << samples.size()
     << ", P(Cross(n,3n))=" << c.easy << "/" << samples.size() << " -> "
     << to_string(classify_at(samples, lambda, options));
  return os.str();
}

}  // namespace

std::vector<CrossingSample> sample_crossing_thresholds(const ModelSpec& model, double n,
                                                       double lambda_max,
                                                       const RunOptions& options) {
  validate_scale(n);
  if (!std::isfinite(lambda_max) || lambda_max < 0.0)
    throw ParameterError("lambda_max must be finite and >= 0");
  const Rect rect(0.0, 3.0 * n, 0.0, n);
  return run_replications<CrossingSample>(options, [&](std::size_t, std::uint64_t seed) {
    const Scene scene = realize_scene(model, lambda_max, rect, seed);
    const CrossingThresholds t = crossing_thresholds(scene.occupied, rect);
    return CrossingSample{t.left_right, t.top_bottom, scene.occupied.leakage_budget()};
  });
}

CrossingCurve curve_from_samples(const std::vector<CrossingSample>& samples, double n,
                                 const std::vector<double>& lambda_grid,
                                 const RunOptions& options) {
  CrossingCurve curve;
  curve.n = n;
  curve.lambda_grid = lambda_grid;
  const double leak = total_leakage(samples);
  for (double lambda : lambda_grid) {
    const Counts c = count_at(samples, lambda);
    curve.hard.push_back(
        make_estimate(c.hard, samples.size(), options.master_seed, leak, options.confidence));
    curve.easy.push_back(
        make_estimate(c.easy, samples.size(), options.master_seed, leak, options.confidence));
  }
  return curve;
}

CrossingCurve crossing_curve(const ModelSpec& model, double n,
                             const std::vector<double>& lambda_grid, const RunOptions& options) {
  if (lambda_grid.empty()) throw ParameterError("crossing_curve: empty lambda grid");
  if (!std::is_sorted(lambda_grid.begin(), lambda_grid.end()))
    throw ParameterError("crossing_curve: lambda grid must be sorted ascending");
  if (!(lambda_grid.front() >= 0.0)) throw ParameterError("crossing_curve: negative lambda");
  const auto samples = sample_crossing_thresholds(model, n, lambda_grid.back(), options);
  return curve_from_samples(samples, n, lambda_grid, options);
}

std::string to_string(Criterion c) {
  switch (c) {
    case Criterion::supercritical: return "supercritical";
    case Criterion::subcritical: return "subcritical";
    default: return "undetermined";
  }
}

Criterion finite_size_classify(const Estimate& hard, const Estimate& easy) {
  if (hard.ci_low > 1.0 - kFiniteSizeGamma) return Criterion::supercritical;
  if (easy.ci_high < kFiniteSizeGamma) return Criterion::subcritical;
  return Criterion::undetermined;
}

std::vector<Criterion> finite_size_classify(const CrossingCurve& curve) {
  std::vector<Criterion> out;
  for (std::size_t k = 0; k < curve.lambda_grid.size(); ++k)
    out.push_back(finite_size_classify(curve.hard[k], curve.easy[k]));
  return out;
}

ThresholdResult estimate_lambda_c(const ModelSpec& model, double n, Interval bracket,
                                  double tolerance, const RunOptions& options,
                                  bool stability_check) {
  validate_scale(n);
  if (!(bracket.low >= 0.0 && bracket.low < bracket.high && std::isfinite(bracket.high)))
    throw ParameterError("estimate_lambda_c: bracket must satisfy 0 <= low < high < inf");
  if (!(tolerance > 0.0)) throw ParameterError("estimate_lambda_c: tolerance must be > 0");

  // Even unanimous replications must clear gamma, else no bracket can certify.
  const std::size_t reps = options.replications;
  if (!(wilson_interval(0, reps, options.confidence).high < kFiniteSizeGamma &&
        wilson_interval(reps, reps, options.confidence).low > 1.0 - kFiniteSizeGamma))
    throw BracketError(std::to_string(reps) +
                       " replications cannot certify the finite-size criterion");

  const auto samples = sample_crossing_thresholds(model, n, bracket.high, options);
  if (classify_at(samples, bracket.low, options) != Criterion::subcritical ||
      classify_at(samples, bracket.high, options) != Criterion::supercritical)
    throw BracketError("initial bracket does not classify at n=" + std::to_string(n) + "; " +
                       describe(samples, bracket.low, options) + "; " +
                       describe(samples, bracket.high, options));

  const Interval found = bisect_bracket(samples, bracket, tolerance, options);
  ThresholdResult r;
  r.lambda_low = found.low;
  r.lambda_high = found.high;
  r.n_used = n;
  r.criterion = "finite-size gamma=1/200 at n=" + std::to_string(n);
  r.curve = curve_from_samples(samples, n, {found.low, 0.5 * (found.low + found.high), found.high},
                               options);
  if (stability_check) {
    const auto wide = sample_crossing_thresholds(model, 2.0 * n, bracket.high, options);
    if (classify_at(wide, bracket.low, options) == Criterion::subcritical &&
        classify_at(wide, bracket.high, options) == Criterion::supercritical) {
      r.stability_bracket = bisect_bracket(wide, bracket, tolerance, options);
      r.converged =
          r.stability_bracket->low <= r.lambda_high && r.lambda_low <= r.stability_bracket->high;
    }
  }
  return r;
}

ThresholdResult estimate_lambda_c_auto(const ModelSpec& model, double n, double high_guess,
                                       double tolerance, const RunOptions& options,
                                       bool stability_check) {
  if (!(high_guess > 0.0)) throw ParameterError("estimate_lambda_c_auto: high guess must be > 0");
  double high = high_guess;
  for (int attempt = 0;; ++attempt) {
    try {
      return estimate_lambda_c(model, n, {0.0, high}, tolerance, options, stability_check);
    } catch (const BracketError&) {
      if (attempt == 5) throw;
      high *= 2.0;
    }
  }
}

int ordering(const ThresholdResult& a, const ThresholdResult& b) {
  if (a.lambda_low > b.lambda_high) return 1;
  if (a.lambda_high < b.lambda_low) return -1;
  return 0;
}

ContractionReport check_contraction(const ModelSpec& model, double lambda, double n,
                                    const RunOptions& options, double eps0) {
  validate_scale(n);
  if (!std::isfinite(lambda) || lambda < 0.0) throw ParameterError("lambda must be >= 0");
  if (!(model.radius_bound() < std::numeric_limits<double>::infinity()))
    throw ParameterError("check_contraction: needs a bounded radius law or field");

  const auto failure = [&](double scale) {
    const auto samples = sample_crossing_thresholds(model, scale, lambda, options);
    const Counts c = count_at(samples, lambda);
    return make_estimate(samples.size() - c.hard, samples.size(), options.master_seed,
                         total_leakage(samples), options.confidence);
  };
  ContractionReport r;
  r.lambda = lambda;
  r.n = n;
  r.q_n = failure(n);
  r.q_3n = failure(3.0 * n);
  r.pi_9n = estimate_pi_lambda(model, lambda, 9.0 * n, eps0, options);
  if (const auto* f = std::get_if<FieldSpec>(&model.radii)) {
    r.pibar_9n = estimate_field_mixing_proxy(*f, 9.0 * n, eps0, default_test_levels(*f), options);
  } else {
    r.pibar_9n.replications = options.replications;
    r.pibar_9n.master_seed = options.master_seed;
  }
  const double q = r.q_n.value;
  r.rhs = 49.0 * q * q + 4.0 * r.pi_9n.value + r.pibar_9n.value;
  const double s_q = r.q_n.standard_error(), s_q3 = r.q_3n.standard_error();
  const double s_pi = r.pi_9n.standard_error(), s_bar = r.pibar_9n.standard_error;
  r.slack = 3.0 * std::sqrt(s_q3 * s_q3 + (98.0 * q * s_q) * (98.0 * q * s_q) +
                            16.0 * s_pi * s_pi + s_bar * s_bar);
  r.holds = r.q_3n.value <= r.rhs + r.slack;
  r.status = r.holds ? "holds" : "inconclusive";
  return r;
}

std::vector<VoronoiScanRow> voronoi_threshold_scan(const std::vector<double>& mu_grid,
                                                   const std::vector<double>& p_grid, double a,
                                                   double b, double n, double tolerance,
                                                   const RunOptions& options, double eps0) {
  if (mu_grid.empty() || p_grid.empty())
    throw ParameterError("voronoi_threshold_scan: empty mu or p grid");
  validate_scale(n);
  if (!(eps0 > 0.0 && eps0 <= 0.2)) throw ParameterError("eps0 must lie in (0, 1/5]");
  if (!(b < eps0 / 4.0 * n))
    throw ParameterError("voronoi_threshold_scan: need b < (eps0/4) n so that pi_lambda(n) = 0");

  std::map<double, ThresholdResult> iid_by_p;
  std::vector<VoronoiScanRow> rows;
  for (double p : p_grid) {
    // The critical filling factor lambda * pi * E[R^2] is about 1.13 for
    // the i.i.d. model; twice that is a cheap first guess, doubled as needed.
    const double second_moment = (1.0 - p) * a * a + p * b * b;
    const double high_guess = 2.0 * 1.13 / (std::numbers::pi * second_moment);
    const FieldSpec probe = FieldSpec::voronoi({1.0, p, a, b});
    auto it = iid_by_p.find(p);
    if (it == iid_by_p.end())
      it = iid_by_p
               .emplace(p, estimate_lambda_c_auto(ModelSpec::iid_matched(probe), n, high_guess,
                                                  tolerance, options))
               .first;
    for (double mu : mu_grid) {
      VoronoiScanRow row;
      row.mu = mu;
      row.p = p;
      const auto geo = ModelSpec::geostatistical(FieldSpec::voronoi({mu, p, a, b}));
      row.geostat = estimate_lambda_c_auto(geo, n, high_guess, tolerance, options);
      row.iid = it->second;
      row.ordering = ordering(row.geostat, row.iid);
      rows.push_back(std::move(row));
    }
  }
  std::stable_sort(rows.begin(), rows.end(), [](const VoronoiScanRow& x, const VoronoiScanRow& y) {
    return x.mu != y.mu ? x.mu < y.mu : x.p < y.p;
  });
  return rows;
}

}  // namespace geoperc
