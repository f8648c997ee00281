#include "geoperc/estimators.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/normal.hpp>

#include "geoperc/errors.hpp"

namespace geoperc {
namespace {

void validate_eps0(double eps0) {
  if (!(eps0 > 0.0 && eps0 <= 0.2)) throw ParameterError("eps0 must lie in (0, 1/5]");
}

void validate_scale(double n) {
  if (!std::isfinite(n) || n <= 0.0) throw ParameterError("scale n must be finite and > 0");
}

void validate_lambda(double lambda) {
  if (!std::isfinite(lambda) || lambda < 0.0)
    throw ParameterError("lambda must be finite and >= 0");
}

}  // namespace

double Estimate::standard_error() const {
  if (replications == 0) return 0.0;
  return std::sqrt(value * (1.0 - value) / static_cast<double>(replications));
}

double normal_critical_value(double confidence) {
  if (!(confidence > 0.0 && confidence < 1.0))
    throw ParameterError("confidence must lie in (0, 1)");
  const boost::math::normal_distribution<double> standard;
  return boost::math::quantile(standard, 0.5 + 0.5 * confidence);
}

Interval wilson_interval(std::size_t successes, std::size_t n, double confidence) {
  if (n == 0) throw ParameterError("wilson_interval: n must be >= 1");
  if (successes > n) throw ParameterError("wilson_interval: successes exceed trials");
  const double z = normal_critical_value(confidence);
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(successes) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double centre = (p + z2 / (2.0 * nn)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
  double lo = successes == 0 ? 0.0 : std::max(0.0, centre - half);
  double hi = successes == n ? 1.0 : std::min(1.0, centre + half);
  return {std::min(lo, p), std::max(hi, p)};
}

Estimate make_estimate(std::size_t successes, std::size_t replications, std::uint64_t master_seed,
                       double leakage_budget_total, double confidence) {
  const Interval ci = wilson_interval(successes, replications, confidence);
  Estimate e;
  e.value = static_cast<double>(successes) / static_cast<double>(replications);
  e.ci_low = ci.low;
  e.ci_high = ci.high;
  e.replications = replications;
  e.successes = successes;
  e.master_seed = master_seed;
  e.leakage_budget_total = leakage_budget_total;
  return e;
}

void validate(const RunOptions& options) {
  if (options.replications == 0) throw ParameterError("replications must be >= 1");
  if (!(options.confidence > 0.0 && options.confidence < 1.0))
    throw ParameterError("confidence must lie in (0, 1)");
}

Estimate estimate_probability(const Event& event, const RunOptions& options) {
  if (!event) throw ParameterError("estimate_probability: empty event");
  const std::vector<Trial> trials = run_replications<Trial>(
      options, [&](std::size_t, std::uint64_t seed) { return event(seed); });
  std::size_t hits = 0;
  double leak = 0.0;
  for (const Trial& t : trials) {
    hits += t.success ? 1 : 0;
    leak += t.leakage_budget;
  }
  return make_estimate(hits, trials.size(), options.master_seed, leak, options.confidence);
}

Estimate estimate_point_coverage(const ModelSpec& model, double lambda,
                                 const RunOptions& options) {
  validate_lambda(lambda);
  const Rect window = Rect::square({0.0, 0.0}, 0.01);
  return estimate_probability(
      [&](std::uint64_t seed) {
        const Scene scene = realize_scene(model, lambda, window, seed);
        return Trial{covers_point(scene.occupied, {0.0, 0.0}), scene.occupied.leakage_budget()};
      },
      options);
}

Estimate estimate_segment_coverage(const ModelSpec& model, double lambda, double s,
                                   const RunOptions& options) {
  validate_lambda(lambda);
  if (!std::isfinite(s) || s < 0.0) throw ParameterError("segment length must be >= 0");
  const Rect window(-0.01, s + 0.01, -0.01, 0.01);
  return estimate_probability(
      [&](std::uint64_t seed) {
        const Scene scene = realize_scene(model, lambda, window, seed);
        return Trial{covers_segment(scene.occupied, s), scene.occupied.leakage_budget()};
      },
      options);
}

Estimate estimate_crossing(const ModelSpec& model, double lambda, double n,
                           const RunOptions& options) {
  validate_lambda(lambda);
  validate_scale(n);
  const Rect rect(0.0, 3.0 * n, 0.0, n);
  return estimate_probability(
      [&](std::uint64_t seed) {
        const Scene scene = realize_scene(model, lambda, rect, seed);
        const bool hit =
            has_crossing(scene.occupied, {rect, Direction::horizontal, Phase::occupied});
        return Trial{hit, scene.occupied.leakage_budget()};
      },
      options);
}

CovarianceEstimate estimate_covariance(const std::vector<std::uint8_t>& x,
                                       const std::vector<std::uint8_t>& y, double confidence,
                                       std::size_t family_size) {
  if (x.size() != y.size() || x.size() < 2)
    throw ParameterError("estimate_covariance: need two equally long samples of size >= 2");
  if (family_size == 0) throw ParameterError("estimate_covariance: empty family");
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sum = 0.0, sum_sq = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double t = (x[i] - mx) * (y[i] - my);
    sum += t;
    sum_sq += t * t;
  }
  const double mean_t = sum / n;
  const double var_t = std::max(0.0, (sum_sq - n * mean_t * mean_t) / (n - 1.0));

  CovarianceEstimate c;
  c.covariance = sum / (n - 1.0);
  c.value = std::abs(c.covariance);
  c.standard_error = std::sqrt(var_t / n);
  c.replications = x.size();
  c.family_size = family_size;
  const double adjusted = 1.0 - (1.0 - confidence) / static_cast<double>(family_size);
  const double z = normal_critical_value(adjusted);
  const double lo = c.covariance - z * c.standard_error;
  const double hi = c.covariance + z * c.standard_error;
  if (lo <= 0.0 && hi >= 0.0) {
    c.ci_low = 0.0;
    c.ci_high = std::max(-lo, hi) + 0.0;  // no negative zero when lo = hi = 0
  } else {
    c.ci_low = std::min(std::abs(lo), std::abs(hi));
    c.ci_high = std::max(std::abs(lo), std::abs(hi));
  }
  return c;
}

Estimate estimate_pi_lambda(const ModelSpec& model, double lambda, double n, double eps0,
                            const RunOptions& options) {
  validate_lambda(lambda);
  validate_scale(n);
  validate_eps0(eps0);
  const Rect box = Rect::square({0.0, 0.0}, n);
  const double outer = (1.0 + eps0 / 4.0) * n;
  return estimate_probability(
      [&](std::uint64_t seed) {
        const Scene scene = realize_scene(model, lambda, box, seed);
        // Every retained disc meets the window K already.
        const bool leak = std::any_of(
            scene.occupied.discs().begin(), scene.occupied.discs().end(), [&](const Disc& d) {
              return std::abs(d.center.x) > outer || std::abs(d.center.y) > outer;
            });
        return Trial{leak, scene.occupied.leakage_budget()};
      },
      options);
}

std::vector<double> default_test_levels(const FieldSpec& field) {
  const RadialDistribution m = field.marginal();
  std::vector<double> levels{m.quantile(0.25), m.quantile(0.5), m.quantile(0.75)};
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  return levels;
}

CovarianceEstimate estimate_field_mixing_proxy(const FieldSpec& field, double n, double eps0,
                                               const std::vector<double>& test_levels,
                                               const RunOptions& options) {
  validate_scale(n);
  validate_eps0(eps0);
  if (test_levels.empty()) throw ParameterError("estimate_field_mixing_proxy: no test levels");
  constexpr int kProbes = 33;
  const double half = (1.0 + eps0 / 4.0) * n;
  const Rect box_a = Rect::square({0.0, 0.0}, half);
  const Rect box_b = Rect::square({(2.0 + eps0) * n, 0.0}, half);
  const Rect hull = box_a.hull(box_b);
  const std::size_t per_box = 2 * test_levels.size();

  const auto functionals = [&](const FieldRealization& f, const Rect& box,
                               std::vector<std::uint8_t>& out) {
    double lowest = std::numeric_limits<double>::infinity();
    for (int j = 0; j < kProbes; ++j)
      for (int i = 0; i < kProbes; ++i) {
        const Point2 p{box.x_min() + box.width() * i / (kProbes - 1),
                       box.y_min() + box.height() * j / (kProbes - 1)};
        lowest = std::min(lowest, f.evaluate(p));
      }
    const double centre = f.evaluate(box.center());
    for (double t : test_levels) {
      out.push_back(lowest > t);
      out.push_back(centre > t);
    }
  };

  const auto rows = run_replications<std::vector<std::uint8_t>>(
      options, [&](std::size_t, std::uint64_t seed) {
        const FieldRealization f =
            build_field(field, hull, kDefaultEpsPad, derive_seed(seed, StreamLabel::field));
        std::vector<std::uint8_t> bits;
        bits.reserve(2 * per_box);
        functionals(f, box_a, bits);
        functionals(f, box_b, bits);
        return bits;
      });

  const std::size_t family = per_box * per_box;
  CovarianceEstimate best;
  bool first = true;
  std::vector<std::uint8_t> xa(rows.size()), xb(rows.size());
  for (std::size_t a = 0; a < per_box; ++a)
    for (std::size_t b = 0; b < per_box; ++b) {
      for (std::size_t r = 0; r < rows.size(); ++r) {
        xa[r] = rows[r][a];
        xb[r] = rows[r][per_box + b];
      }
      if (rows.size() < 2) break;
      const CovarianceEstimate c = estimate_covariance(xa, xb, options.confidence, family);
      if (first || c.value > best.value) {
        best = c;
        first = false;
      }
    }
  best.replications = rows.size();
  best.family_size = family;
  best.master_seed = options.master_seed;
  return best;
}

RhoReport estimate_rho_proxy(const ModelSpec& model, double lambda, double n, double eps0,
                             const RunOptions& options) {
  validate_lambda(lambda);
  validate_scale(n);
  validate_eps0(eps0);
  const Rect box_a = Rect::square({0.0, 0.0}, n);
  const Rect box_b = Rect::square({(2.0 + eps0) * n, 0.0}, n);
  const Rect hull = box_a.hull(box_b);

  struct Pair {
    std::uint8_t a, b;
    double leak;
  };
  const auto pairs = run_replications<Pair>(options, [&](std::size_t, std::uint64_t seed) {
    const Scene scene = realize_scene(model, lambda, hull, seed);
    const bool ca = has_crossing(scene.occupied, {box_a, Direction::horizontal, Phase::occupied});
    const bool cb = has_crossing(scene.occupied, {box_b, Direction::horizontal, Phase::occupied});
    return Pair{ca, cb, scene.occupied.leakage_budget()};
  });
  std::vector<std::uint8_t> xa, xb;
  double leak = 0.0;
  for (const Pair& p : pairs) {
    xa.push_back(p.a);
    xb.push_back(p.b);
    leak += p.leak;
  }

  RhoReport r;
  if (pairs.size() >= 2) r.rho = estimate_covariance(xa, xb, options.confidence);
  r.rho.replications = pairs.size();
  r.rho.master_seed = options.master_seed;
  r.rho.leakage_budget_total = leak;
  r.pi = estimate_pi_lambda(model, lambda, n, eps0, options);
  if (const auto* f = std::get_if<FieldSpec>(&model.radii)) {
    r.pibar = estimate_field_mixing_proxy(*f, n, eps0, default_test_levels(*f), options);
  } else {
    r.pibar.replications = options.replications;
    r.pibar.master_seed = options.master_seed;
  }
  r.upper_bound = 4.0 * r.pi.value + r.pibar.value;
  const double se_pi = r.pi.standard_error();
  r.slack_sigma = std::sqrt(r.rho.standard_error * r.rho.standard_error + 16.0 * se_pi * se_pi +
                            r.pibar.standard_error * r.pibar.standard_error);
  return r;
}

int ordering(const Estimate& a, const Estimate& b) {
  if (a.ci_low > b.ci_high) return 1;
  if (a.ci_high < b.ci_low) return -1;
  return 0;
}

ComparisonReport compare_geostat_iid(const FieldSpec& field, const RadialDistribution& iid_radii,
                                     double lambda, const std::vector<double>& s_grid,
                                     const std::vector<double>& n_grid, const RunOptions& options,
                                     double eps_leak) {
  validate_lambda(lambda);
  if (!(field.marginal() == iid_radii))
    throw ParameterError("compare_geostat_iid: i.i.d. radius law differs from the field marginal");
  double s_max = 0.0, n_max = 0.0;
  for (double s : s_grid) {
    if (!std::isfinite(s) || s < 0.0) throw ParameterError("segment lengths must be >= 0");
    s_max = std::max(s_max, s);
  }
  for (double n : n_grid) {
    validate_scale(n);
    n_max = std::max(n_max, n);
  }
  const Rect window(-0.5, std::max({0.5, s_max, 3.0 * n_max}) + 0.5, -0.5,
                    std::max(0.5, n_max) + 0.5);

  ModelSpec geo = ModelSpec::geostatistical(field);
  ModelSpec iid = ModelSpec::iid(iid_radii);
  geo.eps_leak = iid.eps_leak = eps_leak;
  // Unbounded cylinder scenes sample their own strips and ignore min_pad.
  const double geo_pad =
      std::isfinite(field.supremum()) ? geo.pad_plan(window, lambda).distance : 0.0;
  const double min_pad = std::max(geo_pad, iid.pad_plan(window, lambda).distance);

  const std::size_t width = 1 + s_grid.size() + n_grid.size();
  struct Row {
    std::vector<std::uint8_t> geo, iid;
    double leak_geo, leak_iid;
  };
  const auto answers = [&](const OccupiedRealization& occ) {
    std::vector<std::uint8_t> bits;
    bits.reserve(width);
    bits.push_back(covers_point(occ, {0.0, 0.0}));
    for (double s : s_grid) bits.push_back(covers_segment(occ, s));
    for (double n : n_grid)
      bits.push_back(has_crossing(occ, {Rect(0.0, 3.0 * n, 0.0, n), Direction::horizontal,
                                        Phase::occupied}));
    return bits;
  };
  const auto rows = run_replications<Row>(options, [&](std::size_t, std::uint64_t seed) {
    const Scene g = realize_scene(geo, lambda, window, seed, min_pad);
    const Scene i = realize_scene(iid, lambda, window, seed, min_pad);
    return Row{answers(g.occupied), answers(i.occupied), g.occupied.leakage_budget(),
               i.occupied.leakage_budget()};
  });

  std::vector<std::size_t> hits_geo(width, 0), hits_iid(width, 0);
  double leak_geo = 0.0, leak_iid = 0.0;
  for (const Row& r : rows) {
    for (std::size_t k = 0; k < width; ++k) {
      hits_geo[k] += r.geo[k];
      hits_iid[k] += r.iid[k];
    }
    leak_geo += r.leak_geo;
    leak_iid += r.leak_iid;
  }
  const auto paired = [&](std::size_t k, double parameter) {
    PairedEstimate p;
    p.parameter = parameter;
    p.geostat = make_estimate(hits_geo[k], rows.size(), options.master_seed, leak_geo,
                              options.confidence);
    p.iid = make_estimate(hits_iid[k], rows.size(), options.master_seed, leak_iid,
                          options.confidence);
    p.ordering = ordering(p.geostat, p.iid);
    return p;
  };
  ComparisonReport report;
  report.point = paired(0, 0.0);
  for (std::size_t k = 0; k < s_grid.size(); ++k) report.segments.push_back(paired(1 + k, s_grid[k]));
  for (std::size_t k = 0; k < n_grid.size(); ++k)
    report.crossings.push_back(paired(1 + s_grid.size() + k, n_grid[k]));
  return report;
}

}  // namespace geoperc
