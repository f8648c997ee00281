#pragma once

#include <optional>
#include <string>
#include <vector>

#include "geoperc/estimators.hpp"
#include "geoperc/model.hpp"

namespace geoperc {

/// The constant gamma of the finite-size criterion.
inline constexpr double kFiniteSizeGamma = 1.0 / 200.0;

/// Coupled crossing thresholds of one replication on [0, 3n] x [0, n]:
/// `hard` is the least intensity with a left-right crossing (Cross(3n, n)),
/// `easy` the least with a top-bottom crossing, which by rotation
/// invariance has the law of Cross(n, 3n). +inf means none by lambda_max.
struct CrossingSample {
  double hard;
  double easy;
  double leakage_budget;
};

std::vector<CrossingSample> sample_crossing_thresholds(const ModelSpec& model, double n,
                                                       double lambda_max,
                                                       const RunOptions& options);

struct CrossingCurve {
  double n = 0.0;
  std::vector<double> lambda_grid;
  std::vector<Estimate> hard;  // P(Cross(3n, n))
  std::vector<Estimate> easy;  // P(Cross(n, 3n))
};

CrossingCurve curve_from_samples(const std::vector<CrossingSample>& samples, double n,
                                 const std::vector<double>& lambda_grid,
                                 const RunOptions& options);

/// One coupled realization per replication at max(grid), evaluated at every
/// grid point, so each curve is nondecreasing pathwise.
CrossingCurve crossing_curve(const ModelSpec& model, double n,
                             const std::vector<double>& lambda_grid, const RunOptions& options);

enum class Criterion { supercritical, subcritical, undetermined };
std::string to_string(Criterion c);

/// Supercritical if the CI lower bound of P(Cross(3n, n)) exceeds 1 - gamma;
/// subcritical if the CI upper bound of P(Cross(n, 3n)) is below gamma.
Criterion finite_size_classify(const Estimate& hard, const Estimate& easy);
std::vector<Criterion> finite_size_classify(const CrossingCurve& curve);

struct ThresholdResult {
  /// Largest intensity certified subcritical and smallest certified
  /// supercritical, each to within the bisection tolerance.
  double lambda_low = 0.0;
  double lambda_high = 0.0;
  double n_used = 0.0;
  std::string criterion;
  /// Set when a stability check at 2n was run; converged iff the brackets
  /// at n and 2n overlap.
  std::optional<Interval> stability_bracket;
  bool converged = false;
  CrossingCurve curve;

  double midpoint() const { return 0.5 * (lambda_low + lambda_high); }
};

/// Finite-size pseudo-critical bracket at scale n. The initial bracket
/// must classify subcritical at its low end and supercritical at its high
/// end (else BracketError). Replications are fixed; the bisection runs on
/// one coupled sample with lambda_max = bracket.high.
ThresholdResult estimate_lambda_c(const ModelSpec& model, double n, Interval bracket,
                                  double tolerance, const RunOptions& options,
                                  bool stability_check = false);

/// As estimate_lambda_c with bracket [0, high_guess]; high_guess is doubled
/// (up to 5 times) until it classifies supercritical.
ThresholdResult estimate_lambda_c_auto(const ModelSpec& model, double n, double high_guess,
                                       double tolerance, const RunOptions& options,
                                       bool stability_check = false);

/// Bracket ordering: +1 if a lies strictly above b, -1 strictly below, 0 if
/// they overlap.
int ordering(const ThresholdResult& a, const ThresholdResult& b);

struct ContractionReport {
  double lambda = 0.0;
  double n = 0.0;
  Estimate q_n;      // 1 - P(Cross(3n, n))
  Estimate q_3n;     // 1 - P(Cross(9n, 3n))
  Estimate pi_9n;    // locality defect at 9n
  CovarianceEstimate pibar_9n;
  /// 49 q(n)^2 + 4 pi(9n) + pibar(9n).
  double rhs = 0.0;
  /// Three standard errors of q(3n) - rhs.
  double slack = 0.0;
  bool holds = false;
  /// "holds" or "inconclusive" (the pibar term is only a lower-bound proxy).
  std::string status;
};

ContractionReport check_contraction(const ModelSpec& model, double lambda, double n,
                                    const RunOptions& options, double eps0 = kDefaultEps0);

struct VoronoiScanRow {
  double mu = 0.0;
  double p = 0.0;
  ThresholdResult geostat;
  ThresholdResult iid;
  /// ordering(geostat, iid).
  int ordering = 0;
};

/// Threshold brackets of the two-point Voronoi model and of its i.i.d.
/// counterpart for every (mu, p). Requires b < (eps0 / 4) n.
std::vector<VoronoiScanRow> voronoi_threshold_scan(const std::vector<double>& mu_grid,
                                                   const std::vector<double>& p_grid, double a,
                                                   double b, double n, double tolerance,
                                                   const RunOptions& options,
                                                   double eps0 = kDefaultEps0);

}  // namespace geoperc
