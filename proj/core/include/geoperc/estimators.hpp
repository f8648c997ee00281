#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

#include "geoperc/fields.hpp"
#include "geoperc/model.hpp"
#include "geoperc/rng.hpp"

namespace geoperc {

inline constexpr double kDefaultEps0 = 0.2;

struct RunOptions {
  std::size_t replications = 1000;
  std::uint64_t master_seed = 1;
  unsigned threads = 1;
  double confidence = 0.95;
};

/// Monte Carlo probability with a Wilson score interval.
struct Estimate {
  double value = 0.0;
  double ci_low = 0.0;
  double ci_high = 1.0;
  std::size_t replications = 0;
  std::size_t successes = 0;
  std::uint64_t master_seed = 0;
  /// Sum over replications of the per-replication leakage budgets: a union
  /// bound on the chance that any replication missed a far disc.
  double leakage_budget_total = 0.0;

  double standard_error() const;
};

struct Interval {
  double low;
  double high;
};

/// Two-sided standard normal quantile for the given confidence.
double normal_critical_value(double confidence);
Interval wilson_interval(std::size_t successes, std::size_t n, double confidence = 0.95);
Estimate make_estimate(std::size_t successes, std::size_t replications, std::uint64_t master_seed,
                       double leakage_budget_total = 0.0, double confidence = 0.95);

/// Seed of replication `rep` under `master`.
inline std::uint64_t replication_seed(std::uint64_t master, std::size_t rep) {
  return derive_seed(master, {static_cast<std::uint64_t>(rep)});
}

void validate(const RunOptions& options);

/// Runs body(rep, seed) for rep in [0, replications) on up to
/// options.threads workers. Results are stored by replication index, so the
/// output does not depend on scheduling. The first exception thrown by any
/// replication is rethrown after all workers stop.
template <class R, class F>
std::vector<R> run_replications(const RunOptions& options, F&& body) {
  validate(options);
  const std::size_t n = options.replications;
  std::vector<std::optional<R>> slots(n);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  const auto worker = [&] {
    for (;;) {
      const std::size_t rep = next.fetch_add(1);
      if (rep >= n || failed.load()) return;
      try {
        slots[rep].emplace(body(rep, replication_seed(options.master_seed, rep)));
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        failed = true;
        return;
      }
    }
  };
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(std::max(1u, options.threads), n));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
  std::vector<R> out;
  out.reserve(n);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

/// Outcome of one replication of a binary event.
struct Trial {
  bool success = false;
  double leakage_budget = 0.0;
};
using Event = std::function<Trial(std::uint64_t replication_seed)>;

Estimate estimate_probability(const Event& event, const RunOptions& options);

/// P(0 in O).
Estimate estimate_point_coverage(const ModelSpec& model, double lambda, const RunOptions& options);
/// P([0, s] x {0} in O).
Estimate estimate_segment_coverage(const ModelSpec& model, double lambda, double s,
                                   const RunOptions& options);
/// P(Cross(3n, n)): an occupied left-right crossing of [0, 3n] x [0, n].
Estimate estimate_crossing(const ModelSpec& model, double lambda, double n,
                           const RunOptions& options);

/// |Cov(X, Y)| of two indicators, maximized over a finite family of
/// (X, Y) pairs. The interval is for |Cov| and is Bonferroni-adjusted over
/// the family size.
struct CovarianceEstimate {
  double value = 0.0;       // max over the family of |cov|
  double covariance = 0.0;  // signed covariance of the maximizing pair
  double standard_error = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::size_t replications = 0;
  std::size_t family_size = 1;
  std::uint64_t master_seed = 0;
  double leakage_budget_total = 0.0;
};

/// Covariance estimate of paired indicator samples.
CovarianceEstimate estimate_covariance(const std::vector<std::uint8_t>& x,
                                       const std::vector<std::uint8_t>& y, double confidence,
                                       std::size_t family_size = 1);

/// P(O ∩ K != O_{K'} ∩ K) with K = B_inf(0, n) and K' = B_inf(0, (1 + eps0/4) n),
/// estimated by the event that a disc centred outside K' meets K.
Estimate estimate_pi_lambda(const ModelSpec& model, double lambda, double n, double eps0,
                            const RunOptions& options);

/// Lower-bound proxy for the field mixing coefficient between
/// B_inf(0, (1 + eps0/4) n) and B_inf(((2 + eps0) n, 0), (1 + eps0/4) n). Test
/// functions per box: 1{min of phi over a 33x33 probe grid > t} and
/// 1{phi(centre) > t} for t in test_levels.
CovarianceEstimate estimate_field_mixing_proxy(const FieldSpec& field, double n, double eps0,
                                               const std::vector<double>& test_levels,
                                               const RunOptions& options);

/// Levels {Q(1/4), Q(1/2), Q(3/4)} of the marginal, deduplicated.
std::vector<double> default_test_levels(const FieldSpec& field);

struct RhoReport {
  /// |Cov| of the left-right crossing indicators of B_inf(0, n) and
  /// ((2 + eps0) n, 0) + B_inf(0, n); a lower bound on rho.
  CovarianceEstimate rho;
  Estimate pi;
  /// Field mixing proxy; zero for i.i.d. models.
  CovarianceEstimate pibar;
  /// 4 pi + pibar; an upper bound on rho only up to the pibar proxy.
  double upper_bound = 0.0;
  /// Standard error of rho - upper_bound.
  double slack_sigma = 0.0;
};

RhoReport estimate_rho_proxy(const ModelSpec& model, double lambda, double n, double eps0,
                             const RunOptions& options);

struct PairedEstimate {
  double parameter = 0.0;  // s for segments, n for crossings, 0 for the point
  Estimate geostat;
  Estimate iid;
  /// +1 if the geostatistical CI lies strictly above the i.i.d. CI, -1 if
  /// strictly below, 0 if they overlap.
  int ordering = 0;
};

struct ComparisonReport {
  PairedEstimate point;
  std::vector<PairedEstimate> segments;
  std::vector<PairedEstimate> crossings;  // Cross(3n, n)
};

int ordering(const Estimate& a, const Estimate& b);

/// Paired-seed comparison of the geostatistical model and the i.i.d. model
/// with radius law iid_radii, which must equal the field's marginal.
ComparisonReport compare_geostat_iid(const FieldSpec& field, const RadialDistribution& iid_radii,
                                     double lambda, const std::vector<double>& s_grid,
                                     const std::vector<double>& n_grid, const RunOptions& options,
                                     double eps_leak = kDefaultEpsLeak);

}  // namespace geoperc
