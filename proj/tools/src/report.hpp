#pragma once

#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "config.hpp"
#include "json.hpp"

namespace geoperc::cli {

inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

/// One flat output row. NaN grid coordinates mean "not applicable" and are
/// written as empty CSV cells and JSON nulls.
struct ResultRow {
  std::string experiment;
  std::string field_family;
  std::string marking;
  double lambda = kMissing;
  double n = kMissing;
  double s = kMissing;
  double mu = kMissing;
  double p = kMissing;
  double value = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::size_t reps = 0;
  std::uint64_t seed = 0;
  double leakage_budget = 0.0;
  /// Command-specific detail (orderings, criteria); JSON output only.
  nlohmann::json extra = nlohmann::json::object();
};

struct ResultRecord {
  ExperimentConfig config;
  std::vector<ResultRow> rows;
  double wall_seconds = 0.0;
};

/// Runs the configured command. Replications use up to `threads` workers;
/// the rows do not depend on the thread count.
ResultRecord run_experiment(const ExperimentConfig& config, unsigned threads);

inline const char* kCsvHeader =
    "experiment,field_family,marking,lambda,n,s,mu,p,value,ci_low,ci_high,reps,seed,"
    "leakage_budget";

void write_csv(const ResultRecord& record, std::ostream& out);
nlohmann::json to_json(const ResultRecord& record);
void write_json(const ResultRecord& record, std::ostream& out);

}  // namespace geoperc::cli
