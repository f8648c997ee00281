#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "geoperc/model.hpp"

namespace geoperc::cli {

inline constexpr int kSchemaVersion = 1;

/// Raised for any malformed or out-of-range configuration; maps to exit 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One experiment: what to run, on which model, over which grids.
struct ExperimentConfig {
  std::string command;     // estimate, scan-lambda, lambda-c, compare, voronoi-scan, check-contraction
  std::string experiment;  // label written to every output row
  std::string quantity;    // estimate only
  std::string note;        // free text echoed into JSON output
  ModelSpec model = ModelSpec::geostatistical(FieldSpec::constant(1.0));

  std::vector<double> lambda, n, s, mu, p;
  // voronoi-scan cell values
  double a = 1.0;
  double b = 2.0;
  // lambda-c: explicit [low, high] or empty for an automatic search
  std::vector<double> bracket;
  double high_guess = 1.0;
  double tolerance = 0.005;
  bool stability_check = false;

  std::size_t replications = 2000;
  std::uint64_t master_seed = 1;
  double eps0 = 0.2;
  std::string output;  // empty: stdout
  std::string format = "csv";

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

const std::vector<std::string>& known_commands();
const std::vector<std::string>& known_quantities();

nlohmann::json to_json(const RadialDistribution& law);
RadialDistribution radial_from_json(const nlohmann::json& j);
nlohmann::json to_json(const FieldSpec& field);
FieldSpec field_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ModelSpec& model);
ModelSpec model_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ExperimentConfig& config);
/// Parses and validates; throws ConfigError.
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);

/// Checks every precondition the command will meet before sampling.
void validate(const ExperimentConfig& config);

}  // namespace geoperc::cli
