#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "config.hpp"
#include "geoperc/errors.hpp"
#include "geoperc/version.hpp"
#include "presets.hpp"
#include "report.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitContract = 3;

struct RunFlags {
  std::string config_path;
  std::string preset;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> replications;
  unsigned threads = 1;
  std::string format;
  std::string out;
};

geoperc::cli::ExperimentConfig resolve(const RunFlags& f, const std::string& command) {
  using geoperc::cli::ConfigError;
  if (f.config_path.empty() == f.preset.empty())
    throw ConfigError("give exactly one of --config or --preset");
  auto c = f.preset.empty() ? geoperc::cli::load_config(f.config_path)
                            : geoperc::cli::preset_config(f.preset);
  if (command != "run" && c.command != command)
    throw ConfigError("config is for '" + c.command + "', not '" + command + "'");
  if (f.seed) c.master_seed = *f.seed;
  if (f.replications) c.replications = *f.replications;
  if (!f.format.empty()) c.format = f.format;
  if (!f.out.empty()) c.output = f.out;
  geoperc::cli::validate(c);
  return c;
}

int execute(const RunFlags& f, const std::string& command) {
  try {
    const auto config = resolve(f, command);
    const auto record = geoperc::cli::run_experiment(config, f.threads);
    std::ofstream file;
    if (!config.output.empty() && config.output != "-") {
      file.open(config.output);
      if (!file) throw geoperc::cli::ConfigError("cannot write '" + config.output + "'");
    }
    std::ostream& out = file.is_open() ? file : std::cout;
    if (config.format == "json") geoperc::cli::write_json(record, out);
    else geoperc::cli::write_csv(record, out);
    return 0;
  } catch (const geoperc::cli::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const geoperc::ParameterError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    // ContractError, BracketError, QueryError: the run itself broke a contract.
    std::cerr << "runtime contract violation: " << e.what() << '\n';
    return kExitContract;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo experiments for Boolean models with field-driven radii"};
  app.set_version_flag("--version", geoperc::kLibraryVersion);
  app.require_subcommand(1);

  RunFlags flags;
  std::string chosen;
  std::vector<std::string> commands = geoperc::cli::known_commands();
  commands.push_back("run");
  for (const std::string& name : commands) {
    CLI::App* sub = app.add_subcommand(
        name, name == "run" ? "run whatever command the config names" : "run a " + name + " config");
    sub->add_option("--config", flags.config_path, "experiment config (JSON)");
    sub->add_option("--preset", flags.preset, "name of a built-in preset");
    sub->add_option("--seed", flags.seed, "override master_seed");
    sub->add_option("--replications", flags.replications, "override replications")
        ->check(CLI::PositiveNumber);
    sub->add_option("--threads", flags.threads, "worker threads (output does not depend on it)")
        ->check(CLI::Range(1u, 1024u));
    sub->add_option("--format", flags.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--out", flags.out, "output path ('-' for stdout)");
    sub->callback([&chosen, name] { chosen = name; });
  }

  CLI::App* list = app.add_subcommand("presets", "list built-in presets");
  list->callback([] {
    for (const auto& p : geoperc::cli::builtin_presets()) std::cout << p.name << '\n';
  });
  std::string show_name;
  CLI::App* show = app.add_subcommand("show-preset", "print a preset config as JSON");
  show->add_option("name", show_name)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  if (show->parsed()) {
    try {
      std::cout << geoperc::cli::to_json(geoperc::cli::preset_config(show_name)).dump(2) << '\n';
      return 0;
    } catch (const std::exception& e) {
      std::cerr << "config error: " << e.what() << '\n';
      return kExitConfig;
    }
  }
  if (chosen.empty()) return 0;
  return execute(flags, chosen);
}
