// Command-line front end: run (execute an experiment config), validate
// (parse and check a config without simulating), synth (generate synthetic
// trajectories; requires mode "synth-data").
//
// Exit codes: 0 success, 2 configuration error, 3 data error, 1 internal.

#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "ipd/config.hpp"
#include "ipd/error.hpp"
#include "ipd/experiment.hpp"

namespace {

int run_command(const std::string& config_path, const std::string& out_override, bool synth_only) {
  ipd::ExperimentConfig cfg = ipd::load_config(config_path);
  if (synth_only && cfg.mode != ipd::ExperimentConfig::Mode::Synth)
    throw ipd::ConfigError("synth requires config key \"mode\" = \"synth-data\", got \"" +
                           ipd::mode_name(cfg.mode) + "\"");
  ipd::RunOptions opts;
  if (!out_override.empty()) opts.out_override = out_override;
  const ipd::RunSummary summary = ipd::run_experiment(cfg, opts);
  std::cout << "wrote " << summary.out_dir << "/\n";
  for (const std::string& file : summary.files) std::cout << "  " << file << "\n";
  return 0;
}

int validate_command(const std::string& config_path) {
  const ipd::ExperimentConfig cfg = ipd::load_config(config_path);
  std::cout << "config ok: mode " << ipd::mode_name(cfg.mode) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Iterated prisoner's dilemma tournament and imitation-learning toolkit"};
  app.require_subcommand(1);

  std::string run_config;
  std::string run_out;
  CLI::App* run = app.add_subcommand("run", "Execute an experiment config");
  run->add_option("config", run_config, "Experiment config JSON file")->required();
  run->add_option("--out", run_out, "Override the configured output directory");

  std::string validate_config;
  CLI::App* validate = app.add_subcommand("validate", "Parse and check a config, no simulation");
  validate->add_option("config", validate_config, "Experiment config JSON file")->required();

  std::string synth_config;
  std::string synth_out;
  CLI::App* synth = app.add_subcommand("synth", "Generate synthetic trajectories");
  synth->add_option("config", synth_config, "Config JSON file with mode \"synth-data\"")
      ->required();
  synth->add_option("--out", synth_out, "Override the configured output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (run->parsed()) return run_command(run_config, run_out, false);
    if (validate->parsed()) return validate_command(validate_config);
    return run_command(synth_config, synth_out, true);
  } catch (const ipd::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const ipd::PayoffError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const ipd::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
