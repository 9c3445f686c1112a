#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "autostep/experiment.hpp"
#include "autostep/version.hpp"

namespace {

void add_common_options(CLI::App* cmd, autostep::ExperimentConfig& config) {
  cmd->add_option("--target", config.target, "target name (see targets list)");
  cmd->add_option("--sampler", config.sampler,
                  "autostep-{rwmh,mala,hmc[(L)]} or fixed-{rwmh,mala,hmc[(L)]}");
  cmd->add_option("--criterion", config.criterion, "symmetric or asymmetric");
  cmd->add_option("--theta0", config.theta0, "initial step size(s); lists drive sweeps")
      ->delimiter(',');
  cmd->add_option("--iters", config.iterations, "iterations per chain");
  cmd->add_option("--rounds", config.rounds, "tuning rounds");
  cmd->add_option("--seed", config.seed, "master seed");
  cmd->add_option("--out", config.out, "output CSV path");
  cmd->add_option("--ref", config.ref, "reference sample CSV (one column per coordinate)");
  cmd->add_option("--alpha", config.alpha, "gradient cost weight; default from registry");
  cmd->add_option("--hmc-steps", config.hmc_steps, "leapfrog count for plain 'hmc' samplers");
  cmd->add_option("--threads", config.threads, "worker threads for sweeps (0 = hardware)");
  cmd->add_option("--data-dir", config.data_dir, "directory with the model datasets");
  cmd->add_option("--config", "flat key=value configuration file (flags override it)");
}

// Expands `--config FILE` into the equivalent flags, inserted right after the
// subcommand so that explicit command-line flags take precedence.
std::vector<std::string> expand_config_file(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);

  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw autostep::ConfigError("--config needs a file path");
      path = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
      break;
    }
  }
  if (path.empty()) return args;
  if (args.empty())
    throw autostep::ConfigError("--config requires a subcommand on the command line");

  std::ifstream in(path);
  if (!in) throw autostep::ConfigError("cannot open config file: " + path);

  std::vector<std::string> expanded;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw autostep::ConfigError("config file line is not key=value: " + line);
    std::string key = line.substr(first, eq - first);
    while (!key.empty() && (key.back() == ' ' || key.back() == '\t')) key.pop_back();
    std::string value = line.substr(eq + 1);
    const auto vstart = value.find_first_not_of(" \t");
    value = vstart == std::string::npos ? "" : value.substr(vstart);
    expanded.push_back("--" + key);
    expanded.push_back(value);
  }

  // file-provided flags go directly after the subcommand token
  std::vector<std::string> result;
  result.push_back(args.front());
  result.insert(result.end(), expanded.begin(), expanded.end());
  result.insert(result.end(), args.begin() + 1, args.end());
  return result;
}

}  // namespace

int main(int argc, char** argv) {
  autostep::ExperimentConfig config;

  CLI::App app{std::string("autostep v") + autostep::library_version +
               " - locally adaptive involutive MCMC"};
  app.require_subcommand(1);

  auto* sample = app.add_subcommand("sample", "run one chain; emits trace + summary CSVs");
  add_common_options(sample, config);

  auto* sweep = app.add_subcommand(
      "sweep", "run autostep and fixed-step chains over a theta0 grid");
  add_common_options(sweep, config);

  auto* tune = app.add_subcommand("tune", "round-based tuning; emits history + final trace");
  add_common_options(tune, config);

  auto* profile = app.add_subcommand(
      "acceptance-profile", "one-step acceptance vs state norm, both criteria");
  add_common_options(profile, config);
  profile->add_option("--norms", config.norms, "state norms (default 1e-5..1e2)")
      ->delimiter(',');
  profile->add_option("--replicates", config.replicates, "replicates per norm");

  auto* ksess_cmd =
      app.add_subcommand("ksess", "KSESS diagnostic over a trace file + reference");
  add_common_options(ksess_cmd, config);
  ksess_cmd->add_option("--trace", config.trace, "trace CSV to diagnose")->required();

  std::vector<std::string> args;
  try {
    args = expand_config_file(argc, argv);
  } catch (const autostep::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  std::vector<const char*> argv2;
  argv2.push_back(argc > 0 ? argv[0] : "autostep");
  for (const auto& a : args) argv2.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv2.size()), argv2.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (sample->parsed()) autostep::run_sample(config);
    if (sweep->parsed()) autostep::run_sweep(config);
    if (tune->parsed()) autostep::run_tune(config);
    if (profile->parsed()) autostep::run_acceptance_profile(config);
    if (ksess_cmd->parsed()) autostep::run_ksess_file(config);
  } catch (const autostep::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
