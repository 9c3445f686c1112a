#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "autostep/diagnostics.hpp"
#include "autostep/targets.hpp"
#include "autostep/tuning.hpp"

namespace autostep {

struct SamplerSpec {
  bool autostep = true;
  ProposalKind kind = ProposalKind::rwmh;
  int path_length = 1;

  Involution involution() const { return {kind, path_length}; }
  std::string canonical_name() const;
};

// Accepts autostep-{rwmh,mala,hmc} and fixed-{rwmh,mala,hmc}; hmc takes an
// optional inline path length, e.g. "autostep-hmc(4)", otherwise
// `default_hmc_steps` applies.
SamplerSpec parse_sampler(const std::string& name, int default_hmc_steps = 10);

Criterion parse_criterion(const std::string& name);

struct ExperimentConfig {
  std::string target = "gaussian";
  std::string sampler = "autostep-rwmh";
  std::string criterion = "symmetric";
  std::vector<double> theta0 = {1.0};
  long long iterations = 10000;
  int rounds = 20;
  std::uint64_t seed = 1;
  std::string out = "autostep_out.csv";
  std::string ref;        // reference-sample CSV for KSESS
  double alpha = -1.0;    // < 0: use the registry constant, or 1.0
  int hmc_steps = 10;
  int threads = 0;        // 0: hardware concurrency
  std::string data_dir = "data";
  std::vector<double> norms;  // acceptance-profile norms; empty: 1e-5..1e2
  long long replicates = 10000;
  std::string trace;      // input trace for the standalone ksess command
};

// FNV-1a digest of the canonical config representation; stamped into every
// emitted CSV together with the seed and library version.
std::string config_digest(const ExperimentConfig& config);

// Subcommand drivers.  All outputs are deterministic functions of
// (config, seed), independent of thread count.
void run_sample(const ExperimentConfig& config);
void run_sweep(const ExperimentConfig& config);
void run_tune(const ExperimentConfig& config);
void run_acceptance_profile(const ExperimentConfig& config);
void run_ksess_file(const ExperimentConfig& config);

// Helpers shared with the test suites.
Eigen::VectorXd initial_point(const Target& target, Rng& rng);
CostModel cost_model_for(const std::string& target_name, double alpha_override);

struct CellResult {
  std::string sampler;
  double theta0 = 0.0;
  RunSummary summary;
  double ksess_value = -1.0;  // < 0 when no usable reference
};

// One (theta0, autostep-or-fixed) sweep cell, exposed for the acceptance
// suite; `stream` selects the RNG stream.
CellResult run_sweep_cell(const std::string& target_name, const std::string& data_dir,
                          const SamplerSpec& spec, Criterion criterion, double theta0,
                          long long iterations, std::uint64_t seed, std::uint64_t stream,
                          double alpha_override, const ReferenceDistribution* reference);

}  // namespace autostep
