#pragma once

#include <span>
#include <vector>

#include "autostep/selector.hpp"

namespace autostep {

// Position plus cached log density / gradient, so repeated transitions never
// re-evaluate the current state.
struct ChainState {
  Eigen::VectorXd x;
  double log_gamma = neg_inf;
  Eigen::VectorXd grad;  // empty for gradient-free families
};

// Evaluates the initial state; throws if it has zero density.
ChainState make_chain_state(Target& target, const Involution& family,
                            Eigen::VectorXd x0);

struct IterationRecord {
  bool accepted = false;
  double ell_abs = 0.0;      // |ell| at the selected step size
  double energy_jump = 0.0;  // |ell| * 1[accepted]
  int j_forward = 0;
  int j_reverse = 0;
  long long cost_ell = 0;   // log-density evaluations this iteration
  long long cost_grad = 0;  // gradient evaluations this iteration
  int selector_evals = 0;   // forward selector's ell evaluations (1 + loop passes)
  int selector_evals_reverse = 0;
  bool capped = false;
  double theta = 0.0;        // selected step size
  double jump_distance = 0.0;
};

// One AutoStep iteration: momentum and threshold refreshment, forward step
// size selection, involutive proposal, a second selector run from the
// proposed point with the same thresholds (the move is vetoed unless it
// picks the same exponent), then the Metropolis accept/reject on ell.
IterationRecord autostep_transition(ChainState& state, Target& target,
                                    const MassMatrix& mass, const KernelConfig& config,
                                    Rng& rng);

// Standard involutive MCMC with a pinned step size: one ell evaluation,
// accept with probability min{1, exp(ell)}.
IterationRecord fixed_step_transition(ChainState& state, Target& target,
                                      const MassMatrix& mass, const Involution& family,
                                      double theta, Rng& rng);

struct AcceptanceProfileRow {
  double norm = 0.0;
  Criterion criterion = Criterion::symmetric;
  double acceptance = 0.0;
  long long replicates = 0;
};

// Mean one-step acceptance of the AutoStep kernel started from exact target
// draws rescaled to each norm; one row per (norm, criterion).  Requires a
// target with an exact sampler.
std::vector<AcceptanceProfileRow> acceptance_probability_profile(
    std::span<const double> norms, const Target& target, const KernelConfig& config,
    std::span<const Criterion> criteria, long long replicates, std::uint64_t seed);

}  // namespace autostep
