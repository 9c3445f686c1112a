#include "autostep/kernel.hpp"

namespace autostep {

ChainState make_chain_state(Target& target, const Involution& family,
                            Eigen::VectorXd x0) {
  ChainState state;
  state.x = std::move(x0);
  state.log_gamma = target.log_density(state.x);
  if (!std::isfinite(state.log_gamma))
    throw std::domain_error("chain initialized at a zero-density point");
  if (family.needs_gradient()) state.grad = target.gradient(state.x);
  return state;
}

namespace {

void accept_proposal(ChainState& state, ProposalEval&& eval) {
  state.x = std::move(eval.point.x);
  state.log_gamma = eval.log_gamma;
  state.grad = std::move(eval.grad);
}

}  // namespace

IterationRecord autostep_transition(ChainState& state, Target& target,
                                    const MassMatrix& mass, const KernelConfig& config,
                                    Rng& rng) {
  const EvalCounters before = target.counters();
  IterationRecord rec;

  Eigen::VectorXd z = mass.sample_momentum(rng);

  if (!config.selector_enabled) {
    // Dirac step size distribution at theta0: plain involutive MCMC.
    LogRatioEvaluator evaluator(target, config.family, mass,
                                {state.x, std::move(z)}, state.log_gamma, state.grad);
    ProposalEval eval = evaluator.eval(config.theta0);
    rec.selector_evals = 1;
    rec.theta = config.theta0;
    rec.ell_abs = std::abs(eval.ell);
    const double u = rng.uniform();
    rec.accepted = std::log(u) < eval.ell;
    if (rec.accepted) {
      rec.energy_jump = rec.ell_abs;
      rec.jump_distance = (eval.point.x - state.x).norm();
      accept_proposal(state, std::move(eval));
    }
    const EvalCounters after = target.counters();
    rec.cost_ell = after.log_density - before.log_density;
    rec.cost_grad = after.gradient - before.gradient;
    return rec;
  }

  const ThresholdPair pair = sample_thresholds(rng);

  LogRatioEvaluator forward(target, config.family, mass, {state.x, std::move(z)},
                            state.log_gamma, state.grad);
  SelectorResult sel = select_step_size(forward, pair, config);

  // Reversibility check: rerun the selector from the proposed phase point
  // with the same thresholds and initial step size.  The step size
  // refreshment density is a Dirac mass, so its ratio in the acceptance
  // probability is 1[j' = j].
  LogRatioEvaluator reverse(target, config.family, mass, sel.chosen.point,
                            sel.chosen.log_gamma, sel.chosen.grad);
  SelectorResult rev = select_step_size(reverse, pair, config);

  rec.j_forward = sel.j;
  rec.j_reverse = rev.j;
  rec.selector_evals = sel.ell_evals;
  rec.selector_evals_reverse = rev.ell_evals;
  rec.capped = sel.capped || rev.capped;
  rec.theta = sel.theta;
  rec.ell_abs = std::abs(sel.chosen.ell);

  const double u = rng.uniform();
  rec.accepted = (rev.j == sel.j) && (std::log(u) < sel.chosen.ell);
  if (rec.accepted) {
    rec.energy_jump = rec.ell_abs;
    rec.jump_distance = (sel.chosen.point.x - state.x).norm();
    accept_proposal(state, std::move(sel.chosen));
  }

  const EvalCounters after = target.counters();
  rec.cost_ell = after.log_density - before.log_density;
  rec.cost_grad = after.gradient - before.gradient;
  return rec;
}

IterationRecord fixed_step_transition(ChainState& state, Target& target,
                                      const MassMatrix& mass, const Involution& family,
                                      double theta, Rng& rng) {
  const EvalCounters before = target.counters();
  IterationRecord rec;
  rec.theta = theta;

  Eigen::VectorXd z = mass.sample_momentum(rng);
  LogRatioEvaluator evaluator(target, family, mass, {state.x, std::move(z)},
                              state.log_gamma, state.grad);
  ProposalEval eval = evaluator.eval(theta);
  rec.selector_evals = 1;
  rec.ell_abs = std::abs(eval.ell);

  const double u = rng.uniform();
  rec.accepted = std::log(u) < eval.ell;
  if (rec.accepted) {
    rec.energy_jump = rec.ell_abs;
    rec.jump_distance = (eval.point.x - state.x).norm();
    accept_proposal(state, std::move(eval));
  }

  const EvalCounters after = target.counters();
  rec.cost_ell = after.log_density - before.log_density;
  rec.cost_grad = after.gradient - before.gradient;
  return rec;
}

std::vector<AcceptanceProfileRow> acceptance_probability_profile(
    std::span<const double> norms, const Target& target, const KernelConfig& config,
    std::span<const Criterion> criteria, long long replicates, std::uint64_t seed) {
  if (!target.has_exact_sampler())
    throw ConfigError("acceptance profile requires a target with an exact sampler");

  std::vector<AcceptanceProfileRow> rows;
  std::uint64_t stream = 0;
  for (std::size_t ni = 0; ni < norms.size(); ++ni) {
    for (const Criterion criterion : criteria) {
      Rng rng(seed, stream++);
      Target chain_target = target;  // fresh counters per cell
      KernelConfig cfg = config;
      cfg.criterion = criterion;
      const MassMatrix mass = MassMatrix::identity(target.dim());

      long long accepted = 0;
      for (long long r = 0; r < replicates; ++r) {
        Eigen::VectorXd x = chain_target.exact_draw(rng);
        double nx = x.norm();
        while (nx == 0.0) {
          x = chain_target.exact_draw(rng);
          nx = x.norm();
        }
        x *= norms[ni] / nx;
        ChainState state = make_chain_state(chain_target, cfg.family, std::move(x));
        const IterationRecord rec = autostep_transition(state, chain_target, mass, cfg, rng);
        accepted += rec.accepted ? 1 : 0;
      }
      AcceptanceProfileRow row;
      row.norm = norms[ni];
      row.criterion = criterion;
      row.replicates = replicates;
      row.acceptance =
          replicates > 0 ? static_cast<double>(accepted) / static_cast<double>(replicates) : 0.0;
      if (replicates > 0) rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace autostep
