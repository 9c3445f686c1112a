#include "autostep/tuning.hpp"

#include <algorithm>
#include <cmath>

namespace autostep {

Eigen::VectorXd mix_sqrt_diag(const Eigen::VectorXd& m_hat_sqrt_diag, double xi) {
  return (xi * m_hat_sqrt_diag.array() + (1.0 - xi)).matrix();
}

MassMatrix mix_preconditioner(const Eigen::VectorXd& m_hat_sqrt_diag, Rng& rng) {
  const double branch = rng.uniform();
  double xi;
  if (branch < 1.0 / 3.0)
    xi = 0.0;
  else if (branch < 2.0 / 3.0)
    xi = 1.0;
  else
    xi = rng.uniform();  // Beta(1,1)
  return MassMatrix(mix_sqrt_diag(m_hat_sqrt_diag, xi));
}

int lower_median(std::vector<int> values) {
  if (values.empty()) throw std::invalid_argument("median of empty set");
  const std::size_t k = (values.size() - 1) / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(k),
                   values.end());
  return values[k];
}

void end_of_round_update(TunerState& tuner, const std::vector<int>& mu_log,
                         const Eigen::MatrixXd& round_trace) {
  if (mu_log.empty() || round_trace.rows() == 0)
    throw std::invalid_argument("end_of_round_update: empty round trace");

  tuner.theta0 = std::ldexp(tuner.theta0, lower_median(mu_log));

  const Eigen::Index n = round_trace.rows();
  const double denom = static_cast<double>(std::max<Eigen::Index>(n - 1, 1));
  Eigen::VectorXd variance(round_trace.cols());
  for (Eigen::Index j = 0; j < round_trace.cols(); ++j) {
    const double mu = round_trace.col(j).mean();
    variance[j] = (round_trace.col(j).array() - mu).square().sum() / denom;
  }
  variance = variance.cwiseMax(1e-10);  // stuck coordinates
  tuner.m_hat_sqrt_diag = variance.cwiseSqrt().cwiseInverse();
}

TunedRun run_tuned(Eigen::VectorXd x0, const RoundSchedule& schedule, Target& target,
                   KernelConfig config, Rng& rng) {
  if (schedule.rounds < 1) throw ConfigError("tuning requires at least one round");

  TunedRun out;
  out.tuner.theta0 = config.theta0;
  out.tuner.m_hat_sqrt_diag = Eigen::VectorXd::Ones(target.dim());

  ChainState state = make_chain_state(target, config.family, std::move(x0));

  for (int round = 1; round <= schedule.rounds; ++round) {
    const long long iters = schedule.iterations(round);
    config.theta0 = out.tuner.theta0;

    Eigen::MatrixXd trace(iters, target.dim());
    std::vector<IterationRecord> records;
    records.reserve(static_cast<std::size_t>(iters));
    std::vector<int> mu_log;
    mu_log.reserve(static_cast<std::size_t>(iters));

    for (long long t = 0; t < iters; ++t) {
      const MassMatrix mass = mix_preconditioner(out.tuner.m_hat_sqrt_diag, rng);
      const IterationRecord rec = autostep_transition(state, target, mass, config, rng);
      trace.row(t) = state.x;
      mu_log.push_back(rec.j_forward);
      records.push_back(rec);
    }

    end_of_round_update(out.tuner, mu_log, trace);

    RoundRecord rr;
    rr.round = round;
    rr.theta0 = out.tuner.theta0;
    rr.m_hat_sqrt_diag = out.tuner.m_hat_sqrt_diag;
    double evals = 0.0, accepted = 0.0;
    for (const auto& rec : records) {
      evals += rec.selector_evals;
      accepted += rec.accepted ? 1.0 : 0.0;
    }
    rr.mean_selector_evals = evals / static_cast<double>(iters);
    rr.acceptance = accepted / static_cast<double>(iters);
    out.history.push_back(std::move(rr));

    if (round == schedule.rounds) {
      out.final_trace = std::move(trace);
      out.final_records = std::move(records);
    }
  }
  return out;
}

}  // namespace autostep
