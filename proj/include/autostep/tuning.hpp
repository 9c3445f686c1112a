#pragma once

#include <vector>

#include "autostep/kernel.hpp"

namespace autostep {

// Doubling round lengths: round r runs 2^r iterations, r = 1..rounds.
struct RoundSchedule {
  int rounds = 1;

  long long iterations(int round) const { return 1LL << round; }
  long long total() const { return (1LL << (rounds + 1)) - 2; }
};

struct TunerState {
  double theta0 = 1.0;
  Eigen::VectorXd m_hat_sqrt_diag;  // estimated M-hat^{1/2} diagonal
};

// M^{1/2} = xi * M-hat^{1/2} + (1 - xi) * I.
Eigen::VectorXd mix_sqrt_diag(const Eigen::VectorXd& m_hat_sqrt_diag, double xi);

// Random preconditioner mixing, redrawn every iteration:
// xi ~ (1/3) delta_0 + (1/3) delta_1 + (1/3) Unif(0,1).
MassMatrix mix_preconditioner(const Eigen::VectorXd& m_hat_sqrt_diag, Rng& rng);

// Lower median (for an even count, the smaller of the two middle values),
// which keeps the tuned exponent integral and theta0 on its dyadic grid.
int lower_median(std::vector<int> values);

// End-of-round update: theta0 <- theta0 * 2^median(mu_t), and
// M-hat^{1/2}_ii <- 1 / sd_i of the round's trace, with per-coordinate
// variance floored at 1e-10.
void end_of_round_update(TunerState& tuner, const std::vector<int>& mu_log,
                         const Eigen::MatrixXd& round_trace);

struct RoundRecord {
  int round = 0;
  double theta0 = 0.0;               // value after this round's update
  double mean_selector_evals = 0.0;  // mean forward ell evaluations per iteration
  double acceptance = 0.0;
  Eigen::VectorXd m_hat_sqrt_diag;   // value after this round's update
};

struct TunedRun {
  Eigen::MatrixXd final_trace;  // draws of the final round, one row per iteration
  std::vector<IterationRecord> final_records;
  std::vector<RoundRecord> history;
  TunerState tuner;
};

// Round-based tuning of theta0 and the diagonal preconditioner.  Within a
// round theta0 and M-hat are frozen and only the random mixing varies; the
// last state of each round seeds the next.  config.theta0 provides the
// initial value (1 by default); M-hat starts at the identity.
TunedRun run_tuned(Eigen::VectorXd x0, const RoundSchedule& schedule, Target& target,
                   KernelConfig config, Rng& rng);

}  // namespace autostep
