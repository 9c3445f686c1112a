#include "autostep/selector.hpp"

#include <algorithm>

namespace autostep {

namespace {

// |ell| with NaN (which the evaluator never produces) and -inf both mapped
// to +inf, so degenerate proposals always look too large.
double abs_ell(double ell) {
  return std::isfinite(ell) ? std::abs(ell) : std::numeric_limits<double>::infinity();
}

int initial_direction(double ell, double log_a, double log_b, Criterion criterion) {
  if (criterion == Criterion::symmetric) {
    const double m = abs_ell(ell);
    // strict comparisons: boundary ties resolve to v = 0
    return (m < -log_b ? 1 : 0) - (m > -log_a ? 1 : 0);
  }
  return (ell > log_b ? 1 : 0) - (ell < log_a ? 1 : 0);
}

bool stop_doubling(double ell, double log_b, Criterion criterion) {
  if (criterion == Criterion::symmetric) return abs_ell(ell) >= -log_b;
  return ell <= log_b;
}

bool stop_halving(double ell, double log_a, Criterion criterion) {
  if (criterion == Criterion::symmetric) return abs_ell(ell) <= -log_a;
  return ell >= log_a;
}

}  // namespace

ThresholdPair sample_thresholds(Rng& rng) {
  while (true) {
    const double u1 = rng.uniform();
    const double u2 = rng.uniform();
    if (u1 == u2) continue;
    return {std::min(u1, u2), std::max(u1, u2)};
  }
}

SelectorResult select_step_size(LogRatioEvaluator& evaluator, const ThresholdPair& pair,
                                const KernelConfig& config) {
  const double log_a = pair.log_a();
  const double log_b = pair.log_b();

  SelectorResult result;
  result.chosen = evaluator.eval(config.theta0);
  result.ell_evals = 1;
  result.theta = config.theta0;

  const int v = initial_direction(result.chosen.ell, log_a, log_b, config.criterion);
  if (v == 0) return result;

  ProposalEval prev = std::move(result.chosen);
  int j = 0;
  while (true) {
    j += v;
    const double theta = std::ldexp(config.theta0, j);
    ProposalEval cur = evaluator.eval(theta);
    ++result.ell_evals;
    if (v == 1 && stop_doubling(cur.ell, log_b, config.criterion)) {
      result.j = j - 1;
      result.theta = std::ldexp(config.theta0, j - 1);
      result.chosen = std::move(prev);
      return result;
    }
    if (v == -1 && stop_halving(cur.ell, log_a, config.criterion)) {
      result.j = j;
      result.theta = theta;
      result.chosen = std::move(cur);
      return result;
    }
    if (std::abs(j) >= config.j_cap) {
      result.j = j;
      result.theta = theta;
      result.chosen = std::move(cur);
      result.capped = true;
      return result;
    }
    prev = std::move(cur);
  }
}

}  // namespace autostep
