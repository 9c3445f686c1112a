#pragma once

#include <cmath>

#include "autostep/involution.hpp"
#include "autostep/rng.hpp"

namespace autostep {

// Acceptance-ratio thresholds drawn uniformly from {0 < a < b < 1}.
struct ThresholdPair {
  double a = 0.0;
  double b = 0.0;

  double log_a() const { return std::log(a); }
  double log_b() const { return std::log(b); }
};

ThresholdPair sample_thresholds(Rng& rng);

// symmetric: steer |ell| into (|log b|, |log a|); needed for irreducibility.
// asymmetric: steer ell itself into (log a, log b), i.e. the acceptance
// ratio exp(ell) into (a, b).
enum class Criterion { symmetric, asymmetric };

struct KernelConfig {
  double theta0 = 1.0;
  Criterion criterion = Criterion::symmetric;
  int j_cap = 60;  // bound on |j|; 2^60 exhausts double-precision step sizes
  Involution family;

  // When false the kernel runs with the step size pinned at theta0: no
  // threshold draw, j forced to 0, no reversibility check.  This recovers
  // standard involutive MCMC on the same random stream as the fixed-step
  // transition.
  bool selector_enabled = true;
};

struct SelectorResult {
  int j = 0;
  double theta = 0.0;
  int ell_evals = 0;   // 1 initial evaluation plus one per loop pass
  bool capped = false;
  ProposalEval chosen;  // proposal and ell at the selected step size
};

// Doubling/halving step size search.  Starting from theta0, the initial
// direction is
//   v = 1[ell too small] - 1[ell too large]
// (with "small"/"large" per the criterion above); v = 0 returns j = 0
// immediately.  Doubling stops at the first j whose ell crosses the small
// threshold and returns j - 1; halving stops at the first j whose ell is
// back inside the large threshold and returns that j.  Non-finite ell counts
// as an infinitely large proposal and keeps halving.
SelectorResult select_step_size(LogRatioEvaluator& evaluator, const ThresholdPair& pair,
                                const KernelConfig& config);

}  // namespace autostep
