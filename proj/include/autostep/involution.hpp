#pragma once

#include <Eigen/Dense>

#include "autostep/mass_matrix.hpp"
#include "autostep/target.hpp"

namespace autostep {

struct PhasePoint {
  Eigen::VectorXd x;
  Eigen::VectorXd z;
};

enum class ProposalKind { rwmh, mala, hmc };

// One member of the involution family f_theta on phase space.  All three
// kinds are volume preserving and self-inverse after the momentum flip, so
// the acceptance log ratio carries no Jacobian term.
struct Involution {
  ProposalKind kind = ProposalKind::rwmh;
  int path_length = 1;  // leapfrog count for hmc

  bool needs_gradient() const { return kind != ProposalKind::rwmh; }
  int leapfrogs() const { return kind == ProposalKind::hmc ? path_length : 1; }
};

// One evaluation of the proposal map and its log acceptance ratio at a
// given step size.  `log_gamma` / `grad` are the target log density and
// gradient at the proposed position, cached so the kernel never re-evaluates
// an already-computed point.
struct ProposalEval {
  PhasePoint point;
  double log_gamma = neg_inf;
  Eigen::VectorXd grad;  // empty for gradient-free families
  double ell = neg_inf;
};

// Computes ell(x, z, theta) for varying theta with the theta-independent
// pieces (log gamma and gradient at x, momentum log density at z) evaluated
// once.  One eval() costs exactly one log-density call, plus `leapfrogs()`
// gradient calls for gradient-based families.
class LogRatioEvaluator {
 public:
  // Evaluates the base quantities itself (one log-density call plus one
  // gradient call for gradient-based families).
  LogRatioEvaluator(Target& target, const Involution& family, const MassMatrix& mass,
                    PhasePoint state);

  // Base quantities supplied by the caller (e.g. carried chain state).
  LogRatioEvaluator(Target& target, const Involution& family, const MassMatrix& mass,
                    PhasePoint state, double log_gamma_x, Eigen::VectorXd grad_x);

  ProposalEval eval(double theta);

  const PhasePoint& state() const { return state_; }
  double base_log_gamma() const { return log_gamma_x_; }

 private:
  Target& target_;
  Involution family_;
  const MassMatrix& mass_;
  PhasePoint state_;
  double log_gamma_x_ = neg_inf;
  Eigen::VectorXd grad_x_;
  double log_m_z_ = 0.0;
};

// Standalone application of f_theta; evaluates any gradients it needs from
// scratch (L+1 gradient calls for a leapfrog family).
PhasePoint apply_involution(Target& target, const Involution& family,
                            const MassMatrix& mass, const PhasePoint& state,
                            double theta);

// Standalone ell(x, z, theta) with no caching.
double log_ratio(Target& target, const Involution& family, const MassMatrix& mass,
                 const PhasePoint& state, double theta);

}  // namespace autostep
