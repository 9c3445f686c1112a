#include "autostep/involution.hpp"

namespace autostep {

namespace {

// L leapfrog steps followed by the momentum flip.  `grad_x` is the gradient
// at the starting position; adjacent half-kicks are fused, so the gradient
// cost is exactly L calls.  `grad_out` receives the gradient at the final
// position (pre-flip), valid whenever the trajectory stayed finite.
PhasePoint leapfrog_flip(Target& target, const MassMatrix& mass, const PhasePoint& s,
                         double theta, int steps, const Eigen::VectorXd& grad_x,
                         Eigen::VectorXd* grad_out) {
  Eigen::VectorXd z_half = s.z + (theta / 2.0) * grad_x;
  Eigen::VectorXd x = s.x + theta * mass.inverse_apply(z_half);
  for (int step = 1; step < steps; ++step) {
    const Eigen::VectorXd g = target.gradient(x);
    z_half += theta * g;
    x += theta * mass.inverse_apply(z_half);
  }
  const Eigen::VectorXd g_end = target.gradient(x);
  if (grad_out) *grad_out = g_end;
  Eigen::VectorXd z_new = -(z_half + (theta / 2.0) * g_end);
  return {std::move(x), std::move(z_new)};
}

}  // namespace

LogRatioEvaluator::LogRatioEvaluator(Target& target, const Involution& family,
                                     const MassMatrix& mass, PhasePoint state)
    : target_(target), family_(family), mass_(mass), state_(std::move(state)) {
  log_gamma_x_ = target_.log_density(state_.x);
  if (family_.needs_gradient()) grad_x_ = target_.gradient(state_.x);
  if (family_.kind != ProposalKind::rwmh) log_m_z_ = mass_.log_density(state_.z);
}

LogRatioEvaluator::LogRatioEvaluator(Target& target, const Involution& family,
                                     const MassMatrix& mass, PhasePoint state,
                                     double log_gamma_x, Eigen::VectorXd grad_x)
    : target_(target),
      family_(family),
      mass_(mass),
      state_(std::move(state)),
      log_gamma_x_(log_gamma_x),
      grad_x_(std::move(grad_x)) {
  if (family_.kind != ProposalKind::rwmh) log_m_z_ = mass_.log_density(state_.z);
}

ProposalEval LogRatioEvaluator::eval(double theta) {
  ProposalEval out;
  if (family_.kind == ProposalKind::rwmh) {
    out.point.x = state_.x + theta * mass_.inverse_apply(state_.z);
    out.point.z = -state_.z;
    out.log_gamma = target_.log_density(out.point.x);
    // the momentum terms cancel exactly (z' = -z, m symmetric)
    out.ell = out.log_gamma - log_gamma_x_;
  } else {
    out.point = leapfrog_flip(target_, mass_, state_, theta, family_.leapfrogs(),
                              grad_x_, &out.grad);
    out.log_gamma = target_.log_density(out.point.x);
    const double log_m_new =
        out.point.z.allFinite() ? mass_.log_density(out.point.z) : neg_inf;
    out.ell = (out.log_gamma + log_m_new) - (log_gamma_x_ + log_m_z_);
  }
  // overflow inside the map is coerced onto the zero-density path
  if (std::isnan(out.ell)) out.ell = neg_inf;
  if (std::isnan(out.log_gamma)) out.log_gamma = neg_inf;
  return out;
}

PhasePoint apply_involution(Target& target, const Involution& family,
                            const MassMatrix& mass, const PhasePoint& state,
                            double theta) {
  if (family.kind == ProposalKind::rwmh)
    return {state.x + theta * mass.inverse_apply(state.z), -state.z};
  const Eigen::VectorXd grad_x = target.gradient(state.x);
  return leapfrog_flip(target, mass, state, theta, family.leapfrogs(), grad_x, nullptr);
}

double log_ratio(Target& target, const Involution& family, const MassMatrix& mass,
                 const PhasePoint& state, double theta) {
  LogRatioEvaluator evaluator(target, family, mass, state);
  return evaluator.eval(theta).ell;
}

}  // namespace autostep
