#pragma once

#include <Eigen/Dense>
#include <stdexcept>

#include "autostep/rng.hpp"

namespace autostep {

// Diagonal mass matrix (preconditioner), stored through its square root.
class MassMatrix {
 public:
  explicit MassMatrix(Eigen::VectorXd sqrt_diag) : sqrt_diag_(std::move(sqrt_diag)) {
    for (Eigen::Index i = 0; i < sqrt_diag_.size(); ++i)
      if (!(sqrt_diag_[i] > 0.0) || !std::isfinite(sqrt_diag_[i]))
        throw std::invalid_argument("mass matrix entries must be positive and finite");
  }

  static MassMatrix identity(int dim) {
    return MassMatrix(Eigen::VectorXd::Ones(dim));
  }

  int dim() const { return static_cast<int>(sqrt_diag_.size()); }
  const Eigen::VectorXd& sqrt_diag() const { return sqrt_diag_; }

  // z = M^{1/2} eps, eps ~ N(0, I)
  Eigen::VectorXd sample_momentum(Rng& rng) const {
    Eigen::VectorXd z(sqrt_diag_.size());
    for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = sqrt_diag_[i] * rng.normal();
    return z;
  }

  // log N(z; 0, M) with the normalizing constant dropped: -z' M^{-1} z / 2
  double log_density(const Eigen::VectorXd& z) const {
    return -0.5 * (z.array() / sqrt_diag_.array()).square().sum();
  }

  Eigen::VectorXd inverse_apply(const Eigen::VectorXd& v) const {
    return (v.array() / sqrt_diag_.array().square()).matrix();
  }

 private:
  Eigen::VectorXd sqrt_diag_;
};

}  // namespace autostep
