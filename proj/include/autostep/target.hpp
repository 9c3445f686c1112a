#pragma once

#include <Eigen/Dense>
#include <memory>
#include <stdexcept>
#include <string>

#include "autostep/rng.hpp"
#include "autostep/stats.hpp"

namespace autostep {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EvalCounters {
  long long log_density = 0;
  long long gradient = 0;
};

// Unnormalized log density with optional closed-form gradient and optional
// exact-sampling / marginal-CDF hooks.  Implementations are pure; all
// bookkeeping lives in the Target wrapper.
class Density {
 public:
  virtual ~Density() = default;
  virtual int dim() const = 0;
  virtual double log_density(const Eigen::VectorXd& x) const = 0;

  virtual bool has_gradient() const { return false; }
  virtual Eigen::VectorXd gradient(const Eigen::VectorXd& x) const {
    (void)x;
    throw std::logic_error("gradient not available for this target");
  }

  virtual bool has_exact_sampler() const { return false; }
  virtual Eigen::VectorXd exact_draw(Rng& rng) const {
    (void)rng;
    throw std::logic_error("exact sampler not available for this target");
  }

  // Analytic marginal CDF of coordinate `coord`, when known.
  virtual bool has_marginal_cdf(int coord) const {
    (void)coord;
    return false;
  }
  virtual double marginal_cdf(int coord, double v) const {
    (void)coord, (void)v;
    throw std::logic_error("marginal cdf not available for this target");
  }
};

// A density plus per-instance evaluation counters.  Each chain owns its own
// Target copy, so counters need no synchronization; copies share the
// (immutable) density and start counting independently from the copied
// values.
class Target {
 public:
  explicit Target(std::shared_ptr<const Density> density)
      : density_(std::move(density)) {
    if (!density_) throw std::invalid_argument("null density");
  }

  int dim() const { return density_->dim(); }

  // Counts one log-density evaluation.  Non-finite inputs are outside every
  // support and short-circuit to -inf without touching the model, but still
  // count: the evaluation was requested and is charged to the cost model.
  double log_density(const Eigen::VectorXd& x) {
    ++counters_.log_density;
    if (!x.allFinite()) return neg_inf;
    const double v = density_->log_density(x);
    return std::isnan(v) ? neg_inf : v;
  }

  bool has_gradient() const { return density_->has_gradient(); }

  Eigen::VectorXd gradient(const Eigen::VectorXd& x) {
    ++counters_.gradient;
    if (!x.allFinite()) return Eigen::VectorXd::Zero(dim());
    return density_->gradient(x);
  }

  bool has_exact_sampler() const { return density_->has_exact_sampler(); }
  Eigen::VectorXd exact_draw(Rng& rng) const { return density_->exact_draw(rng); }

  bool has_marginal_cdf(int coord) const { return density_->has_marginal_cdf(coord); }
  double marginal_cdf(int coord, double v) const { return density_->marginal_cdf(coord, v); }

  const EvalCounters& counters() const { return counters_; }
  void reset_counters() { counters_ = EvalCounters{}; }

  const Density& density() const { return *density_; }
  const std::shared_ptr<const Density>& density_ptr() const { return density_; }

 private:
  std::shared_ptr<const Density> density_;
  EvalCounters counters_;
};

}  // namespace autostep
