#pragma once

#include <functional>
#include <span>

#include "autostep/kernel.hpp"
#include "autostep/reference.hpp"

namespace autostep {

// Exact Kolmogorov-Smirnov statistic sup_x |F_T(x) - F(x)| against a
// reference CDF, evaluated at the empirical-CDF jump points.
double ks_statistic(std::span<const double> draws, const std::function<double(double)>& cdf);

// Two-sample KS statistic and its asymptotic p-value.
double two_sample_ks(std::span<const double> a, std::span<const double> b);
double two_sample_ks_p_value(std::span<const double> a, std::span<const double> b);

// One-sample asymptotic p-value: Q(sqrt(T) * D).
double ks_p_value(double d, long long n);

struct KsessConfig {
  int num_batches = 40;
};

struct KsessResult {
  double value = 0.0;
  double ksess1 = 0.0;  // batched estimate
  double ksess2 = 0.0;  // full-trace severe-failure estimate
  bool severe_branch = false;
  long long used_length = 0;  // N * B after dropping the trailing remainder
};

// Batched Kolmogorov-Smirnov effective sample size.  The trace is split into
// N contiguous batches of B = floor(T/N) draws (trailing remainder dropped);
// sqrt(B) * D per batch estimates the Kolmogorov mean E[K] = log(2) *
// sqrt(pi/2) when draws are iid, giving
//   KSESS1 = NB * (E[K] / mean(sqrt(B) D_batch))^2.
// Severe failures saturate KSESS1 at NB (E[K])^2 / B, so the full-trace
// statistic KSESS2 = (E[K] / D_full)^2 is returned instead whenever it falls
// at or below that floor.
KsessResult ksess_detail(std::span<const double> trace,
                         const std::function<double(double)>& cdf,
                         const KsessConfig& config = {});
double ksess(std::span<const double> trace, const std::function<double(double)>& cdf,
             const KsessConfig& config = {});

// Minimum KSESS across the columns of a trace; every coordinate must be
// covered by the reference.
double min_ksess(const Eigen::MatrixXd& trace, const ReferenceDistribution& reference,
                 const KsessConfig& config = {});

// Evaluation-count cost N_ell + alpha * N_grad.
struct CostModel {
  double alpha = 1.0;

  double cost(long long n_ell, long long n_grad) const {
    return static_cast<double>(n_ell) + alpha * static_cast<double>(n_grad);
  }
};

struct RunSummary {
  long long iterations = 0;
  double acceptance = 0.0;
  double mean_abs_ell = 0.0;
  double mean_energy_jump = 0.0;
  double mean_jump_distance = 0.0;
  double mean_abs_j = 0.0;
  long long cap_hits = 0;
  double mean_selector_evals = 0.0;
  long long total_cost_ell = 0;
  long long total_cost_grad = 0;
  double cost_per_iteration = 0.0;  // (N_ell + alpha N_grad) / iterations
};

RunSummary summarize(std::span<const IterationRecord> records, const CostModel& model);

}  // namespace autostep
