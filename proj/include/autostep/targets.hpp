#pragma once

#include <optional>
#include <string>
#include <vector>

#include "autostep/target.hpp"

namespace autostep {

// Synthetic targets (unnormalized; constants dropped).
Target make_gaussian(int dim, double variance);

// Heavy/light-tailed 1-d benchmarks, intended for gradient-free kernels.
// The Laplace gradient at the kink is defined as 0.
Target make_laplace1d();
Target make_cauchy1d();

// Neal's funnel: x1 ~ N(0, 9), x_i | x1 ~ N(0, exp(2 x1 / tau)) for i >= 2.
Target make_funnel(int dim, double tau);

// Linear-regression posterior on (alpha, beta, log sigma) with priors
// alpha ~ N(9.313, 100^2), beta ~ N(0, 0.0333^2), sigma ~ N(0,1) truncated
// to (0, inf).  sigma is sampled on the log scale; the Jacobian is folded
// into the log density.  Full normalizing constants are kept.
Target make_kilpisjarvi(std::vector<double> x_data, std::vector<double> y_data);

// mRNA transfection posterior on five log10-scale parameters
// (t0, k0, beta, delta, sigma), each with a uniform box prior, mapped to
// unconstrained space through a logit transform with the Jacobian folded in.
Target make_mrna(std::vector<double> t_data, std::vector<double> y_data);

// Piecewise mRNA mean at physical parameters: 0 for t <= t0, otherwise
// k0 * (exp(-beta*(t-t0)) - exp(-delta*(t-t0))) / (delta - beta) with the
// delta == beta case evaluated as the analytic limit of that expression.
double mrna_mean_function(double t, double t0, double k0, double beta, double delta);

// Registry keyed by name: gaussian, laplace, cauchy, funnel2, funnel100,
// kilpisjarvi, mrna.  `data_dir` locates the CSV datasets of the
// regression-style targets.
Target make_target(const std::string& name, const std::string& data_dir = "data");
const std::vector<std::string>& target_names();

// Per-target gradient cost scaling factor used by the N_ell + alpha * N_grad
// cost model; present only for targets with a calibrated constant.
std::optional<double> cost_alpha_for(const std::string& name);

}  // namespace autostep
