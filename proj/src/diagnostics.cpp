#include "autostep/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "autostep/stats.hpp"

namespace autostep {

namespace {

constexpr double kolmogorov_mean = 0.86873116063615907212;  // log(2) sqrt(pi/2)

double ks_statistic_sorted(std::span<const double> sorted,
                           const std::function<double(double)>& cdf) {
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    const double hi = (static_cast<double>(i) + 1.0) / n - f;
    const double lo = f - static_cast<double>(i) / n;
    d = std::max({d, hi, lo});
  }
  return d;
}

}  // namespace

double ks_statistic(std::span<const double> draws, const std::function<double(double)>& cdf) {
  if (draws.empty()) throw std::invalid_argument("ks_statistic: empty sample");
  std::vector<double> sorted(draws.begin(), draws.end());
  std::sort(sorted.begin(), sorted.end());
  return ks_statistic_sorted(sorted, cdf);
}

double two_sample_ks(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("two_sample_ks: empty sample");
  std::vector<double> sa(a.begin(), a.end()), sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < sa.size() && j < sb.size()) {
    const double v = std::min(sa[i], sb[j]);
    while (i < sa.size() && sa[i] <= v) ++i;
    while (j < sb.size() && sb[j] <= v) ++j;
    const double fa = static_cast<double>(i) / static_cast<double>(sa.size());
    const double fb = static_cast<double>(j) / static_cast<double>(sb.size());
    d = std::max(d, std::abs(fa - fb));
  }
  return d;
}

double ks_p_value(double d, long long n) {
  return kolmogorov_sf(std::sqrt(static_cast<double>(n)) * d);
}

double two_sample_ks_p_value(std::span<const double> a, std::span<const double> b) {
  const double d = two_sample_ks(a, b);
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  return kolmogorov_sf(std::sqrt(na * nb / (na + nb)) * d);
}

KsessResult ksess_detail(std::span<const double> trace,
                         const std::function<double(double)>& cdf,
                         const KsessConfig& config) {
  const int num_batches = config.num_batches;
  if (num_batches < 1) throw std::invalid_argument("ksess: need at least one batch");
  const long long batch = static_cast<long long>(trace.size()) / num_batches;
  if (batch < 2)
    throw std::invalid_argument(
        "ksess: trace too short (need at least 2 draws per batch across " +
        std::to_string(num_batches) + " batches)");

  KsessResult out;
  out.used_length = batch * num_batches;
  const double used = static_cast<double>(out.used_length);

  double mean_scaled_d = 0.0;
  std::vector<double> buffer(static_cast<std::size_t>(batch));
  for (int k = 0; k < num_batches; ++k) {
    const auto* begin = trace.data() + static_cast<std::size_t>(k) * batch;
    std::copy(begin, begin + batch, buffer.begin());
    std::sort(buffer.begin(), buffer.end());
    mean_scaled_d += std::sqrt(static_cast<double>(batch)) * ks_statistic_sorted(buffer, cdf);
  }
  mean_scaled_d /= static_cast<double>(num_batches);
  out.ksess1 = used * (kolmogorov_mean / mean_scaled_d) * (kolmogorov_mean / mean_scaled_d);

  const double d_full = ks_statistic(trace, cdf);
  out.ksess2 = (kolmogorov_mean / d_full) * (kolmogorov_mean / d_full);

  const double floor1 =
      used * kolmogorov_mean * kolmogorov_mean / static_cast<double>(batch);
  out.severe_branch = out.ksess2 <= floor1;
  out.value = out.severe_branch ? out.ksess2 : out.ksess1;
  return out;
}

double ksess(std::span<const double> trace, const std::function<double(double)>& cdf,
             const KsessConfig& config) {
  return ksess_detail(trace, cdf, config).value;
}

double min_ksess(const Eigen::MatrixXd& trace, const ReferenceDistribution& reference,
                 const KsessConfig& config) {
  if (trace.cols() == 0) throw std::invalid_argument("min_ksess: empty trace");
  double best = std::numeric_limits<double>::infinity();
  std::vector<double> column(static_cast<std::size_t>(trace.rows()));
  for (Eigen::Index j = 0; j < trace.cols(); ++j) {
    if (!reference.covers(static_cast<int>(j)))
      throw std::invalid_argument("min_ksess: reference does not cover coordinate " +
                                  std::to_string(j));
    if (reference.kind() == ReferenceDistribution::Kind::reference_sample &&
        reference.sample_rows() < 100000)
      throw std::invalid_argument("min_ksess: reference sample needs at least 1e5 rows");
    Eigen::VectorXd::Map(column.data(), trace.rows()) = trace.col(j);
    best = std::min(best, ksess(column, reference.cdf_fn(static_cast<int>(j)), config));
  }
  return best;
}

RunSummary summarize(std::span<const IterationRecord> records, const CostModel& model) {
  if (records.empty()) throw std::invalid_argument("summarize: no iteration records");
  RunSummary s;
  s.iterations = static_cast<long long>(records.size());
  for (const auto& r : records) {
    s.acceptance += r.accepted ? 1.0 : 0.0;
    s.mean_abs_ell += r.ell_abs;
    s.mean_energy_jump += r.energy_jump;
    s.mean_jump_distance += r.jump_distance;
    s.mean_abs_j += std::abs(r.j_forward);
    s.cap_hits += r.capped ? 1 : 0;
    s.mean_selector_evals += r.selector_evals;
    s.total_cost_ell += r.cost_ell;
    s.total_cost_grad += r.cost_grad;
  }
  const double n = static_cast<double>(s.iterations);
  s.acceptance /= n;
  s.mean_abs_ell /= n;
  s.mean_energy_jump /= n;
  s.mean_jump_distance /= n;
  s.mean_abs_j /= n;
  s.mean_selector_evals /= n;
  s.cost_per_iteration = model.cost(s.total_cost_ell, s.total_cost_grad) / n;
  return s;
}

}  // namespace autostep
