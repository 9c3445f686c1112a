// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure.  Tolerances are pinned in code next to each check.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <thread>
#include <vector>

#include "autostep/diagnostics.hpp"
#include "autostep/experiment.hpp"
#include "autostep/targets.hpp"
#include "autostep/tuning.hpp"
#include "selector_oracle.hpp"

using namespace autostep;

namespace {

int g_failures = 0;
long long g_cap_hits = 0;  // across every autostep run the suite performs

void report(const std::string& name, bool pass, const std::string& detail) {
  std::printf("%s  %-28s %s\n", pass ? "PASS" : "FAIL", name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

KernelConfig autostep_config(ProposalKind kind, double theta0,
                             Criterion criterion = Criterion::symmetric) {
  KernelConfig config;
  config.theta0 = theta0;
  config.criterion = criterion;
  config.family = {kind, 1};
  return config;
}

// ---------------------------------------------------------------------------
// 1. exact invariance: one transition from exact draws leaves each marginal
//    unchanged (two-sample KS, p > 0.01 per coordinate)
void criterion_invariance() {
  const long long n = 100000;
  struct Setup {
    const char* label;
    ProposalKind kind;
    const char* target;
  };
  const Setup setups[] = {{"rwmh/gaussian", ProposalKind::rwmh, "gaussian"},
                          {"rwmh/funnel2", ProposalKind::rwmh, "funnel2"},
                          {"mala/gaussian", ProposalKind::mala, "gaussian"},
                          {"mala/funnel2", ProposalKind::mala, "funnel2"}};

  bool all_pass = true;
  std::string detail;
  std::uint64_t stream = 0;
  for (const Setup& setup : setups) {
    Target target = make_target(setup.target, AUTOSTEP_DATA_DIR);
    const MassMatrix mass = MassMatrix::identity(target.dim());
    const KernelConfig config = autostep_config(setup.kind, 1.0);
    Rng rng(20260808, stream++);

    Eigen::MatrixXd moved(n, target.dim());
    for (long long i = 0; i < n; ++i) {
      ChainState state = make_chain_state(target, config.family, target.exact_draw(rng));
      const IterationRecord rec = autostep_transition(state, target, mass, config, rng);
      g_cap_hits += rec.capped ? 1 : 0;
      moved.row(i) = state.x;
    }

    for (int j = 0; j < target.dim(); ++j) {
      std::vector<double> fresh(n), column(n);
      for (long long i = 0; i < n; ++i) fresh[i] = target.exact_draw(rng)[j];
      Eigen::VectorXd::Map(column.data(), n) = moved.col(j);
      const double p = two_sample_ks_p_value(column, fresh);
      if (p <= 0.01) all_pass = false;
      detail += std::string(setup.label) + "[x" + std::to_string(j + 1) +
                "] p=" + fmt(p) + " ";
    }
  }
  report("1 exact invariance", all_pass, detail);
}

// ---------------------------------------------------------------------------
// 2. selector oracle equivalence over 1000 randomized cases
void criterion_selector_oracle() {
  Rng rng(41, 0);
  Target gauss1 = make_gaussian(1, 1.0);
  Target gauss3 = make_gaussian(3, 0.5);
  Target funnel = make_funnel(2, 0.6);

  struct Case {
    Target* target;
    Involution family;
  };
  Case cases[] = {{&gauss1, {ProposalKind::rwmh, 1}},
                  {&gauss3, {ProposalKind::rwmh, 1}},
                  {&gauss3, {ProposalKind::mala, 1}},
                  {&funnel, {ProposalKind::mala, 1}},
                  {&funnel, {ProposalKind::hmc, 3}}};

  int mismatches = 0, total = 0;
  for (const Criterion criterion : {Criterion::symmetric, Criterion::asymmetric}) {
    for (auto& c : cases) {
      const int dim = c.target->dim();
      const MassMatrix mass = MassMatrix::identity(dim);
      for (int rep = 0; rep < 100; ++rep) {
        PhasePoint p;
        p.x.resize(dim);
        p.z.resize(dim);
        for (int i = 0; i < dim; ++i) {
          p.x[i] = rng.normal();
          p.z[i] = rng.normal();
        }
        const ThresholdPair pair = sample_thresholds(rng);
        const double theta0 = std::exp(2.0 * rng.normal());

        KernelConfig config;
        config.theta0 = theta0;
        config.criterion = criterion;
        config.family = c.family;
        LogRatioEvaluator evaluator(*c.target, c.family, mass, p);
        const SelectorResult res = select_step_size(evaluator, pair, config);
        const int mu =
            test_support::brute_force_mu(*c.target, c.family, mass, p, pair, theta0, criterion);
        mismatches += res.j == mu ? 0 : 1;
        ++total;
      }
    }
  }
  report("2 selector oracle", mismatches == 0,
         std::to_string(total) + " cases, " + std::to_string(mismatches) + " mismatches");
}

// ---------------------------------------------------------------------------
// 3. involution round trip < 1e-10 and skew symmetry < 1e-9, 1000 cases
void criterion_involution() {
  Rng rng(2024, 0);
  Target target = make_gaussian(3, 1.7);
  Eigen::VectorXd sqrt_diag(3);
  sqrt_diag << 0.7, 1.0, 1.9;
  const MassMatrix mass(sqrt_diag);

  double worst_roundtrip = 0.0, worst_skew = 0.0;
  const Involution families[] = {
      {ProposalKind::rwmh, 1}, {ProposalKind::mala, 1}, {ProposalKind::hmc, 4}};
  for (int rep = 0; rep < 1000; ++rep) {
    const Involution family = families[rep % 3];
    PhasePoint p;
    p.x.resize(3);
    p.z.resize(3);
    for (int i = 0; i < 3; ++i) {
      p.x[i] = rng.normal();
      p.z[i] = rng.normal();
    }
    const double theta = std::exp(-6.0 + 6.7 * rng.uniform());

    const PhasePoint fwd = apply_involution(target, family, mass, p, theta);
    const PhasePoint back = apply_involution(target, family, mass, fwd, theta);
    worst_roundtrip = std::max({worst_roundtrip, (back.x - p.x).cwiseAbs().maxCoeff(),
                                (back.z - p.z).cwiseAbs().maxCoeff()});

    const double ell = log_ratio(target, family, mass, p, theta);
    const double ell_rev = log_ratio(target, family, mass, fwd, theta);
    worst_skew = std::max(worst_skew, std::abs(ell + ell_rev));
  }
  report("3 involution/skew symmetry", worst_roundtrip < 1e-10 && worst_skew < 1e-9,
         "max roundtrip=" + fmt(worst_roundtrip) + " max skew=" + fmt(worst_skew));
}

// ---------------------------------------------------------------------------
// 4. one-step acceptance > 0.10 across ||x|| in {1e-5..1e2} (symmetric);
//    asymmetric below symmetric at both extremes
void criterion_acceptance_profile() {
  Target target = make_gaussian(1, 1.0);
  const KernelConfig config = autostep_config(ProposalKind::rwmh, 1.0);

  std::vector<double> norms;
  for (int k = -5; k <= 2; ++k) norms.push_back(std::pow(10.0, k));
  const Criterion criteria[] = {Criterion::symmetric, Criterion::asymmetric};

  const auto rows =
      acceptance_probability_profile(norms, target, config, criteria, 100000, 314159);

  double min_sym = 1.0, sym_low = 0, sym_high = 0, asym_low = 0, asym_high = 0;
  for (const auto& r : rows) {
    if (r.criterion == Criterion::symmetric) {
      min_sym = std::min(min_sym, r.acceptance);
      if (r.norm == 1e-5) sym_low = r.acceptance;
      if (r.norm == 1e2) sym_high = r.acceptance;
    } else {
      if (r.norm == 1e-5) asym_low = r.acceptance;
      if (r.norm == 1e2) asym_high = r.acceptance;
    }
  }
  const bool pass = min_sym > 0.10 && asym_low < sym_low && asym_high < sym_high;
  report("4 acceptance vs norm", pass,
         "min sym=" + fmt(min_sym) + " sym/asym at 1e-5: " + fmt(sym_low) + "/" +
             fmt(asym_low) + ", at 1e2: " + fmt(sym_high) + "/" + fmt(asym_high));
}

// ---------------------------------------------------------------------------
// 5. stationary energy jump: mean D <= 0.786 and mean |ell| in [0.3, 1.7]
void criterion_energy_jump() {
  Target target = make_gaussian(1, 1.0);
  const MassMatrix mass = MassMatrix::identity(1);
  const KernelConfig config = autostep_config(ProposalKind::rwmh, 1.0);
  Rng rng(7, 0);

  ChainState state = make_chain_state(target, config.family, target.exact_draw(rng));
  const long long n = 100000;
  double sum_jump = 0.0, sum_abs_ell = 0.0;
  for (long long i = 0; i < n; ++i) {
    const IterationRecord rec = autostep_transition(state, target, mass, config, rng);
    g_cap_hits += rec.capped ? 1 : 0;
    sum_jump += rec.energy_jump;
    sum_abs_ell += rec.ell_abs;
  }
  const double mean_jump = sum_jump / n;
  const double mean_abs_ell = sum_abs_ell / n;
  report("5 energy jump bound",
         mean_jump <= 0.786 && mean_abs_ell >= 0.3 && mean_abs_ell <= 1.7,
         "mean D=" + fmt(mean_jump) + " mean |ell|=" + fmt(mean_abs_ell));
}

// ---------------------------------------------------------------------------
// 6. cost robustness: forward selector evaluations per iteration are linear
//    in |log2 theta0| (R^2 > 0.9), < 40 at theta0 = 1e-7; fixed-step
//    KSESS-per-cost collapses by >= 100x at theta0 = 1e-5
void criterion_cost_robustness() {
  const SamplerSpec autostep_spec{true, ProposalKind::rwmh, 1};
  const SamplerSpec fixed_spec{false, ProposalKind::rwmh, 1};
  Target probe = make_gaussian(1, 1.0);
  const ReferenceDistribution reference = ReferenceDistribution::from_target(probe);

  std::vector<double> xs, ys;
  double cost_at_1em7 = 0.0;
  for (int k = -7; k <= 7; ++k) {
    const double theta0 = std::pow(10.0, k);
    const CellResult cell =
        run_sweep_cell("gaussian", AUTOSTEP_DATA_DIR, autostep_spec, Criterion::symmetric,
                       theta0, 20000, 99, static_cast<std::uint64_t>(k + 7), -1.0, nullptr);
    g_cap_hits += cell.summary.cap_hits;
    xs.push_back(std::abs(std::log2(theta0)));
    ys.push_back(cell.summary.mean_selector_evals);
    if (k == -7) cost_at_1em7 = cell.summary.mean_selector_evals;
  }

  // ordinary least squares R^2
  const auto mean_of = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  };
  const double mx = mean_of(xs), my = mean_of(ys);
  double sxx = 0.0, sxy = 0.0, ss_tot = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    ss_tot += (ys[i] - my) * (ys[i] - my);
  }
  const double slope = sxy / sxx, intercept = my - slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (intercept + slope * xs[i]);
    ss_res += r * r;
  }
  const double r2 = 1.0 - ss_res / ss_tot;

  const CellResult fixed_bad =
      run_sweep_cell("gaussian", AUTOSTEP_DATA_DIR, fixed_spec, Criterion::symmetric, 1e-5,
                     100000, 99, 100, -1.0, &reference);
  const CellResult fixed_good =
      run_sweep_cell("gaussian", AUTOSTEP_DATA_DIR, fixed_spec, Criterion::symmetric, 1.0,
                     100000, 99, 101, -1.0, &reference);
  const double per_cost_bad =
      fixed_bad.ksess_value / static_cast<double>(fixed_bad.summary.total_cost_ell);
  const double per_cost_good =
      fixed_good.ksess_value / static_cast<double>(fixed_good.summary.total_cost_ell);
  const double collapse = per_cost_good / per_cost_bad;

  const bool pass = r2 > 0.9 && cost_at_1em7 < 40.0 && collapse >= 100.0;
  report("6 cost robustness", pass,
         "R2=" + fmt(r2) + " evals@1e-7=" + fmt(cost_at_1em7) +
             " fixed ksess/cost collapse=" + fmt(collapse) + "x");
}

// ---------------------------------------------------------------------------
// 7. tuning stability: 15 initializations across 14 orders of magnitude all
//    land in [0.1, 10] and agree within a factor of 16
void criterion_tuning_stability() {
  std::vector<double> finals(15, 0.0);
  std::vector<long long> caps(15, 0);

  const auto run_one = [&](int index) {
    const int k = index - 7;
    Target target = make_gaussian(1, 1.0);
    KernelConfig config = autostep_config(ProposalKind::rwmh, std::pow(10.0, k));
    Rng rng(515, static_cast<std::uint64_t>(index));
    Eigen::VectorXd x0(1);
    x0 << 20.0 * rng.normal();
    const TunedRun run = run_tuned(std::move(x0), RoundSchedule{20}, target, config, rng);
    finals[index] = run.tuner.theta0;
    long long cap_count = 0;
    for (const auto& rec : run.final_records) cap_count += rec.capped ? 1 : 0;
    caps[index] = cap_count;
  };

  // the 15 runs are independent; split them over two workers
  std::thread worker([&] {
    for (int i = 0; i < 15; i += 2) run_one(i);
  });
  for (int i = 1; i < 15; i += 2) run_one(i);
  worker.join();
  for (long long c : caps) g_cap_hits += c;

  const double lo = *std::min_element(finals.begin(), finals.end());
  const double hi = *std::max_element(finals.begin(), finals.end());
  const bool pass = lo >= 0.1 && hi <= 10.0 && hi / lo <= 16.0;
  report("7 tuning stability", pass,
         "final theta0 in [" + fmt(lo) + ", " + fmt(hi) + "], spread " + fmt(hi / lo) + "x");
}

// ---------------------------------------------------------------------------
// 8. KSESS calibration: median over 50 seeds of KSESS on 4e4 iid draws lies
//    in [0.8T, 1.25T]; constant traces take the severe-failure branch
void criterion_ksess_calibration() {
  const int t_len = 40000;
  const auto cdf = [](double v) { return normal_cdf(v, 0.0, 1.0); };

  std::vector<double> values(50);
  for (int seed = 0; seed < 50; ++seed) {
    Rng rng(900 + seed, 0);
    std::vector<double> draws(t_len);
    for (auto& d : draws) d = rng.normal();
    values[seed] = ksess(draws, cdf);
  }
  std::nth_element(values.begin(), values.begin() + 25, values.end());
  const double median = values[25];

  const KsessResult flat = ksess_detail(std::vector<double>(t_len, 0.25), cdf);

  const bool pass = median >= 0.8 * t_len && median <= 1.25 * t_len && flat.severe_branch;
  report("8 ksess calibration", pass,
         "median=" + fmt(median) + " (T=" + std::to_string(t_len) +
             "), severe branch on constant trace: " + (flat.severe_branch ? "yes" : "no"));
}

// ---------------------------------------------------------------------------
// 9. cost-model registry constants
void criterion_cost_registry() {
  const auto funnel100 = cost_alpha_for("funnel100");
  const auto mrna = cost_alpha_for("mrna");
  const bool pass = funnel100.has_value() && *funnel100 == 72.551 && mrna.has_value() &&
                    *mrna == 5.767;
  report("9 cost-model registry", pass,
         "alpha(funnel100)=" + fmt(funnel100.value_or(-1)) +
             " alpha(mrna)=" + fmt(mrna.value_or(-1)));
}

}  // namespace

int main() {
  criterion_invariance();
  criterion_selector_oracle();
  criterion_involution();
  criterion_acceptance_profile();
  criterion_energy_jump();
  criterion_cost_robustness();
  criterion_tuning_stability();
  criterion_ksess_calibration();
  criterion_cost_registry();

  // selector termination invariant: no cap hits on the smooth targets
  report("termination (no cap hits)", g_cap_hits == 0,
         std::to_string(g_cap_hits) + " capped selector runs");

  std::printf("%s\n", g_failures == 0 ? "ALL CRITERIA PASSED" : "CRITERIA FAILED");
  return g_failures == 0 ? 0 : 1;
}
