#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "autostep/diagnostics.hpp"
#include "autostep/kernel.hpp"
#include "autostep/targets.hpp"

using namespace autostep;

namespace {

Eigen::VectorXd vec1(double x) {
  Eigen::VectorXd v(1);
  v[0] = x;
  return v;
}

KernelConfig rwmh_config(double theta0, Criterion criterion = Criterion::symmetric) {
  KernelConfig config;
  config.theta0 = theta0;
  config.criterion = criterion;
  config.family = {ProposalKind::rwmh, 1};
  return config;
}

}  // namespace

TEST_CASE("chain state requires a positive-density start") {
  Target t = make_kilpisjarvi({0.0}, {9.0});
  Eigen::VectorXd dead(3);
  dead << 0.0, 0.0, -400.0;  // log sigma so small the density underflows to 0
  CHECK_THROWS_AS(make_chain_state(t, {ProposalKind::rwmh, 1}, dead), std::domain_error);
}

TEST_CASE("fixed step: tiny steps are always accepted, huge steps never") {
  Target t = make_gaussian(1, 1.0);
  const MassMatrix mass = MassMatrix::identity(1);
  const Involution family{ProposalKind::rwmh, 1};

  Rng rng(3, 0);
  ChainState state = make_chain_state(t, family, vec1(0.3));
  int accepted = 0;
  for (int i = 0; i < 10000; ++i) {
    const IterationRecord rec = fixed_step_transition(state, t, mass, family, 1e-10, rng);
    accepted += rec.accepted ? 1 : 0;
    CHECK(rec.cost_ell == 1);
    CHECK(rec.cost_grad == 0);
  }
  CHECK(static_cast<double>(accepted) / 10000.0 > 0.999);

  Rng rng2(4, 0);
  ChainState far = make_chain_state(t, family, vec1(0.3));
  accepted = 0;
  for (int i = 0; i < 10000; ++i)
    accepted += fixed_step_transition(far, t, mass, family, 1e7, rng2).accepted ? 1 : 0;
  CHECK(static_cast<double>(accepted) / 10000.0 < 0.001);
}

TEST_CASE("fixed-step mala costs one gradient per iteration beyond the cache") {
  Target t = make_gaussian(2, 1.0);
  const MassMatrix mass = MassMatrix::identity(2);
  const Involution family{ProposalKind::mala, 1};
  Rng rng(9, 0);
  ChainState state = make_chain_state(t, family, Eigen::VectorXd::Zero(2));
  for (int i = 0; i < 100; ++i) {
    const IterationRecord rec = fixed_step_transition(state, t, mass, family, 0.5, rng);
    CHECK(rec.cost_ell == 1);
    CHECK(rec.cost_grad == 1);
  }
}

TEST_CASE("disabled selector reproduces the fixed-step kernel on a shared stream") {
  Target t_a = make_gaussian(1, 1.0);
  Target t_b = make_gaussian(1, 1.0);
  const MassMatrix mass = MassMatrix::identity(1);

  KernelConfig config = rwmh_config(0.8);
  config.selector_enabled = false;

  Rng rng_a(77, 0), rng_b(77, 0);
  ChainState a = make_chain_state(t_a, config.family, vec1(0.2));
  ChainState b = make_chain_state(t_b, config.family, vec1(0.2));
  for (int i = 0; i < 2000; ++i) {
    const IterationRecord ra = autostep_transition(a, t_a, mass, config, rng_a);
    const IterationRecord rb = fixed_step_transition(b, t_b, mass, config.family, 0.8, rng_b);
    CHECK(ra.accepted == rb.accepted);
    CHECK(a.x[0] == b.x[0]);
  }
}

TEST_CASE("autostep iteration record invariants") {
  Target t = make_gaussian(3, 1.0);
  const MassMatrix mass = MassMatrix::identity(3);

  for (const Involution family : {Involution{ProposalKind::rwmh, 1},
                                  Involution{ProposalKind::mala, 1},
                                  Involution{ProposalKind::hmc, 3}}) {
    KernelConfig config = rwmh_config(1.0);
    config.family = family;
    Rng rng(15, 0);
    ChainState state = make_chain_state(t, family, Eigen::VectorXd::Ones(3));
    int mismatches = 0;
    for (int i = 0; i < 2000; ++i) {
      const IterationRecord rec = autostep_transition(state, t, mass, config, rng);

      // cost bookkeeping: counter deltas equal the two selectors' ell counts
      CHECK(rec.cost_ell == rec.selector_evals + rec.selector_evals_reverse);
      CHECK(rec.cost_grad == family.leapfrogs() * rec.cost_ell *
                                 (family.needs_gradient() ? 1 : 0));

      CHECK(rec.theta == doctest::Approx(std::ldexp(config.theta0, rec.j_forward)));
      if (rec.accepted) {
        CHECK(rec.j_forward == rec.j_reverse);
        CHECK(rec.energy_jump == rec.ell_abs);
      } else {
        CHECK(rec.energy_jump == 0.0);
        CHECK(rec.jump_distance == 0.0);
      }
      mismatches += rec.j_forward != rec.j_reverse ? 1 : 0;
    }
    // the reversibility veto must actually engage sometimes
    CHECK(mismatches > 0);
  }
}

TEST_CASE("one autostep transition preserves the target (two-sample KS)") {
  const int n = 20000;
  Target t = make_gaussian(1, 1.0);
  const MassMatrix mass = MassMatrix::identity(1);
  const KernelConfig config = rwmh_config(1.0);

  Rng rng(101, 0);
  std::vector<double> moved(n), fresh(n);
  for (int i = 0; i < n; ++i) {
    ChainState state = make_chain_state(t, config.family, t.exact_draw(rng));
    autostep_transition(state, t, mass, config, rng);
    moved[i] = state.x[0];
  }
  for (int i = 0; i < n; ++i) fresh[i] = t.exact_draw(rng)[0];
  CHECK(two_sample_ks_p_value(moved, fresh) > 0.01);
}

TEST_CASE("acceptance profile") {
  Target t = make_gaussian(1, 1.0);
  KernelConfig config = rwmh_config(1.0);

  const double norms[] = {1e-5, 1.0, 1e2};
  const Criterion both[] = {Criterion::symmetric, Criterion::asymmetric};

  SUBCASE("zero replicates give an empty table") {
    const auto rows = acceptance_probability_profile(norms, t, config, both, 0, 1);
    CHECK(rows.empty());
  }

  SUBCASE("an empty norm list gives an empty table") {
    const auto rows =
        acceptance_probability_profile(std::vector<double>{}, t, config, both, 100, 1);
    CHECK(rows.empty());
  }

  SUBCASE("symmetric acceptance stays above 10% at the extremes") {
    const auto rows = acceptance_probability_profile(norms, t, config, both, 4000, 1);
    CHECK(rows.size() == 6);
    double sym_low = 0, sym_high = 0, asym_low = 0, asym_high = 0;
    for (const auto& r : rows) {
      if (r.criterion == Criterion::symmetric) {
        CHECK(r.acceptance > 0.10);
        if (r.norm == 1e-5) sym_low = r.acceptance;
        if (r.norm == 1e2) sym_high = r.acceptance;
      } else {
        if (r.norm == 1e-5) asym_low = r.acceptance;
        if (r.norm == 1e2) asym_high = r.acceptance;
      }
    }
    CHECK(asym_low < sym_low);
    CHECK(asym_high < sym_high);
  }

  SUBCASE("targets without an exact sampler are rejected") {
    Target posterior = make_kilpisjarvi({0.0}, {9.0});
    CHECK_THROWS_AS(
        acceptance_probability_profile(norms, posterior, config, both, 10, 1),
        ConfigError);
  }
}

TEST_CASE("non-finite proposals are auto-rejected") {
  // mala on the funnel with a huge pinned step explodes; the kernel must
  // reject and hold position rather than propagate NaN
  Target t = make_funnel(2, 0.6);
  const MassMatrix mass = MassMatrix::identity(2);
  const Involution family{ProposalKind::mala, 1};
  Rng rng(5, 0);
  Eigen::VectorXd x0(2);
  x0 << -4.0, 0.1;
  ChainState state = make_chain_state(t, family, x0);
  for (int i = 0; i < 200; ++i) {
    fixed_step_transition(state, t, mass, family, 1e9, rng);
    CHECK(state.x.allFinite());
  }
}
