#include "gcm/nonmarkov.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "gtest/gtest.h"
#include "support/oracles.hpp"

using namespace gcm;

namespace {

constexpr double kPi = std::numbers::pi;

BSAngle pi_angle(double multiple) { return BSAngle::from_pi(multiple); }

std::vector<double> grid(int points) {
  std::vector<double> g;
  for (int i = 0; i < points; ++i) g.push_back(0.5 * kPi * i / (points - 1));
  return g;
}

// Random pure single-mode covariance.
Matrix2 random_pure(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> r(0.0, 0.8);
  std::uniform_real_distribution<double> phi(0.0, 2.0 * kPi);
  return single_mode_cov({0.0, r(rng), phi(rng)}).data();
}

std::vector<SingleModeSpec> mixed_envs(int count) {
  std::vector<SingleModeSpec> envs;
  for (int j = 1; j <= count; ++j) envs.emplace_back(0.1 * (j % 4), 0.05 * (j % 5), 0.7 * j);
  return envs;
}

}  // namespace

TEST(ChannelMap, identity_channel) {
  for (int steps = 2; steps <= 12; ++steps) {
    const ChannelMap m = channel_map(steps, pi_angle(0.5), pi_angle(0.2), SingleModeSpec::thermal(1.0));
    EXPECT_EQ(m.X, Matrix2::Identity());
    EXPECT_EQ(m.Y, Matrix2::Zero());
  }
}

TEST(ChannelMap, two_step_vacuum) {
  const ChannelMap m = channel_map(2, pi_angle(0.25), pi_angle(0.3), SingleModeSpec::vacuum());
  EXPECT_NEAR(m.c11, std::sqrt(0.5), 1e-15);
  EXPECT_LE((m.X - std::sqrt(0.5) * Matrix2::Identity()).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LE((m.Y - 0.25 * Matrix2::Identity()).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_THROW(channel_map(1, pi_angle(0.25), pi_angle(0.3), SingleModeSpec::vacuum()), std::invalid_argument);
}

TEST(ChannelMap, matches_direct_propagation) {
  std::mt19937_64 rng(5);
  for (int steps : {2, 3, 6, 13}) {
    for (const auto& [se, ee] : {std::pair{0.1, 0.2}, std::pair{0.25, 0.2}, std::pair{0.35, 0.35}, std::pair{0.0, 0.4}}) {
      const auto envs = mixed_envs(steps - 1);
      for (Channel ch : {Channel::kC, Channel::kB}) {
        const ChannelMap m = channel_map(steps, pi_angle(se), pi_angle(ee), envs, ch);
        for (int trial = 0; trial < 5; ++trial) {
          const Matrix2 in = random_pure(rng);
          const Matrix2 direct = propagate_channel(steps, pi_angle(se), pi_angle(ee), envs, in, ch);
          EXPECT_LE((m.apply(in) - direct).cwiseAbs().maxCoeff(), 1e-10);
        }
      }
    }
  }
}

TEST(ChannelMap, matches_reduced_network_state) {
  // With B and C decoupled, the reduced C state of the full network is the
  // single-channel output.
  ScenarioConfig cfg;
  cfg.L_max = 9;
  cfg.theta_ss = pi_angle(0.5);
  cfg.theta_se = pi_angle(0.3);
  cfg.theta_ee = pi_angle(0.15);
  cfg.xi_ab = 0.8;
  cfg.c_state = SqueezedVacuumC{1.0, 0.6};
  cfg.env = SqueezedAlternativeEnv{0.4};
  std::vector<SingleModeSpec> envs;
  for (int j = 1; j < cfg.L_max; ++j) envs.push_back(env_mode(cfg.env, j));
  for (int steps = 2; steps <= cfg.L_max; ++steps) {
    const CovMatrix abc = system_cov(cfg, steps);
    const Matrix2 c_in = squeezed_vac_cov(1.0, 0.6).data();
    const Matrix2 b_in = 0.5 * std::cosh(0.8) * Matrix2::Identity();
    const ChannelMap mc = channel_map(steps, cfg.theta_se, cfg.theta_ee, envs, Channel::kC);
    const ChannelMap mb = channel_map(steps, cfg.theta_se, cfg.theta_ee, envs, Channel::kB);
    EXPECT_LE((abc.block(2, 2) - mc.apply(c_in)).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LE((abc.block(1, 1) - mb.apply(b_in)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(LambdaMat, identity_channel_is_zero) {
  const auto env = SingleModeSpec::squeezed(0.5, 0.3);
  const auto lam = lambda_matrix(channel_map(5, pi_angle(0.5), pi_angle(0.1), env),
                                 channel_map(4, pi_angle(0.5), pi_angle(0.1), env));
  ASSERT_TRUE(lam.has_value());
  EXPECT_LE(lam->matrix.cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_THROW(lambda_matrix(channel_map(5, pi_angle(0.5), pi_angle(0.1), env),
                             channel_map(3, pi_angle(0.5), pi_angle(0.1), env)),
               std::invalid_argument);
}

TEST(LambdaMat, hermitian) {
  const auto envs = mixed_envs(20);
  for (double se : {0.05, 0.2, 0.4})
    for (double ee : {0.05, 0.25, 0.45})
      for (int steps = 3; steps <= 21; steps += 6) {
        const auto lam = lambda_matrix(channel_map(steps, pi_angle(se), pi_angle(ee), envs),
                                       channel_map(steps - 1, pi_angle(se), pi_angle(ee), envs));
        ASSERT_TRUE(lam.has_value());
        EXPECT_LE((lam->matrix - lam->matrix.adjoint()).cwiseAbs().maxCoeff(), 1e-12);
      }
}

TEST(LambdaMat, markovian_channel_is_positive) {
  const NegativityReport rep = negativity(50, pi_angle(0.35), pi_angle(0.35), SingleModeSpec::vacuum());
  for (const auto& step : rep.steps) EXPECT_GE(step.eigenvalues[0], -1e-10) << "L=" << step.L;
  EXPECT_TRUE(rep.degenerate_steps.empty());
}

TEST(LambdaMat, singular_previous_step) {
  // theta_se = 0 swaps C out at the first collision: c11(2) = 0.
  const auto env = SingleModeSpec::vacuum();
  EXPECT_FALSE(lambda_matrix(channel_map(3, pi_angle(0.0), pi_angle(0.2), env),
                             channel_map(2, pi_angle(0.0), pi_angle(0.2), env))
                   .has_value());
}

TEST(Negativity, examples) {
  const auto vac = SingleModeSpec::vacuum();
  EXPECT_LE(negativity(50, pi_angle(0.35), pi_angle(0.35), vac).total, kMarkovianTol);
  for (double se : {0.0, 0.1, 0.3, 0.5}) {
    const auto rep = negativity(50, pi_angle(se), pi_angle(0.5), vac);
    EXPECT_LE(rep.total, kMarkovianTol) << se;
    EXPECT_TRUE(rep.markovian());
  }
  const auto nm = negativity(50, pi_angle(0.25), pi_angle(0.2), vac);
  EXPECT_GT(nm.total, 0.1);
  ASSERT_TRUE(nm.log_total().has_value());
  EXPECT_NEAR(*nm.log_total(), std::log(nm.total), 0.0);
  EXPECT_FALSE(negativity(50, pi_angle(0.35), pi_angle(0.35), vac).log_total().has_value());
  EXPECT_THROW(negativity(2, pi_angle(0.25), pi_angle(0.2), vac), std::invalid_argument);
}

TEST(Negativity, frozen_value) {
  // Independent reference: sum over steps of (c11(L)^2 / c11(L-1)^2 - 1)_+.
  const auto rep = negativity(50, pi_angle(0.25), pi_angle(0.2), SingleModeSpec::vacuum());
  EXPECT_NEAR(rep.total, 1.6994517185486588, 1e-9);
  EXPECT_TRUE(rep.degenerate_steps.empty());
  EXPECT_EQ(rep.steps.front().L, 3);
  EXPECT_EQ(rep.steps.back().L, 50);
}

TEST(Negativity, cumulative_is_non_decreasing) {
  const auto rep = negativity(50, pi_angle(0.1), pi_angle(0.05), SingleModeSpec::thermal(0.5));
  double prev = 0.0;
  for (const auto& step : rep.steps) {
    EXPECT_GE(step.contribution, 0.0);
    EXPECT_GE(step.cumulative, prev);
    prev = step.cumulative;
  }
  EXPECT_EQ(prev, rep.total);
}

TEST(Negativity, degenerate_steps_are_reported) {
  const auto rep = negativity(20, pi_angle(0.0), pi_angle(0.2), SingleModeSpec::vacuum());
  EXPECT_FALSE(rep.degenerate_steps.empty());
  EXPECT_EQ(rep.steps.size() + rep.degenerate_steps.size(), 18u);
}

TEST(Negativity, channels_agree) {
  const auto envs = mixed_envs(39);
  for (double se : {0.05, 0.25, 0.4})
    for (double ee : {0.05, 0.2, 0.45}) {
      const auto c = negativity(40, pi_angle(se), pi_angle(ee), envs, Channel::kC);
      const auto b = negativity(40, pi_angle(se), pi_angle(ee), envs, Channel::kB);
      EXPECT_NEAR(c.total, b.total, 1e-12);
    }
}

TEST(Negativity, from_scenario) {
  ScenarioConfig cfg;
  cfg.theta_se = pi_angle(0.25);
  cfg.theta_ee = pi_angle(0.2);
  cfg.env = ThermalEnv{1.0};
  EXPECT_NEAR(negativity(cfg, 50).total, 3.0 * 1.6994517185486588, 1e-8);
}

TEST(ClosedForm, thermal_environment_matches) {
  for (double n : {0.0, 0.5, 2.0}) {
    const auto rep = closed_form_eigs(5, pi_angle(0.2), pi_angle(0.1), SingleModeSpec::thermal(n));
    ASSERT_TRUE(rep.has_value());
    EXPECT_LT(rep->printed_deviation, 1e-10);
    const double lo = std::min(n * rep->bracket, (n + 1.0) * rep->bracket);
    const double hi = std::max(n * rep->bracket, (n + 1.0) * rep->bracket);
    EXPECT_NEAR(rep->numeric[0], lo, 1e-10);
    EXPECT_NEAR(rep->numeric[1], hi, 1e-10);
  }
}

TEST(ClosedForm, squeezed_environment_needs_symplectic_form) {
  const auto env = SingleModeSpec::squeezed(0.5, 0.7);
  for (double se : {0.1, 0.2, 0.3, 0.4})
    for (double ee : {0.1, 0.3}) {
      const auto rep = closed_form_eigs(6, pi_angle(se), pi_angle(ee), env);
      ASSERT_TRUE(rep.has_value());
      EXPECT_LT(rep->symplectic_deviation, 1e-10);
      if (std::abs(rep->bracket) > 1e-3) EXPECT_GT(rep->printed_deviation, 1e-3);
    }
}

TEST(ClosedForm, identity_channel) {
  const auto rep = closed_form_eigs(4, pi_angle(0.5), pi_angle(0.3), SingleModeSpec::vacuum());
  ASSERT_TRUE(rep.has_value());
  EXPECT_EQ(rep->bracket, 0.0);
  EXPECT_EQ(rep->numeric[0], 0.0);
  EXPECT_EQ(rep->numeric[1], 0.0);
  EXPECT_FALSE(rep->printed_log[0].has_value());
}

TEST(GaussianScaling, vacuum_is_trivial) {
  const auto rep = gaussian_scaling(50, pi_angle(0.25), pi_angle(0.2), SingleModeSpec::vacuum());
  EXPECT_EQ(rep.factor, 1.0);
  EXPECT_EQ(rep.relative_deviation, 0.0);
}

TEST(GaussianScaling, thermal_and_squeezed_factors) {
  const auto thermal = gaussian_scaling(50, pi_angle(0.25), pi_angle(0.2), SingleModeSpec::thermal(1.0));
  EXPECT_NEAR(thermal.d_gaussian / thermal.d_vacuum, 3.0, 1e-6);
  EXPECT_TRUE(thermal.branches_nonpositive);
  const auto squeezed = gaussian_scaling(50, pi_angle(0.1), pi_angle(0.3), SingleModeSpec::squeezed(0.3, 1.0));
  EXPECT_NEAR(squeezed.factor, std::cosh(0.6), 1e-15);
  EXPECT_LT(squeezed.relative_deviation, 1e-6);
  EXPECT_TRUE(squeezed.branches_nonpositive);
}

TEST(GaussianScaling, zero_iff_zero_on_grid) {
  const auto g = grid(21);
  const auto env = SingleModeSpec(1.0, 0.3, 0.5);
  for (double se : g)
    for (double ee : g) {
      const auto rep = gaussian_scaling(50, BSAngle(se), BSAngle(ee), env);
      EXPECT_TRUE(rep.zero_iff_zero) << se << "," << ee;
    }
}

TEST(PhaseDiagram, full_reflection_row_and_boundary_invariance) {
  const auto g = grid(11);
  const auto vac = phase_diagram(g, g, 50, SingleModeSpec::vacuum(), 2);
  const auto th = phase_diagram(g, g, 50, SingleModeSpec::thermal(1.0), 1);
  const auto sq = phase_diagram(g, g, 50, SingleModeSpec::squeezed(0.5, 0.0), 3);
  for (int i = 0; i < 11; ++i) {
    EXPECT_TRUE(vac.markovian(i, 10)) << i;
    for (int j = 0; j < 11; ++j) {
      EXPECT_EQ(vac.markovian(i, j), th.markovian(i, j));
      EXPECT_EQ(vac.markovian(i, j), sq.markovian(i, j));
      EXPECT_EQ(vac.d(i, j), negativity(50, BSAngle(g[i]), BSAngle(g[j]), SingleModeSpec::vacuum()).total);
    }
  }
  EXPECT_GT(vac.d(1, 1), 0.0);
}
