#include "gcm/gstate.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "gtest/gtest.h"
#include "support/oracles.hpp"

using namespace gcm;
using gcm::testing::moments_from_chi;
using gcm::testing::rotation2;
using gcm::testing::single_mode_chi;

namespace {

constexpr double kPi = std::numbers::pi;
// f(cosh(1)/2), 30-digit reference.
constexpr double kTmsvLocalEntropy = 0.659452959168036701722073437598;

void expect_matrix_near(const Matrix& a, const Matrix& b, double tol) {
  ASSERT_EQ(a.rows(), b.rows());
  ASSERT_EQ(a.cols(), b.cols());
  EXPECT_LE((a - b).cwiseAbs().maxCoeff(), tol) << "a=\n" << a << "\nb=\n" << b;
}

}  // namespace

TEST(SingleModeSpec, rejects_invalid_parameters) {
  EXPECT_THROW(SingleModeSpec(-0.1, 0.0, 0.0), std::invalid_argument);
  EXPECT_THROW(SingleModeSpec(0.0, -0.1, 0.0), std::invalid_argument);
  EXPECT_THROW(SingleModeSpec(0.0, 0.0, 0.0, {0.1, 0.0}), std::invalid_argument);
  EXPECT_NO_THROW(SingleModeSpec(0.0, 0.0, 0.0, {0.0, 0.0}));
}

TEST(SingleModeSpec, phi_is_reduced_into_one_turn) {
  EXPECT_NEAR(SingleModeSpec(0.0, 0.1, 3.0 * kPi).phi(), kPi, 1e-12);
  EXPECT_NEAR(SingleModeSpec(0.0, 0.1, -0.5 * kPi).phi(), 1.5 * kPi, 1e-12);
}

TEST(SingleModeCov, vacuum_and_thermal) {
  expect_matrix_near(single_mode_cov({0.0, 0.0, 0.0}).data(), 0.5 * Matrix::Identity(2, 2), 1e-15);
  expect_matrix_near(single_mode_cov({1.0, 0.0, 0.0}).data(), 1.5 * Matrix::Identity(2, 2), 1e-15);
}

TEST(SingleModeCov, squeezing_orientation_at_zero_angle) {
  // x is anti-squeezed at phi = 0.
  const Matrix s = single_mode_cov({0.0, 0.5, 0.0}).data();
  EXPECT_NEAR(s(0, 0), 1.35914091422952261768, 1e-14);
  EXPECT_NEAR(s(1, 1), 0.18393972058572116080, 1e-14);
  EXPECT_NEAR(s(0, 1), 0.0, 1e-15);
}

TEST(SingleModeCov, matches_characteristic_function_moments) {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> n_dist(0.0, 2.0);
  std::uniform_real_distribution<double> r_dist(0.0, 0.8);
  std::uniform_real_distribution<double> phi_dist(0.0, 2.0 * kPi);
  for (int trial = 0; trial < 10; ++trial) {
    const double n = n_dist(rng);
    const double r = r_dist(rng);
    const double phi = phi_dist(rng);
    const Matrix2 oracle = moments_from_chi([&](auto mu) { return single_mode_chi(n, r, phi, mu); });
    expect_matrix_near(single_mode_cov({n, r, phi}).data(), oracle, 1e-6);
  }
}

TEST(TmsvCov, blocks) {
  expect_matrix_near(tmsv_cov(0.0).data(), 0.5 * Matrix::Identity(4, 4), 1e-15);
  const CovMatrix s = tmsv_cov(1.0);
  const double c = 0.771540317407621889;
  const double sh = 0.587600596821900728;
  expect_matrix_near(s.block(0, 0), c * Matrix::Identity(2, 2), 1e-14);
  expect_matrix_near(s.block(1, 1), c * Matrix::Identity(2, 2), 1e-14);
  expect_matrix_near(s.block(0, 1), Eigen::Vector2d(sh, -sh).asDiagonal().toDenseMatrix(), 1e-14);
}

TEST(TmsvCov, is_pure_for_any_squeezing) {
  for (double xi : {0.0, 0.3, 1.0, 2.5, -1.2}) {
    const auto nu = symplectic_eigenvalues(tmsv_cov(xi));
    ASSERT_EQ(nu.size(), 2u);
    EXPECT_NEAR(nu[0], 0.5, 1e-10) << "xi=" << xi;
    EXPECT_NEAR(nu[1], 0.5, 1e-10) << "xi=" << xi;
  }
}

TEST(SqueezedVacCov, examples) {
  expect_matrix_near(squeezed_vac_cov(0.0, 0.0).data(), 0.5 * Matrix::Identity(2, 2), 1e-15);
  const double e_half = 1.35914091422952261768;
  const double inv_e_half = 0.18393972058572116080;
  expect_matrix_near(squeezed_vac_cov(1.0, 0.0).data(), Eigen::Vector2d(e_half, inv_e_half).asDiagonal().toDenseMatrix(),
                     1e-14);
  expect_matrix_near(squeezed_vac_cov(1.0, kPi).data(), Eigen::Vector2d(inv_e_half, e_half).asDiagonal().toDenseMatrix(),
                     1e-14);
}

TEST(SqueezedVacCov, matches_half_strength_single_mode) {
  for (double phi : {0.0, 0.7, 2.0}) {
    expect_matrix_near(squeezed_vac_cov(0.8, phi).data(), single_mode_cov({0.0, 0.4, phi}).data(), 1e-15);
  }
}

TEST(ThermalCov, examples) {
  expect_matrix_near(thermal_cov(0.0).data(), 0.5 * Matrix::Identity(2, 2), 1e-15);
  EXPECT_NEAR(thermal_cov(std::pow(std::sinh(1.0), 2)).data()(0, 0), 1.88109784554181573, 1e-14);
  EXPECT_NEAR(thermal_cov(std::cosh(1.0) / 2 - 0.5).data()(1, 1), 0.771540317407621889, 1e-14);
  EXPECT_THROW(thermal_cov(-1.0), std::invalid_argument);
}

TEST(CovMatrix, rejects_bad_shapes) {
  EXPECT_THROW(CovMatrix(Matrix::Identity(3, 3)), std::invalid_argument);
  EXPECT_THROW(CovMatrix(Matrix::Identity(2, 4)), std::invalid_argument);
  Matrix asym = Matrix::Identity(2, 2);
  asym(0, 1) = 1e-6;
  EXPECT_THROW(CovMatrix{asym}, std::invalid_argument);
}

TEST(CovMatrix, physicality) {
  EXPECT_TRUE(vacuum_cov(3).is_physical());
  EXPECT_NEAR(vacuum_cov(1).min_physical_eigenvalue(), 0.0, 1e-15);
  const CovMatrix too_small(0.3 * Matrix::Identity(2, 2));
  EXPECT_FALSE(too_small.is_physical());
  EXPECT_THROW(too_small.require_physical(), UnphysicalStateError);
}

TEST(SymplecticEigenvalues, examples) {
  EXPECT_NEAR(symplectic_eigenvalues(vacuum_cov())[0], 0.5, 1e-14);
  EXPECT_NEAR(symplectic_eigenvalues(thermal_cov(1.0))[0], 1.5, 1e-14);
  const auto nu = symplectic_eigenvalues(direct_sum(thermal_cov(2.0), thermal_cov(0.25)));
  EXPECT_NEAR(nu[0], 0.75, 1e-13);
  EXPECT_NEAR(nu[1], 2.5, 1e-13);
}

TEST(SymplecticEigenvalues, invariant_under_quadrature_rotation) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 2.0 * kPi);
  for (int trial = 0; trial < 20; ++trial) {
    const CovMatrix s = single_mode_cov({0.3 * trial / 10.0, 0.05 * trial, u(rng)});
    const Matrix2 rot = rotation2(u(rng));
    const CovMatrix turned(rot * s.data() * rot.transpose());
    EXPECT_NEAR(symplectic_eigenvalues(s)[0], symplectic_eigenvalues(turned)[0], 1e-10);
  }
}

TEST(Entropy, examples) {
  EXPECT_NEAR(entropy(vacuum_cov()), 0.0, 1e-15);
  EXPECT_NEAR(entropy(thermal_cov(1.0)), 2.0 * std::log(2.0), 1e-12);
  const CovMatrix reduced_b = reduce(tmsv_cov(1.0), ModeLayout::tmsv(), {ModeLabel::b()});
  EXPECT_NEAR(entropy(reduced_b), kTmsvLocalEntropy, 1e-12);
}

TEST(Entropy, pure_constructors_have_zero_entropy) {
  EXPECT_NEAR(entropy(tmsv_cov(1.0)), 0.0, 1e-10);
  EXPECT_NEAR(entropy(tmsv_cov(2.0)), 0.0, 1e-10);
  EXPECT_NEAR(entropy(squeezed_vac_cov(1.0, 0.3)), 0.0, 1e-10);
  EXPECT_NEAR(entropy(vacuum_cov(4)), 0.0, 1e-10);
}

TEST(Entropy, additive_over_direct_sums) {
  const CovMatrix a = single_mode_cov({0.7, 0.2, 1.0});
  const CovMatrix b = tmsv_cov(0.8);
  const CovMatrix c = thermal_cov(2.0);
  EXPECT_NEAR(entropy(direct_sum(direct_sum(a, b), c)), entropy(a) + entropy(b) + entropy(c), 1e-10);
}

TEST(Entropy, term_is_continuous_at_pure_limit) {
  EXPECT_EQ(entropy_term(0.5), 0.0);
  EXPECT_EQ(entropy_term(0.5 + 1e-13), 0.0);
  EXPECT_GT(entropy_term(0.5 + 1e-9), 0.0);
  EXPECT_LT(entropy_term(0.5 + 1e-9), 1e-7);
}

TEST(Entropy, flags_unphysical_spectra) {
  EXPECT_THROW(entropy(CovMatrix(0.4 * Matrix::Identity(2, 2))), UnphysicalStateError);
  // Within the 1e-6 floor it is treated as pure.
  EXPECT_EQ(entropy(CovMatrix((0.5 - 1e-8) * Matrix::Identity(2, 2))), 0.0);
}

TEST(ModeLayout, collision_positions) {
  const ModeLayout lay = ModeLayout::collision(4);
  ASSERT_EQ(lay.size(), 9);
  EXPECT_EQ(lay.position(ModeLabel::env_b(3)), 0);
  EXPECT_EQ(lay.position(ModeLabel::env_b(1)), 2);
  EXPECT_EQ(lay.position(ModeLabel::b()), 3);
  EXPECT_EQ(lay.position(ModeLabel::a()), 4);
  EXPECT_EQ(lay.position(ModeLabel::c()), 5);
  EXPECT_EQ(lay.position(ModeLabel::env_c(1)), 6);
  EXPECT_EQ(lay.position(ModeLabel::env_c(3)), 8);
  EXPECT_THROW(lay.position(ModeLabel::env_c(4)), std::invalid_argument);
}

TEST(Reduce, examples) {
  const CovMatrix ab = tmsv_cov(1.0);
  expect_matrix_near(reduce(ab, ModeLayout::tmsv(), {ModeLabel::a()}).data(),
                     0.771540317407621889 * Matrix::Identity(2, 2), 1e-14);
  expect_matrix_near(reduce(ab, ModeLayout::tmsv(), {ModeLabel::a(), ModeLabel::b()}).data(), ab.data(), 0.0);

  const CovMatrix mixed = direct_sum(vacuum_cov(), thermal_cov(1.0));
  const ModeLayout lay({ModeLabel::b(), ModeLabel::c()});
  expect_matrix_near(reduce(mixed, lay, {ModeLabel::c()}).data(), 1.5 * Matrix::Identity(2, 2), 0.0);
}

TEST(Reduce, keeps_layout_order_and_rejects_unknown_modes) {
  const CovMatrix s = direct_sum(direct_sum(thermal_cov(1.0), thermal_cov(2.0)), thermal_cov(3.0));
  const CovMatrix r = reduce(s, ModeLayout::system(), {ModeLabel::c(), ModeLabel::a()});
  EXPECT_NEAR(r.data()(0, 0), 1.5, 0.0);
  EXPECT_NEAR(r.data()(2, 2), 3.5, 0.0);
  EXPECT_THROW(reduce(s, ModeLayout::system(), {ModeLabel::env_b(1)}), std::invalid_argument);
}
