#pragma once

// Divisibility-based non-Markovianity of a single dissipative channel.
//
// After L collisions the channel acts on the system mode as
//   sigma -> X_L sigma X_L^T + Y_L,
// with X_L = c11(L) I and Y_L = sum_{k>=2} c1k(L)^2 sigma_{E_{k-1}}, where
// c1k are the elements of the system row of channel_scatter(L). The one-step map
// from L-1 to L is completely positive iff
//   Lambda_L = Y_{L,L-1} - (i/2) Omega + (i/2) X_{L,L-1} Omega X_{L,L-1}^T >= 0.
// D(L) accumulates the negative parts of the eigenvalues of Lambda over
// steps 3..L. Indexing is by the later step of each one-step map.

#include <array>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "gcm/evolve.hpp"
#include "gcm/gstate.hpp"
#include "gcm/optics.hpp"

namespace gcm {

/// D at or below this counts as Markovian.
inline constexpr double kMarkovianTol = 1e-12;
/// |c11(L-1)| at or below this makes X_{L-1} singular.
inline constexpr double kDegenerateTol = 1e-12;

struct ChannelMap {
  int L = 0;
  Matrix2 X = Matrix2::Identity();
  Matrix2 Y = Matrix2::Zero();
  double c11 = 1.0;

  Matrix2 apply(const Matrix2& sigma_in) const { return X * sigma_in * X.transpose() + Y; }
};

/// envs[j-1] is E_j; at least steps-1 entries.
ChannelMap channel_map(int steps, BSAngle theta_se, BSAngle theta_ee, std::span<const SingleModeSpec> envs,
                       Channel channel = Channel::kC);
ChannelMap channel_map(int steps, BSAngle theta_se, BSAngle theta_ee, const SingleModeSpec& env,
                       Channel channel = Channel::kC);

/// Reduced output of the system mode obtained by propagating
/// sigma_in (+) E_1 (+) ... (+) E_{L-1} through channel_scatter(L).
Matrix2 propagate_channel(int steps, BSAngle theta_se, BSAngle theta_ee, std::span<const SingleModeSpec> envs,
                          const Matrix2& sigma_in, Channel channel = Channel::kC);

struct LambdaMat {
  int L = 0;
  Eigen::Matrix2cd matrix = Eigen::Matrix2cd::Zero();

  /// Ascending, from a Hermitian eigen-solver.
  std::array<double, 2> eigenvalues() const;
};

/// Lambda for the step now.L-1 -> now.L. Empty when X_{L-1} is singular.
std::optional<LambdaMat> lambda_matrix(const ChannelMap& now, const ChannelMap& before);

struct StepContribution {
  int L = 0;
  std::array<double, 2> eigenvalues{};
  double contribution = 0.0;  // sum over branches of (|lambda| - lambda) / 2
  double cumulative = 0.0;
};

struct NegativityReport {
  std::vector<StepContribution> steps;  // L = 3 .. L_max, degenerate steps omitted
  std::vector<int> degenerate_steps;
  double total = 0.0;
  /// ln(total); only when the channel is not Markovian.
  std::optional<double> log_total() const;
  bool markovian() const { return total <= kMarkovianTol; }
};

NegativityReport negativity(int L_max, BSAngle theta_se, BSAngle theta_ee, std::span<const SingleModeSpec> envs,
                            Channel channel = Channel::kC);
NegativityReport negativity(int L_max, BSAngle theta_se, BSAngle theta_ee, const SingleModeSpec& env,
                            Channel channel = Channel::kC);
/// Channel of a scenario: its se/ee angles and environment pattern.
NegativityReport negativity(const ScenarioConfig& cfg, int L_max, Channel channel = Channel::kC);

/// Comparison of the closed-form eigenvalue expression with the numerical
/// spectrum of Lambda_L.
struct ClosedFormReport {
  int L = 0;
  double bracket = 0.0;  // 1 - c11(L)^2 / c11(L-1)^2
  /// (X_E -+ (1/2) sqrt(|Y_E|^2 + 1)) * bracket, as printed without the ln.
  std::array<double, 2> printed{};
  /// ln of the printed expression, when its argument is positive.
  std::array<std::optional<double>, 2> printed_log{};
  /// (X_E -+ (1/2) sqrt(4 |Y_E|^2 + 1)) * bracket.
  std::array<double, 2> symplectic{};
  std::array<double, 2> numeric{};
  double printed_deviation = 0.0;     // max over sorted branches
  double symplectic_deviation = 0.0;  // max over sorted branches
};

std::optional<ClosedFormReport> closed_form_eigs(int steps, BSAngle theta_se, BSAngle theta_ee,
                                                 const SingleModeSpec& env);

struct ScalingReport {
  double d_gaussian = 0.0;
  double d_vacuum = 0.0;
  double factor = 1.0;  // (2 n_E + 1) cosh 2 r_E
  double predicted = 0.0;
  double relative_deviation = 0.0;
  bool zero_iff_zero = true;
  /// Every step contributing more than kMarkovianTol to d_gaussian has both
  /// eigenvalues <= 1e-12.
  bool branches_nonpositive = true;
};

ScalingReport gaussian_scaling(int L_max, BSAngle theta_se, BSAngle theta_ee, const SingleModeSpec& env);

struct PhaseDiagram {
  std::vector<double> theta_se;  // radians, rows
  std::vector<double> theta_ee;  // radians, columns
  Matrix d;
  Eigen::MatrixXi degenerate;  // skipped steps per point

  bool markovian(int i, int j) const { return d(i, j) <= kMarkovianTol; }
};

/// D(L) over theta_se x theta_ee. Grid points run on up to `workers` threads.
PhaseDiagram phase_diagram(const std::vector<double>& theta_se, const std::vector<double>& theta_ee, int steps,
                           const SingleModeSpec& env, unsigned workers = 1);

}  // namespace gcm
