#include "gcm/nonmarkov.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "gcm/parallel.hpp"

namespace gcm {

namespace {

using namespace std::complex_literals;

const Matrix2& omega2() {
  static const Matrix2 omega = (Matrix2() << 0.0, 1.0, -1.0, 0.0).finished();
  return omega;
}

void require_envs(int steps, std::span<const SingleModeSpec> envs) {
  if (static_cast<int>(envs.size()) < steps - 1) {
    throw std::invalid_argument("channel needs " + std::to_string(steps - 1) + " environment modes, got " +
                                std::to_string(envs.size()));
  }
}

double negative_part(double lambda) { return 0.5 * (std::abs(lambda) - lambda); }

std::vector<ChannelMap> channel_maps(int L_max, BSAngle se, BSAngle ee, std::span<const SingleModeSpec> envs,
                                     Channel channel) {
  std::vector<ChannelMap> maps;
  maps.reserve(std::max(0, L_max - 1));
  for (int L = 2; L <= L_max; ++L) maps.push_back(channel_map(L, se, ee, envs, channel));
  return maps;
}

std::array<double, 2> sorted_pair(double a, double b) { return a <= b ? std::array{a, b} : std::array{b, a}; }

}  // namespace

ChannelMap channel_map(int steps, BSAngle theta_se, BSAngle theta_ee, std::span<const SingleModeSpec> envs,
                       Channel channel) {
  if (steps < 2) throw std::invalid_argument("channel_map: steps must be >= 2");
  require_envs(steps, envs);
  const Matrix s = channel_scatter(steps, theta_se, theta_ee, channel).data;

  ChannelMap map;
  map.L = steps;
  const int sys = channel_index(steps, 0, channel);
  map.c11 = s(sys, sys);
  map.X = map.c11 * Matrix2::Identity();
  map.Y.setZero();
  for (int k = 1; k < steps; ++k) {
    const double c = s(sys, channel_index(steps, k, channel));
    map.Y += c * c * single_mode_cov(envs[k - 1]).data();
  }
  return map;
}

ChannelMap channel_map(int steps, BSAngle theta_se, BSAngle theta_ee, const SingleModeSpec& env, Channel channel) {
  const std::vector<SingleModeSpec> envs(std::max(0, steps - 1), env);
  return channel_map(steps, theta_se, theta_ee, envs, channel);
}

Matrix2 propagate_channel(int steps, BSAngle theta_se, BSAngle theta_ee, std::span<const SingleModeSpec> envs,
                          const Matrix2& sigma_in, Channel channel) {
  require_envs(steps, envs);
  auto at = [&](int k) { return 2 * channel_index(steps, k, channel); };
  Matrix joint = Matrix::Zero(2 * steps, 2 * steps);
  joint.block<2, 2>(at(0), at(0)) = sigma_in;
  for (int k = 1; k < steps; ++k) joint.block<2, 2>(at(k), at(k)) = single_mode_cov(envs[k - 1]).data();
  const Matrix m = lift(channel_scatter(steps, theta_se, theta_ee, channel));
  const Matrix out = m * joint * m.transpose();
  return out.block<2, 2>(at(0), at(0));
}

std::array<double, 2> LambdaMat::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> solver(matrix, Eigen::EigenvaluesOnly);
  return {solver.eigenvalues()(0), solver.eigenvalues()(1)};
}

std::optional<LambdaMat> lambda_matrix(const ChannelMap& now, const ChannelMap& before) {
  if (now.L != before.L + 1) throw std::invalid_argument("lambda_matrix: maps must be consecutive steps");
  if (std::abs(before.X.determinant()) <= kDegenerateTol * kDegenerateTol) return std::nullopt;

  const Matrix2 x_step = now.X * before.X.inverse();
  const Matrix2 y_step = now.Y - x_step * before.Y * x_step.transpose();
  const Eigen::Matrix2cd omega = omega2().cast<std::complex<double>>();
  const Eigen::Matrix2cd rotated = (x_step * omega2() * x_step.transpose()).cast<std::complex<double>>();

  LambdaMat lam;
  lam.L = now.L;
  lam.matrix = y_step.cast<std::complex<double>>() - 0.5i * omega + 0.5i * rotated;
  return lam;
}

std::optional<double> NegativityReport::log_total() const {
  if (!markovian()) return std::log(total);
  return std::nullopt;
}

NegativityReport negativity(int L_max, BSAngle theta_se, BSAngle theta_ee, std::span<const SingleModeSpec> envs,
                            Channel channel) {
  if (L_max < 3) throw std::invalid_argument("negativity: L_max must be >= 3");
  const auto maps = channel_maps(L_max, theta_se, theta_ee, envs, channel);

  NegativityReport report;
  for (std::size_t i = 1; i < maps.size(); ++i) {
    const auto lam = lambda_matrix(maps[i], maps[i - 1]);
    if (!lam) {
      report.degenerate_steps.push_back(maps[i].L);
      continue;
    }
    StepContribution step;
    step.L = maps[i].L;
    step.eigenvalues = lam->eigenvalues();
    step.contribution = negative_part(step.eigenvalues[0]) + negative_part(step.eigenvalues[1]);
    report.total += step.contribution;
    step.cumulative = report.total;
    report.steps.push_back(step);
  }
  return report;
}

NegativityReport negativity(int L_max, BSAngle theta_se, BSAngle theta_ee, const SingleModeSpec& env,
                            Channel channel) {
  const std::vector<SingleModeSpec> envs(std::max(0, L_max - 1), env);
  return negativity(L_max, theta_se, theta_ee, envs, channel);
}

NegativityReport negativity(const ScenarioConfig& cfg, int L_max, Channel channel) {
  std::vector<SingleModeSpec> envs;
  for (int j = 1; j <= L_max - 1; ++j) envs.push_back(env_mode(cfg.env, j));
  return negativity(L_max, cfg.theta_se, cfg.theta_ee, envs, channel);
}

std::optional<ClosedFormReport> closed_form_eigs(int steps, BSAngle theta_se, BSAngle theta_ee,
                                                 const SingleModeSpec& env) {
  if (steps < 3) throw std::invalid_argument("closed_form_eigs: steps must be >= 3");
  const ChannelMap now = channel_map(steps, theta_se, theta_ee, env);
  const ChannelMap before = channel_map(steps - 1, theta_se, theta_ee, env);
  const auto lam = lambda_matrix(now, before);
  if (!lam) return std::nullopt;

  ClosedFormReport rep;
  rep.L = steps;
  rep.bracket = 1.0 - (now.c11 * now.c11) / (before.c11 * before.c11);
  const double x = env.x_coefficient();
  const double y2 = std::norm(env.y_coefficient());
  const double q_printed = 0.5 * std::sqrt(y2 + 1.0);
  const double q_symplectic = 0.5 * std::sqrt(4.0 * y2 + 1.0);

  rep.printed = sorted_pair((x - q_printed) * rep.bracket, (x + q_printed) * rep.bracket);
  rep.symplectic = sorted_pair((x - q_symplectic) * rep.bracket, (x + q_symplectic) * rep.bracket);
  for (int k = 0; k < 2; ++k) {
    if (rep.printed[k] > 0.0) rep.printed_log[k] = std::log(rep.printed[k]);
  }
  rep.numeric = lam->eigenvalues();
  for (int k = 0; k < 2; ++k) {
    rep.printed_deviation = std::max(rep.printed_deviation, std::abs(rep.printed[k] - rep.numeric[k]));
    rep.symplectic_deviation = std::max(rep.symplectic_deviation, std::abs(rep.symplectic[k] - rep.numeric[k]));
  }
  return rep;
}

ScalingReport gaussian_scaling(int L_max, BSAngle theta_se, BSAngle theta_ee, const SingleModeSpec& env) {
  const NegativityReport gauss = negativity(L_max, theta_se, theta_ee, env);
  const NegativityReport vac = negativity(L_max, theta_se, theta_ee, SingleModeSpec::vacuum());

  ScalingReport rep;
  rep.d_gaussian = gauss.total;
  rep.d_vacuum = vac.total;
  rep.factor = 2.0 * env.x_coefficient();
  rep.predicted = rep.factor * vac.total;
  rep.relative_deviation = rep.predicted > 0.0 ? std::abs(rep.d_gaussian - rep.predicted) / rep.predicted
                                               : std::abs(rep.d_gaussian);
  rep.zero_iff_zero = gauss.markovian() == vac.markovian();
  for (const auto& step : gauss.steps) {
    if (step.contribution > kMarkovianTol && (step.eigenvalues[0] > 1e-12 || step.eigenvalues[1] > 1e-12)) {
      rep.branches_nonpositive = false;
    }
  }
  return rep;
}

PhaseDiagram phase_diagram(const std::vector<double>& theta_se, const std::vector<double>& theta_ee, int steps,
                           const SingleModeSpec& env, unsigned workers) {
  PhaseDiagram pd;
  pd.theta_se = theta_se;
  pd.theta_ee = theta_ee;
  const auto rows = static_cast<Eigen::Index>(theta_se.size());
  const auto cols = static_cast<Eigen::Index>(theta_ee.size());
  pd.d = Matrix::Zero(rows, cols);
  pd.degenerate = Eigen::MatrixXi::Zero(rows, cols);

  // Validate every angle up front so errors surface before any work starts.
  std::vector<BSAngle> se_angles;
  std::vector<BSAngle> ee_angles;
  for (double t : theta_se) se_angles.emplace_back(t);
  for (double t : theta_ee) ee_angles.emplace_back(t);

  parallel_for(static_cast<std::size_t>(rows * cols), workers == 0 ? worker_count() : workers,
               [&](std::size_t idx) {
                 const auto i = static_cast<Eigen::Index>(idx) / cols;
                 const auto j = static_cast<Eigen::Index>(idx) % cols;
                 const NegativityReport rep = negativity(steps, se_angles[i], ee_angles[j], env);
                 pd.d(i, j) = rep.total;
                 pd.degenerate(i, j) = static_cast<int>(rep.degenerate_steps.size());
               });
  return pd;
}

}  // namespace gcm
