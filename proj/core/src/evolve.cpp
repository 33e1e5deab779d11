#include "gcm/evolve.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace gcm {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

// Single-mode input written as [[alpha + beta, gamma], [gamma, alpha - beta]].
struct ModeWeights {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
};

ModeWeights weights_of(const Matrix2& s) {
  return {0.5 * (s(0, 0) + s(1, 1)), 0.5 * (s(0, 0) - s(1, 1)), s(0, 1)};
}

}  // namespace

void ScenarioConfig::validate() const {
  if (L_max < 1) throw std::invalid_argument("L_max must be >= 1");
  if (!std::isfinite(xi_ab)) throw std::invalid_argument("xi_ab must be finite");
  std::visit(Overloaded{
                 [](const SqueezedVacuumC& c) {
                   if (!(c.xi >= 0.0)) throw std::invalid_argument("c_state.xi must be >= 0");
                 },
                 [](const ThermalC& c) {
                   if (!(c.n >= 0.0)) throw std::invalid_argument("c_state.n must be >= 0");
                 },
                 [](const SingleModeSpec&) {},
             },
             c_state);
  std::visit(Overloaded{
                 [](const VacuumEnv&) {},
                 [](const SqueezedSameEnv& e) {
                   if (!(e.r >= 0.0)) throw std::invalid_argument("env.r must be >= 0");
                 },
                 [](const SqueezedAlternativeEnv& e) {
                   if (!(e.r >= 0.0)) throw std::invalid_argument("env.r must be >= 0");
                 },
                 [](const ThermalEnv& e) {
                   if (!(e.n >= 0.0)) throw std::invalid_argument("env.n must be >= 0");
                 },
                 [this](const EnvList& e) {
                   if (static_cast<int>(e.modes.size()) != L_max - 1) {
                     throw std::invalid_argument("env.modes must list L_max - 1 = " + std::to_string(L_max - 1) +
                                                 " modes, got " + std::to_string(e.modes.size()));
                   }
                 },
             },
             env);
}

CovMatrix c_state_cov(const CState& state) {
  return std::visit(Overloaded{
                        [](const SqueezedVacuumC& c) { return squeezed_vac_cov(c.xi, c.phi); },
                        [](const ThermalC& c) { return thermal_cov(c.n); },
                        [](const SingleModeSpec& s) { return single_mode_cov(s); },
                    },
                    state);
}

SingleModeSpec env_mode(const EnvPattern& env, int j) {
  if (j < 1) throw std::out_of_range("env_mode: j must be >= 1");
  return std::visit(Overloaded{
                        [](const VacuumEnv&) { return SingleModeSpec::vacuum(); },
                        [](const SqueezedSameEnv& e) { return SingleModeSpec::squeezed(e.r, e.phi); },
                        [j](const SqueezedAlternativeEnv& e) {
                          return SingleModeSpec::squeezed(e.r, j % 2 == 1 ? std::numbers::pi : 0.0);
                        },
                        [](const ThermalEnv& e) { return SingleModeSpec::thermal(e.n); },
                        [j](const EnvList& e) {
                          if (j > static_cast<int>(e.modes.size())) {
                            throw std::out_of_range("env_mode: environment list too short for E_" +
                                                    std::to_string(j));
                          }
                          return e.modes[j - 1];
                        },
                    },
                    env);
}

bool env_is_uniform(const EnvPattern& env) {
  return std::visit(Overloaded{
                        [](const SqueezedAlternativeEnv& e) { return e.r == 0.0; },
                        [](const EnvList& e) {
                          for (const auto& m : e.modes) {
                            if (!(m == e.modes.front())) return false;
                          }
                          return true;
                        },
                        [](const auto&) { return true; },
                    },
                    env);
}

std::pair<CovMatrix, ModeLayout> assemble_input(const ScenarioConfig& cfg, int steps) {
  if (steps < 1 || steps > cfg.L_max) {
    throw std::out_of_range("assemble_input: step " + std::to_string(steps) + " outside [1, L_max]");
  }
  if (const auto* list = std::get_if<EnvList>(&cfg.env)) {
    if (static_cast<int>(list->modes.size()) != cfg.L_max - 1) {
      throw std::invalid_argument("assemble_input: environment list must hold L_max - 1 modes per channel");
    }
  }

  ModeLayout layout = ModeLayout::collision(steps);
  const int n = layout.size();
  const int b = steps - 1;
  const int a = steps;
  const int c = steps + 1;

  Matrix m = Matrix::Zero(2 * n, 2 * n);
  const CovMatrix ab = tmsv_cov(cfg.xi_ab);  // [A, B]
  m.block<2, 2>(2 * a, 2 * a) = ab.block(0, 0);
  m.block<2, 2>(2 * a, 2 * b) = ab.block(0, 1);
  m.block<2, 2>(2 * b, 2 * a) = ab.block(1, 0);
  m.block<2, 2>(2 * b, 2 * b) = ab.block(1, 1);
  m.block<2, 2>(2 * c, 2 * c) = c_state_cov(cfg.c_state).data();
  for (int j = 1; j <= steps - 1; ++j) {
    const Matrix2 e = single_mode_cov(env_mode(cfg.env, j)).data();
    m.block<2, 2>(2 * (b - j), 2 * (b - j)) = e;
    m.block<2, 2>(2 * (c + j), 2 * (c + j)) = e;
  }
  return {CovMatrix(std::move(m)), std::move(layout)};
}

CovMatrix propagate(const CovMatrix& sigma_in, const ScatterMatrix& s) {
  if (2 * s.size() != sigma_in.data().rows()) {
    throw std::invalid_argument("propagate: scattering matrix has " + std::to_string(s.size()) +
                                " modes, covariance has " + std::to_string(sigma_in.modes()));
  }
  const Matrix m = lift(s);
  Matrix out = m * sigma_in.data() * m.transpose();
  out = 0.5 * (out + out.transpose()).eval();
  return CovMatrix(std::move(out));
}

CovMatrix global_cov(const ScenarioConfig& cfg, int steps) {
  const auto [sigma_in, layout] = assemble_input(cfg, steps);
  return propagate(sigma_in, total_scatter(steps, cfg.angles()));
}

CovMatrix system_cov(const ScenarioConfig& cfg, int steps) {
  const CovMatrix out = global_cov(cfg, steps);
  // Positions of A, B, C in the collision layout.
  return permute_modes(out, {steps, steps - 1, steps + 1});
}

AppendixReport appendix_cov(const ScenarioConfig& cfg, int steps, AppendixVariant variant) {
  const bool literal = variant == AppendixVariant::kLiteral;
  const Matrix s = total_scatter(steps, cfg.angles()).data;
  const int n = 2 * steps + 1;
  const int b = steps - 1;
  const int a = steps;
  const int c = steps + 1;
  // c_{i,k} = (S^{-1})_{ik} = S_{ki}: weight of input i in output k.
  auto coef = [&](int i, int k) { return s(k, i); };

  std::vector<ModeWeights> in(n);
  in[b] = {0.5 * std::cosh(cfg.xi_ab), 0.0, 0.0};
  const auto* sq_c = std::get_if<SqueezedVacuumC>(&cfg.c_state);
  if (literal && sq_c != nullptr) {
    in[c] = {0.5 * std::cosh(sq_c->xi), 0.5 * std::sinh(sq_c->xi), 0.0};
  } else {
    in[c] = weights_of(c_state_cov(cfg.c_state).data());
  }
  for (int pos = 0; pos < n; ++pos) {
    if (pos == a || pos == b || pos == c) continue;
    SingleModeSpec e;
    if (literal) {
      // Printed indexing: B-side position w (1-based) is read as E_w.
      const int j = pos < b ? pos + 1 : pos - c;
      e = env_mode(cfg.env, j);
      const double two_r = 2.0 * e.r();
      in[pos] = {0.5 * (std::cosh(two_r) + (e.n() + 0.5)), 0.5 * std::sinh(two_r) * std::cos(e.phi()),
                 0.5 * std::sinh(two_r) * std::sin(e.phi())};
    } else {
      const int j = pos < b ? b - pos : pos - c;
      in[pos] = weights_of(single_mode_cov(env_mode(cfg.env, j)).data());
    }
  }

  auto local_block = [&](int k) {
    ModeWeights acc;
    for (int i = 0; i < n; ++i) {
      if (i == a) continue;
      const double w = coef(i, k) * coef(i, k);
      acc.alpha += in[i].alpha * w;
      acc.beta += in[i].beta * w;
      acc.gamma += in[i].gamma * w;
    }
    Matrix2 m;
    m << acc.alpha + acc.beta, acc.gamma, acc.gamma, acc.alpha - acc.beta;
    return m;
  };

  Matrix2 sigma_bc = Matrix2::Zero();
  for (int i = 0; i < n; ++i) {
    if (i == a) continue;
    const double w = coef(i, b) * coef(i, c);
    const ModeWeights& mw = in[i];
    Matrix2 blk;
    blk << mw.alpha + mw.beta, mw.gamma, mw.gamma, literal ? mw.alpha + mw.beta : mw.alpha - mw.beta;
    sigma_bc += w * blk;
  }

  const double sh = 0.5 * std::sinh(cfg.xi_ab);
  const Matrix2 z = Eigen::Vector2d(1.0, -1.0).asDiagonal();

  Matrix out = Matrix::Zero(6, 6);
  out.block<2, 2>(0, 0) = 0.5 * std::cosh(cfg.xi_ab) * Matrix2::Identity();
  out.block<2, 2>(2, 2) = local_block(b);
  out.block<2, 2>(4, 4) = local_block(c);
  out.block<2, 2>(0, 2) = sh * coef(b, b) * z;
  out.block<2, 2>(0, 4) = sh * coef(b, c) * z;
  out.block<2, 2>(2, 4) = sigma_bc;
  out.block<2, 2>(2, 0) = out.block<2, 2>(0, 2).transpose();
  out.block<2, 2>(4, 0) = out.block<2, 2>(0, 4).transpose();
  out.block<2, 2>(4, 2) = out.block<2, 2>(2, 4).transpose();

  AppendixReport report{CovMatrix(out), Matrix(), 0.0, 0.0};
  report.deviation = (out - system_cov(cfg, steps).data()).cwiseAbs();
  report.max_deviation = report.deviation.maxCoeff();
  report.sigma_a_deviation = report.deviation.block<2, 2>(0, 0).maxCoeff();
  return report;
}

}  // namespace gcm
