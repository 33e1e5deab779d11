#pragma once

// Scenario assembly and stroboscopic propagation of the joint covariance.

#include <utility>
#include <variant>
#include <vector>

#include "gcm/gstate.hpp"
#include "gcm/optics.hpp"

namespace gcm {

// Initial state of system mode C.
struct SqueezedVacuumC {
  double xi = 0.0;
  double phi = 0.0;
};
struct ThermalC {
  double n = 0.0;
};
using CState = std::variant<SqueezedVacuumC, ThermalC, SingleModeSpec>;

// Preparation of the environment modes, shared by both channels.
struct VacuumEnv {};
struct SqueezedSameEnv {
  double r = 0.0;
  double phi = 0.0;
};
/// phi = pi for odd j, 0 for even j.
struct SqueezedAlternativeEnv {
  double r = 0.0;
};
struct ThermalEnv {
  double n = 0.0;
};
/// Explicit per-step modes; modes[j-1] is E_j. Must hold L_max - 1 entries.
struct EnvList {
  std::vector<SingleModeSpec> modes;
};
using EnvPattern = std::variant<VacuumEnv, SqueezedSameEnv, SqueezedAlternativeEnv, ThermalEnv, EnvList>;

struct ScenarioConfig {
  int L_max = 50;
  BSAngle theta_ss{0.0};
  BSAngle theta_se{0.0};
  BSAngle theta_ee{0.0};
  double xi_ab = 0.0;
  CState c_state = SqueezedVacuumC{};
  EnvPattern env = VacuumEnv{};

  CollisionAngles angles() const { return {theta_ss, theta_se, theta_ee}; }
  /// Throws std::invalid_argument on inconsistent fields.
  void validate() const;
};

/// Covariance of the initial C mode.
CovMatrix c_state_cov(const CState& state);

/// Environment mode E_j (j >= 1) of either channel.
SingleModeSpec env_mode(const EnvPattern& env, int j);

/// True when every E_j is the same state (all patterns except alternating
/// squeezing and non-uniform lists).
bool env_is_uniform(const EnvPattern& env);

/// Joint input covariance over ModeLayout::collision(L): block-diagonal
/// except for the A-B two-mode squeezed correlation.
std::pair<CovMatrix, ModeLayout> assemble_input(const ScenarioConfig& cfg, int steps);

/// sigma_out = lift(S) sigma_in lift(S)^T.
CovMatrix propagate(const CovMatrix& sigma_in, const ScatterMatrix& s);

/// Global output covariance after `steps` collisions, collision layout.
CovMatrix global_cov(const ScenarioConfig& cfg, int steps);

/// Output covariance of (A, B, C) after `steps` collisions.
CovMatrix system_cov(const ScenarioConfig& cfg, int steps);

// ---------------------------------------------------------------------------
// Closed-form comparator

enum class AppendixVariant {
  /// The printed forms, including the (cosh 2r + (n + 1/2)) environment
  /// weight, K + M on both sigma_BC diagonals and no phi_C dependence.
  kLiteral,
  /// Weights rebuilt from the single-mode covariances: X_E for the
  /// environment, K - M on the second sigma_BC diagonal, phi_C kept.
  kCorrected,
};

struct AppendixReport {
  CovMatrix sigma;           // (A, B, C)
  Matrix deviation;          // |appendix - system_cov| entrywise, 6x6
  double max_deviation = 0.0;
  double sigma_a_deviation = 0.0;  // max deviation within the sigma_A block
};

/// Evaluates the closed forms from the elements of S^{-1}(L) = S(L)^T and
/// compares with system_cov. Deviations are reported, never thrown.
AppendixReport appendix_cov(const ScenarioConfig& cfg, int steps, AppendixVariant variant);

}  // namespace gcm
