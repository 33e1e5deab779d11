#pragma once

// JSON run configuration.
//
// Angles are given as multiples of pi in fields ending in `_pi`. Unknown
// fields, duplicate keys and out-of-range values are rejected with the
// offending field and its source line.

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "gcm/evolve.hpp"

namespace gcm::app {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, int line, const std::string& message);

  /// JSON pointer of the offending field; empty for syntax errors.
  const std::string& field() const { return field_; }
  /// 1-based source line, 0 when unknown.
  int line() const { return line_; }
  /// The message without location prefix.
  const std::string& message() const { return message_; }

 private:
  std::string field_;
  int line_;
  std::string message_;
};

struct ModeSpecPi {
  double n = 0.0;
  double r = 0.0;
  double phi_pi = 0.0;
  friend bool operator==(const ModeSpecPi&, const ModeSpecPi&) = default;
};

namespace cstate {
struct SqueezedVacuum {
  double xi = 0.0;
  double phi_pi = 0.0;
  friend bool operator==(const SqueezedVacuum&, const SqueezedVacuum&) = default;
};
struct Thermal {
  double n = 0.0;
  friend bool operator==(const Thermal&, const Thermal&) = default;
};
/// Thermal C matched to the reduced state of B. `paper_literal` selects
/// n_C = sinh^2(xi_AB) instead of cosh(xi_AB)/2 - 1/2.
struct ThermalMatched {
  bool paper_literal = false;
  friend bool operator==(const ThermalMatched&, const ThermalMatched&) = default;
};
struct Mode {
  ModeSpecPi mode;
  friend bool operator==(const Mode&, const Mode&) = default;
};
}  // namespace cstate

using CStateSpec = std::variant<cstate::SqueezedVacuum, cstate::Thermal, cstate::ThermalMatched, cstate::Mode>;

namespace env {
struct Vacuum {
  friend bool operator==(const Vacuum&, const Vacuum&) = default;
};
struct SqueezedSame {
  double r = 0.0;
  double phi_pi = 0.0;
  friend bool operator==(const SqueezedSame&, const SqueezedSame&) = default;
};
struct SqueezedAlternative {
  double r = 0.0;
  friend bool operator==(const SqueezedAlternative&, const SqueezedAlternative&) = default;
};
struct Thermal {
  double n = 0.0;
  friend bool operator==(const Thermal&, const Thermal&) = default;
};
struct List {
  std::vector<ModeSpecPi> modes;
  friend bool operator==(const List&, const List&) = default;
};
}  // namespace env

using EnvSpec = std::variant<env::Vacuum, env::SqueezedSame, env::SqueezedAlternative, env::Thermal, env::List>;

/// Scenario as written in the config, before conversion to radians.
struct ScenarioSpec {
  int L_max = 50;
  double theta_ss_pi = 0.4;
  double theta_se_pi = 0.35;
  double theta_ee_pi = 0.35;
  double xi_ab = 1.0;
  CStateSpec c_state = cstate::SqueezedVacuum{1.0, 0.0};
  EnvSpec env = env::Vacuum{};
  friend bool operator==(const ScenarioSpec&, const ScenarioSpec&) = default;

  ScenarioConfig to_scenario() const;
};

enum class SweepAxis { kDeltaPhi, kThetaEe, kThetaSe, kNE };

std::string to_string(SweepAxis axis);

struct SweepSpec {
  SweepAxis axis = SweepAxis::kDeltaPhi;
  std::vector<double> values;
  friend bool operator==(const SweepSpec&, const SweepSpec&) = default;
};

/// Inclusive uniform grid in multiples of pi.
struct GridSpec {
  double start = 0.0;
  double stop = 0.5;
  int points = 51;
  friend bool operator==(const GridSpec&, const GridSpec&) = default;

  std::vector<double> values_pi() const;
};

struct PhaseSpec {
  GridSpec theta_se;
  GridSpec theta_ee;
  friend bool operator==(const PhaseSpec&, const PhaseSpec&) = default;
};

struct RunConfig {
  ScenarioSpec scenario;
  std::optional<SweepSpec> sweep;
  std::optional<PhaseSpec> phase;
  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Parses and validates a config document. Throws ConfigError.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Canonical form: sorted keys, every field present, no whitespace.
std::string canonical_json(const RunConfig& cfg);
/// Hex SHA-256 of canonical_json(cfg).
std::string config_digest(const RunConfig& cfg);

/// Scenario for one sweep point. Throws ConfigError when the axis does
/// not apply to the scenario (e.g. n_E with a squeezed environment).
ScenarioSpec apply_axis(const ScenarioSpec& base, SweepAxis axis, double value);

/// Switches every matched-thermal C state to the paper-literal photon number.
void use_paper_literal_nc(RunConfig& cfg);

}  // namespace gcm::app
