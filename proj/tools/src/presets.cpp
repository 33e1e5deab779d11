#include "gcm/app/presets.hpp"

namespace gcm::app {

namespace {

// theta_ss = 0.4 pi, xi_AB = xi_C = 1 throughout.
ScenarioSpec base_scenario() { return ScenarioSpec{}; }

Preset series(std::string name, std::string summary, EnvSpec env, double theta_se_pi = 0.35) {
  RunConfig cfg;
  cfg.scenario = base_scenario();
  cfg.scenario.theta_se_pi = theta_se_pi;
  cfg.scenario.env = std::move(env);
  return {std::move(name), PresetKind::kSeries, std::move(summary), cfg};
}

Preset sweep(std::string name, std::string summary, ScenarioSpec s, SweepAxis axis, std::vector<double> values) {
  RunConfig cfg;
  cfg.scenario = std::move(s);
  cfg.sweep = SweepSpec{axis, std::move(values)};
  return {std::move(name), PresetKind::kSweep, std::move(summary), cfg};
}

std::vector<Preset> build() {
  std::vector<Preset> out;
  out.push_back(series("fig3a-vacuum", "Markovian channel, vacuum environments", env::Vacuum{}));
  out.push_back(series("fig3a-sq-same", "Markovian channel, squeezed environments with phi_E = 0",
                       env::SqueezedSame{0.5, 0.0}));
  out.push_back(series("fig3a-sq-alt", "Markovian channel, squeezing angle alternating between pi and 0",
                       env::SqueezedAlternative{0.5}));
  out.push_back(series("closed", "no system-environment coupling (theta_se = pi/2)", env::Vacuum{}, 0.5));

  ScenarioSpec s3b = base_scenario();
  s3b.env = env::SqueezedSame{0.5, 0.0};
  out.push_back(sweep("fig3b", "squeezed environments, phase difference to C", s3b, SweepAxis::kDeltaPhi,
                      {0.0, 0.25, 0.5, 0.75, 1.0}));

  ScenarioSpec s4 = base_scenario();
  s4.c_state = cstate::ThermalMatched{};
  s4.env = env::SqueezedSame{0.5, 0.0};
  out.push_back(sweep("fig4", "C thermal and matched to B, squeezing angle of the environments", s4,
                      SweepAxis::kDeltaPhi, {0.0, 0.5, 1.0}));

  ScenarioSpec s5a = base_scenario();
  s5a.theta_se_pi = 0.25;
  out.push_back(sweep("fig5a", "theta_se = pi/4, vacuum environments", s5a, SweepAxis::kThetaEe, {0.1, 0.2, 0.3}));

  ScenarioSpec s5b = base_scenario();
  s5b.theta_ee_pi = 0.2;
  out.push_back(sweep("fig5b", "theta_ee = pi/5, vacuum environments", s5b, SweepAxis::kThetaSe, {0.1, 0.2, 0.3}));

  ScenarioSpec s6 = base_scenario();
  s6.theta_se_pi = 0.3;
  s6.theta_ee_pi = 0.15;
  s6.env = env::Thermal{0.0};
  out.push_back(sweep("fig6", "thermal environments", s6, SweepAxis::kNE, {0.0, 0.5, 1.0, 2.0}));

  RunConfig c2;
  c2.scenario = base_scenario();
  c2.phase = PhaseSpec{GridSpec{0.0, 0.5, 51}, GridSpec{0.0, 0.5, 51}};
  out.push_back({"fig2", PresetKind::kPhase, "non-Markovianity over theta_se x theta_ee, vacuum, L = 50", c2});
  return out;
}

}  // namespace

const std::vector<Preset>& presets() {
  static const std::vector<Preset> all = build();
  return all;
}

const Preset& find_preset(const std::string& name) {
  for (const auto& p : presets()) {
    if (p.name == name) return p;
  }
  std::string known;
  for (const auto& p : presets()) known += (known.empty() ? "" : ", ") + p.name;
  throw ConfigError("--preset", 0, "unknown preset \"" + name + "\" (known: " + known + ")");
}

std::string command_for(PresetKind kind) {
  switch (kind) {
    case PresetKind::kSeries: return "evolve";
    case PresetKind::kSweep: return "sweep";
    case PresetKind::kPhase: return "phase";
  }
  return "?";
}

}  // namespace gcm::app
