#include "gcm/app/check.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "gcm/app/commands.hpp"
#include "gcm/app/presets.hpp"
#include "gcm/info.hpp"
#include "gcm/nonmarkov.hpp"
#include "gcm/parallel.hpp"

namespace gcm::app {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kDeskL = 50;

std::string sci(double v) {
  std::ostringstream os;
  os.precision(2);
  os << std::scientific << v;
  return os.str();
}

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

Matrix2 rot(double a) {
  Matrix2 r;
  r << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
  return r;
}

// Every scenario a preset evaluates, capped at the desk horizon.
std::vector<std::pair<std::string, ScenarioConfig>> preset_scenarios() {
  std::vector<std::pair<std::string, ScenarioConfig>> out;
  for (const auto& p : presets()) {
    if (p.kind == PresetKind::kPhase) continue;
    std::vector<std::pair<std::string, ScenarioSpec>> specs;
    if (p.config.sweep) {
      for (double v : p.config.sweep->values) {
        specs.emplace_back(p.name + "@" + format_number(v), apply_axis(p.config.scenario, p.config.sweep->axis, v));
      }
    } else {
      specs.emplace_back(p.name, p.config.scenario);
    }
    for (auto& [name, spec] : specs) {
      spec.L_max = std::min(spec.L_max, kDeskL);
      out.emplace_back(name, spec.to_scenario());
    }
  }
  return out;
}

class Suite {
 public:
  void add(std::string module, std::string name, const std::function<std::pair<bool, std::string>()>& fn) {
    CheckItem item{std::move(module), std::move(name), false, {}};
    try {
      auto [ok, detail] = fn();
      item.pass = ok;
      item.detail = std::move(detail);
    } catch (const std::exception& e) {
      item.pass = false;
      item.detail = std::string("threw: ") + e.what();
    }
    items.push_back(std::move(item));
  }
  std::vector<CheckItem> items;
};

void gstate_checks(Suite& s) {
  std::vector<CovMatrix> states;
  for (double n : {0.0, 0.5, 2.0}) {
    for (double r : {0.0, 0.3, 1.0}) {
      for (double phi : {0.0, 1.0, 3.0}) states.push_back(single_mode_cov(SingleModeSpec(n, r, phi)));
    }
  }
  for (double xi : {0.0, 0.5, 1.0, 2.0}) {
    states.push_back(tmsv_cov(xi));
    states.push_back(squeezed_vac_cov(xi, 0.7));
    states.push_back(thermal_cov(xi));
  }
  states.push_back(vacuum_cov(3));

  s.add("gstate", "constructors are physical", [&] {
    double worst = INFINITY;
    for (const auto& c : states) worst = std::min(worst, c.min_physical_eigenvalue());
    return std::pair{worst >= -1e-9, "min eig " + sci(worst)};
  });
  s.add("gstate", "pure constructors have zero entropy", [] {
    double worst = 0.0;
    for (double xi : {0.0, 0.5, 1.0, 2.0}) {
      worst = std::max({worst, std::abs(entropy(tmsv_cov(xi))), std::abs(entropy(squeezed_vac_cov(xi, 1.3)))});
    }
    worst = std::max(worst, std::abs(entropy(vacuum_cov(4))));
    return std::pair{worst < 1e-10, "max |S| " + sci(worst)};
  });
  s.add("gstate", "symplectic spectrum is rotation invariant", [] {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
      const CovMatrix c = single_mode_cov(SingleModeSpec(2.0 * u(rng), u(rng), 2.0 * kPi * u(rng)));
      const Matrix2 r = rot(2.0 * kPi * u(rng));
      const Matrix2 turned = r * c.data() * r.transpose();
      const CovMatrix c2(Matrix(0.5 * (turned + turned.transpose())));
      worst = std::max(worst, std::abs(symplectic_eigenvalues(c)[0] - symplectic_eigenvalues(c2)[0]));
    }
    return std::pair{worst < 1e-10, "max diff " + sci(worst)};
  });
  s.add("gstate", "entropy is additive over direct sums", [&] {
    double worst = 0.0;
    for (std::size_t i = 0; i + 1 < states.size(); i += 2) {
      const double joint = entropy(direct_sum(states[i], states[i + 1]));
      worst = std::max(worst, std::abs(joint - entropy(states[i]) - entropy(states[i + 1])));
    }
    return std::pair{worst < 1e-10, "max diff " + sci(worst)};
  });
  s.add("gstate", "single_mode_cov equals rotated squeezed thermal form", [] {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int k = 0; k < 10; ++k) {
      const double n = 2.0 * u(rng), r = u(rng), phi = 2.0 * kPi * u(rng);
      const Matrix2 d = Eigen::Vector2d(std::exp(2 * r), std::exp(-2 * r)).asDiagonal();
      const Matrix2 ref = (n + 0.5) * rot(phi / 2) * d * rot(phi / 2).transpose();
      worst = std::max(worst, max_abs(single_mode_cov(SingleModeSpec(n, r, phi)).data() - ref));
    }
    return std::pair{worst < 1e-12, "max diff " + sci(worst)};
  });
}

void optics_checks(Suite& s) {
  s.add("optics", "scatter matrices are orthogonal", [] {
    double worst = 0.0;
    auto sweep = [&](int steps, int points) {
      for (int a = 0; a < points; ++a) {
        for (int b = 0; b < points; ++b) {
          for (int c = 0; c < points; ++c) {
            const double step = 0.5 / (points - 1);
            const CollisionAngles ang{BSAngle::from_pi(a * step), BSAngle::from_pi(b * step),
                                      BSAngle::from_pi(c * step)};
            worst = std::max(worst, total_scatter(steps, ang).orthogonality_error());
            if (steps >= 2) {
              worst = std::max(worst, channel_scatter(steps, ang.se, ang.ee, Channel::kC).orthogonality_error());
              worst = std::max(worst, channel_scatter(steps, ang.se, ang.ee, Channel::kB).orthogonality_error());
            }
          }
        }
      }
    };
    for (int steps : {1, 2, 3, 7}) sweep(steps, 11);
    sweep(kDeskL, 5);
    return std::pair{worst < 1e-10, "max |SS^T - I| " + sci(worst)};
  });
  s.add("optics", "row of mode A is a unit vector", [] {
    double worst = 0.0;
    const CollisionAngles ang{BSAngle::from_pi(0.4), BSAngle::from_pi(0.35), BSAngle::from_pi(0.2)};
    for (int steps = 1; steps <= kDeskL; steps += 7) {
      const Matrix& m = total_scatter(steps, ang).data;
      Eigen::RowVectorXd e = Eigen::RowVectorXd::Zero(m.cols());
      e(steps) = 1.0;
      worst = std::max({worst, max_abs(m.row(steps) - e), max_abs(m.col(steps).transpose() - e)});
    }
    return std::pair{worst == 0.0, "max deviation " + sci(worst)};
  });
  s.add("optics", "lift is functorial and symplectic", [] {
    const int steps = 6;
    const CollisionAngles a1{BSAngle::from_pi(0.4), BSAngle::from_pi(0.35), BSAngle::from_pi(0.35)};
    const CollisionAngles a2{BSAngle::from_pi(0.1), BSAngle::from_pi(0.25), BSAngle::from_pi(0.05)};
    const ScatterMatrix s1 = total_scatter(steps, a1), s2 = total_scatter(steps, a2);
    const ScatterMatrix prod{s1.data * s2.data, steps};
    const double functor = max_abs(lift(prod) - lift(s1) * lift(s2));
    const Matrix m = lift(s1);
    const Matrix omega = symplectic_form(2 * steps + 1);
    const double sympl = max_abs(m * omega * m.transpose() - omega);
    return std::pair{functor < 1e-12 && sympl < 1e-10, "functor " + sci(functor) + ", symplectic " + sci(sympl)};
  });
  s.add("optics", "channel B is channel C with reversed modes", [] {
    double worst = 0.0;
    for (int steps : {2, 3, 8, 20}) {
      for (double se : {0.1, 0.25, 0.4}) {
        for (double ee : {0.05, 0.3}) {
          const Matrix c = channel_scatter(steps, BSAngle::from_pi(se), BSAngle::from_pi(ee), Channel::kC).data;
          const Matrix b = channel_scatter(steps, BSAngle::from_pi(se), BSAngle::from_pi(ee), Channel::kB).data;
          worst = std::max(worst, max_abs(b - c.reverse()));
        }
      }
    }
    return std::pair{worst < 1e-15, "max diff " + sci(worst)};
  });
}

void evolve_checks(Suite& s, const std::vector<std::pair<std::string, ScenarioConfig>>& scenarios) {
  s.add("evolve", "global covariance symmetric and physical", [&] {
    double asym = 0.0, worst = INFINITY;
    std::string where;
    for (const auto& [name, cfg] : scenarios) {
      for (int steps = 1; steps <= cfg.L_max; steps += (steps < 10 ? 1 : 8)) {
        const CovMatrix g = global_cov(cfg, steps);
        asym = std::max(asym, max_abs(g.data() - g.data().transpose()));
        const double e = g.min_physical_eigenvalue();
        if (e < worst) {
          worst = e;
          where = name + " L=" + std::to_string(steps);
        }
      }
    }
    return std::pair{asym < 1e-12 && worst >= -1e-9, "asymmetry " + sci(asym) + ", min eig " + sci(worst) + " at " + where};
  });
  s.add("evolve", "pure inputs stay pure", [] {
    ScenarioConfig cfg = find_preset("fig3a-sq-same").config.scenario.to_scenario();
    double worst = 0.0;
    for (int steps : {5, kDeskL}) {
      for (double nu : symplectic_eigenvalues(global_cov(cfg, steps))) worst = std::max(worst, std::abs(nu - 0.5));
    }
    return std::pair{worst < 1e-9, "max |nu - 1/2| " + sci(worst)};
  });
  s.add("evolve", "sigma_A is constant", [&] {
    double worst = 0.0;
    for (const auto& [name, cfg] : scenarios) {
      const Matrix2 first = system_cov(cfg, 1).block(0, 0);
      for (int steps = 2; steps <= cfg.L_max; steps += 6) {
        worst = std::max(worst, max_abs(system_cov(cfg, steps).block(0, 0) - first));
      }
    }
    return std::pair{worst < 1e-12, "max drift " + sci(worst)};
  });
  s.add("evolve", "closed system ignores the environment", [] {
    ScenarioConfig base = find_preset("closed").config.scenario.to_scenario();
    double worst = 0.0;
    for (int steps : {2, 9, 30}) {
      const Matrix ref = system_cov(base, steps).data();
      for (const EnvPattern& env : {EnvPattern{ThermalEnv{2.0}}, EnvPattern{SqueezedSameEnv{0.8, 1.0}},
                                    EnvPattern{SqueezedAlternativeEnv{0.4}}}) {
        ScenarioConfig cfg = base;
        cfg.env = env;
        worst = std::max(worst, max_abs(system_cov(cfg, steps).data() - ref));
      }
    }
    return std::pair{worst < 1e-12, "max diff " + sci(worst)};
  });
}

void info_checks(Suite& s, const std::vector<std::pair<std::string, ScenarioConfig>>& scenarios) {
  s.add("info", "mutual informations are non-negative", [&] {
    double worst = INFINITY;
    std::vector<std::vector<InfoRecord>> all(scenarios.size());
    parallel_for(scenarios.size(), worker_count(), [&](std::size_t k) { all[k] = info_series(scenarios[k].second); });
    for (const auto& series : all) {
      for (const auto& r : series) worst = std::min({worst, r.I2_AB, r.I2_AC, r.I2_ABC});
    }
    return std::pair{worst >= -1e-9, "min I2 " + sci(worst) + " over " + std::to_string(scenarios.size()) + " series"};
  });
  s.add("info", "closed system is pure and unscrambled", [] {
    double worst = 0.0;
    for (const auto& r : info_series(find_preset("closed").config.scenario.to_scenario())) {
      worst = std::max({worst, std::abs(r.S_ABC), std::abs(r.S_AB - r.S_C), std::abs(r.S_AC - r.S_B), std::abs(r.I3)});
    }
    return std::pair{worst < 1e-9, "max residual " + sci(worst)};
  });
  s.add("info", "tmi is invariant under local rotations", [] {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 2.0 * kPi);
    const ScenarioConfig cfg = find_preset("fig3a-sq-alt").config.scenario.to_scenario();
    double worst = 0.0;
    for (int steps : {3, 12}) {
      const CovMatrix sigma = system_cov(cfg, steps);
      const double ref = tmi(sigma);
      for (int k = 0; k < 6; ++k) {
        Matrix local = Matrix::Identity(6, 6);
        local.block<2, 2>(2 * (k % 3), 2 * (k % 3)) = rot(u(rng));
        const Matrix turned = local * sigma.data() * local.transpose();
        worst = std::max(worst, std::abs(tmi(CovMatrix(Matrix(0.5 * (turned + turned.transpose())))) - ref));
      }
    }
    return std::pair{worst < 1e-9, "max diff " + sci(worst)};
  });
}

void nonmarkov_checks(Suite& s) {
  const SingleModeSpec vac = SingleModeSpec::vacuum();
  s.add("nonmarkov", "Lambda is Hermitian with real spectrum", [&] {
    double herm = 0.0, imag = 0.0;
    for (double se : {0.15, 0.25, 0.35}) {
      for (double ee : {0.1, 0.2, 0.45}) {
        const SingleModeSpec env(0.5, 0.3, 1.0);
        for (int steps = 3; steps <= 20; ++steps) {
          const auto now = channel_map(steps, BSAngle::from_pi(se), BSAngle::from_pi(ee), env);
          const auto before = channel_map(steps - 1, BSAngle::from_pi(se), BSAngle::from_pi(ee), env);
          const auto lam = lambda_matrix(now, before);
          if (!lam) continue;
          herm = std::max(herm, (lam->matrix - lam->matrix.adjoint()).cwiseAbs().maxCoeff());
          const Eigen::ComplexEigenSolver<Eigen::Matrix2cd> es(lam->matrix);
          imag = std::max(imag, es.eigenvalues().imag().cwiseAbs().maxCoeff());
        }
      }
    }
    return std::pair{herm < 1e-12 && imag < 1e-10, "hermiticity " + sci(herm) + ", imag " + sci(imag)};
  });
  s.add("nonmarkov", "D(L) is non-decreasing", [&] {
    bool ok = true;
    for (double se : {0.1, 0.25}) {
      for (double ee : {0.1, 0.2, 0.3}) {
        const auto rep = negativity(kDeskL, BSAngle::from_pi(se), BSAngle::from_pi(ee), vac);
        double prev = 0.0;
        for (const auto& st : rep.steps) {
          ok = ok && st.contribution >= 0.0 && st.cumulative >= prev;
          prev = st.cumulative;
        }
      }
    }
    return std::pair{ok, std::string()};
  });
  s.add("nonmarkov", "channel map matches direct propagation", [] {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    const int steps = 6;
    std::vector<SingleModeSpec> envs;
    for (int j = 1; j < steps; ++j) envs.emplace_back(0.2 * j, 0.1 * j, 0.5 * j);
    for (double se : {0.2, 0.35}) {
      for (double ee : {0.15, 0.35}) {
        for (Channel ch : {Channel::kB, Channel::kC}) {
          const auto map = channel_map(steps, BSAngle::from_pi(se), BSAngle::from_pi(ee), envs, ch);
          for (int k = 0; k < 5; ++k) {
            const Matrix2 in = single_mode_cov(SingleModeSpec(0.0, u(rng), 2.0 * kPi * u(rng))).data();
            const Matrix2 direct = propagate_channel(steps, BSAngle::from_pi(se), BSAngle::from_pi(ee), envs, in, ch);
            worst = std::max(worst, max_abs(map.apply(in) - direct));
          }
        }
      }
    }
    return std::pair{worst < 1e-10, "max diff " + sci(worst)};
  });
  s.add("nonmarkov", "channels B and C give the same D", [] {
    double worst = 0.0;
    const SingleModeSpec env(1.0, 0.2, 0.4);
    for (double se : {0.1, 0.25, 0.4}) {
      for (double ee : {0.1, 0.2, 0.35}) {
        const double b = negativity(kDeskL, BSAngle::from_pi(se), BSAngle::from_pi(ee), env, Channel::kB).total;
        const double c = negativity(kDeskL, BSAngle::from_pi(se), BSAngle::from_pi(ee), env, Channel::kC).total;
        worst = std::max(worst, std::abs(b - c));
      }
    }
    return std::pair{worst < 1e-12, "max diff " + sci(worst)};
  });
  s.add("nonmarkov", "Markovian region does not depend on the environment", [] {
    std::vector<double> grid;
    for (int i = 0; i <= 10; ++i) grid.push_back(0.05 * i * kPi);
    const unsigned w = worker_count();
    const PhaseDiagram ref = phase_diagram(grid, grid, kDeskL, SingleModeSpec::vacuum(), w);
    int mismatches = 0;
    for (const SingleModeSpec& env : {SingleModeSpec::thermal(1.0), SingleModeSpec::squeezed(0.5, 0.0)}) {
      const PhaseDiagram pd = phase_diagram(grid, grid, kDeskL, env, w);
      for (int i = 0; i < 11; ++i) {
        for (int j = 0; j < 11; ++j) mismatches += pd.markovian(i, j) != ref.markovian(i, j);
      }
    }
    return std::pair{mismatches == 0, std::to_string(mismatches) + " mismatches on 11x11"};
  });
}

void cli_checks(Suite& s) {
  s.add("cli", "configs round-trip through the canonical form", [] {
    int bad = 0;
    for (const auto& p : presets()) {
      const std::string canon = canonical_json(p.config);
      const RunConfig back = parse_config(canon);
      bad += !(back == p.config) || canonical_json(back) != canon || config_digest(back) != config_digest(p.config);
    }
    return std::pair{bad == 0, std::to_string(presets().size()) + " presets, " + std::to_string(bad) + " mismatches"};
  });
  s.add("cli", "outputs are deterministic", [] {
    const ScenarioConfig cfg = find_preset("fig3a-sq-alt").config.scenario.to_scenario();
    const bool series = series_table(info_series(cfg, 1)).to_csv() == series_table(info_series(cfg, 3)).to_csv();
    RunConfig sweep = find_preset("fig5a").config;
    sweep.scenario.L_max = 12;
    const auto a = run_sweep(sweep, 1), b = run_sweep(sweep, 3);
    bool same = a.size() == b.size();
    for (std::size_t k = 0; same && k < a.size(); ++k) {
      same = series_table(a[k].series).to_csv() == series_table(b[k].series).to_csv();
    }
    RunConfig phase = find_preset("fig2").config;
    phase.phase = PhaseSpec{GridSpec{0.0, 0.5, 6}, GridSpec{0.0, 0.5, 6}};
    phase.scenario.L_max = 20;
    const bool grid = phase_table(phase, 1).to_csv() == phase_table(phase, 3).to_csv();
    return std::pair{series && same && grid, "worker counts 1 and 3"};
  });
}

void user_checks(Suite& s, const RunConfig& user) {
  ScenarioSpec spec = user.scenario;
  spec.L_max = std::min(spec.L_max, kDeskL);
  std::vector<ScenarioSpec> specs;
  if (user.sweep) {
    for (double v : user.sweep->values) specs.push_back(apply_axis(spec, user.sweep->axis, v));
  } else {
    specs.push_back(spec);
  }
  s.add("config", "scenario is physical with non-negative mutual information", [&] {
    double worst_eig = INFINITY, worst_i2 = INFINITY;
    for (const auto& sp : specs) {
      const ScenarioConfig cfg = sp.to_scenario();
      for (int steps = 1; steps <= cfg.L_max; steps += (steps < 10 ? 1 : 8)) {
        worst_eig = std::min(worst_eig, global_cov(cfg, steps).min_physical_eigenvalue());
      }
      for (const auto& r : info_series(cfg, worker_count())) worst_i2 = std::min({worst_i2, r.I2_AB, r.I2_AC, r.I2_ABC});
    }
    return std::pair{worst_eig >= -1e-9 && worst_i2 >= -1e-9, "min eig " + sci(worst_eig) + ", min I2 " + sci(worst_i2)};
  });
}

}  // namespace

std::vector<CheckItem> run_checks(const std::optional<RunConfig>& user) {
  Suite s;
  if (user) user_checks(s, *user);
  const auto scenarios = preset_scenarios();
  gstate_checks(s);
  optics_checks(s);
  evolve_checks(s, scenarios);
  info_checks(s, scenarios);
  nonmarkov_checks(s);
  cli_checks(s);
  return s.items;
}

std::string appendix_table() {
  Table t;
  t.header = {"preset", "L", "corrected_max_dev", "literal_max_dev", "sigma_A_dev"};
  for (const char* name : {"fig3a-vacuum", "fig3a-sq-same", "fig3a-sq-alt", "closed"}) {
    const ScenarioConfig cfg = find_preset(name).config.scenario.to_scenario();
    for (int steps : {1, 2, 10, kDeskL}) {
      const AppendixReport c = appendix_cov(cfg, steps, AppendixVariant::kCorrected);
      const AppendixReport l = appendix_cov(cfg, steps, AppendixVariant::kLiteral);
      t.add_row({std::string(name), static_cast<long long>(steps), c.max_deviation, l.max_deviation,
                 std::max(c.sigma_a_deviation, l.sigma_a_deviation)});
    }
  }
  return t.to_csv();
}

}  // namespace gcm::app
