#include "gcm/app/commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "gcm/app/check.hpp"
#include "gcm/app/presets.hpp"
#include "gcm/app/svg.hpp"
#include "gcm/nonmarkov.hpp"
#include "gcm/parallel.hpp"
#include "json.hpp"

#ifndef GCM_VERSION
#define GCM_VERSION "unknown"
#endif

namespace gcm::app {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

void write_file(const fs::path& path, const std::string& body) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  if (ec) throw IoError("cannot create " + path.parent_path().string() + ": " + ec.message());
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot write " + path.string());
  f << body;
  if (!f.flush()) throw IoError("write failed: " + path.string());
}

std::string read_file(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot read " + path.string());
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

void write_manifest(const fs::path& dir, const std::string& name, const std::string& command,
                    const Resolved* resolved, const std::vector<std::string>& outputs, json extra = json::object()) {
  json m = extra;
  m["command"] = command;
  m["tool_version"] = GCM_VERSION;
  m["outputs"] = outputs;
  if (resolved) {
    m["source"] = resolved->source;
    m["config_digest"] = config_digest(resolved->config);
    m["config"] = json::parse(canonical_json(resolved->config));
  }
  write_file(dir / (name + ".manifest.json"), m.dump(2) + "\n");
}

std::vector<double> radians(const std::vector<double>& multiples) {
  std::vector<double> out;
  out.reserve(multiples.size());
  for (double m : multiples) out.push_back(m * std::numbers::pi);
  return out;
}

int cmd_evolve(const Options& opts, std::ostream& out) {
  const Resolved r = resolve(opts);
  const auto series = info_series(r.config.scenario.to_scenario(), worker_count());
  const fs::path dir(opts.out_dir);
  const std::string file = r.name + ".csv";
  write_file(dir / file, series_table(series).to_csv());
  write_manifest(dir, r.name, "evolve", &r, {file});
  const SeriesSummary s = summarize(series);
  out << "wrote " << (dir / file).string() << " (" << series.size() << " steps, min I3 "
      << format_number(s.min_I3) << " at L=" << s.L_min_I3 << ")\n";
  return kExitOk;
}

int cmd_sweep(const Options& opts, std::ostream& out) {
  const Resolved r = resolve(opts);
  const auto points = run_sweep(r.config, worker_count());
  const fs::path dir(opts.out_dir);
  Table index;
  index.header = kIndexColumns;
  std::vector<std::string> outputs;
  const int width = points.size() > 10 ? static_cast<int>(std::to_string(points.size() - 1).size()) : 1;
  for (std::size_t k = 0; k < points.size(); ++k) {
    std::string id = std::to_string(k);
    id.insert(0, static_cast<std::size_t>(width) - id.size(), '0');
    const std::string file = r.name + "_p" + id + ".csv";
    // Per-point files are written in order once every point is done, so the
    // index never refers to a missing file.
    write_file(dir / file, series_table(points[k].series).to_csv());
    outputs.push_back(file);
    const auto& s = points[k].summary;
    index.add_row({static_cast<long long>(k), points[k].value, file, s.min_I3, static_cast<long long>(s.L_min_I3),
                   s.max_abs_I3,
                   s.L_half_I2_ABC ? Cell(static_cast<long long>(*s.L_half_I2_ABC)) : Cell(std::string("none"))});
  }
  const std::string index_file = r.name + "_index.csv";
  write_file(dir / index_file, index.to_csv());
  outputs.push_back(index_file);
  write_manifest(dir, r.name, "sweep", &r, outputs, {{"axis", to_string(r.config.sweep->axis)}});
  out << "wrote " << points.size() << " series and " << (dir / index_file).string() << "\n";
  return kExitOk;
}

int cmd_phase(const Options& opts, std::ostream& out) {
  const Resolved r = resolve(opts);
  const Table t = phase_table(r.config, worker_count());
  const fs::path dir(opts.out_dir);
  const std::string file = r.name + ".csv";
  write_file(dir / file, t.to_csv());
  write_manifest(dir, r.name, "phase", &r, {file});
  long long markovian = 0;
  for (std::size_t i = 0; i < t.rows.size(); ++i) markovian += static_cast<long long>(t.number(i, 3));
  out << "wrote " << (dir / file).string() << " (" << t.rows.size() << " points, " << markovian << " Markovian)\n";
  return kExitOk;
}

int cmd_check(const Options& opts, std::ostream& out) {
  std::optional<RunConfig> user;
  if (!opts.preset.empty() || !opts.config_path.empty()) {
    Options o = opts;
    // Any preset kind may be checked.
    if (!o.preset.empty()) o.command = command_for(find_preset(o.preset).kind);
    else if (o.command == "check") o.command = "";
    user = resolve(o).config;
  }
  const auto items = run_checks(user);
  int failed = 0;
  for (const auto& item : items) {
    out << (item.pass ? "PASS " : "FAIL ") << item.module << ": " << item.name;
    if (!item.detail.empty()) out << " (" << item.detail << ")";
    out << "\n";
    if (!item.pass) ++failed;
  }
  out << "\nappendix comparator (informational)\n" << appendix_table();
  out << "\n" << items.size() - failed << "/" << items.size() << " invariants hold\n";
  return failed == 0 ? kExitOk : kExitCheckFailed;
}

int cmd_plot(const Options& opts, std::ostream& out) {
  if (opts.inputs.empty()) throw InputError("plot needs at least one CSV file");
  std::vector<std::pair<std::string, Table>> tables;
  for (const auto& in : opts.inputs) {
    try {
      tables.emplace_back(fs::path(in).stem().string(), parse_csv(read_file(in)));
    } catch (const CsvError& e) {
      throw InputError(in + ": " + e.what());
    }
  }
  const fs::path svg_path =
      opts.svg_path.empty() ? fs::path(opts.out_dir) / (tables.front().first + ".svg") : fs::path(opts.svg_path);

  std::string svg;
  try {
    if (tables.front().second.header == kPhaseColumns) {
      if (tables.size() != 1) throw InputError("a phase grid is plotted on its own");
      const Table& t = tables.front().second;
      Heatmap map{"theta_ee / pi", "theta_se / pi", {}, {}, {}, "D"};
      for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const double se = t.number(i, 0), ee = t.number(i, 1);
        if (map.y.empty() || map.y.back() != se) map.y.push_back(se);
        if (map.y.size() == 1) map.x.push_back(ee);
        map.z.push_back(t.number(i, 2));
      }
      svg = render_heatmap(map, kMarkovianTol);
    } else {
      const std::vector<std::string> columns = opts.columns.empty() ? std::vector<std::string>{"I3"} : opts.columns;
      LineChart chart;
      chart.x_label = tables.front().second.header.front();
      chart.y_label = columns.size() == 1 ? columns.front() : "value";
      for (const auto& [stem, t] : tables) {
        const std::size_t xc = t.column(chart.x_label);
        for (const auto& col : columns) {
          const std::size_t yc = t.column(col);
          Series s;
          s.label = tables.size() == 1 ? col : (columns.size() == 1 ? stem : stem + ":" + col);
          for (std::size_t i = 0; i < t.rows.size(); ++i) {
            s.x.push_back(t.number(i, xc));
            s.y.push_back(t.number(i, yc));
          }
          chart.series.push_back(std::move(s));
        }
      }
      svg = render_line_chart(chart);
    }
  } catch (const CsvError& e) {
    throw InputError(e.what());
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  write_file(svg_path, svg);
  std::vector<std::string> inputs;
  for (const auto& in : opts.inputs) inputs.push_back(fs::path(in).filename().string());
  write_manifest(svg_path.parent_path().empty() ? fs::path(".") : svg_path.parent_path(), svg_path.stem().string(),
                 "plot", nullptr, {svg_path.filename().string()}, {{"inputs", inputs}});
  out << "wrote " << svg_path.string() << "\n";
  return kExitOk;
}

}  // namespace

Table series_table(const std::vector<InfoRecord>& series) {
  Table t;
  t.header = kSeriesColumns;
  for (const auto& r : series) {
    t.add_row({static_cast<long long>(r.L), r.I2_AB, r.I2_AC, r.I2_ABC, r.I3, r.S_A, r.S_B, r.S_C, r.S_AB, r.S_AC,
               r.S_ABC});
  }
  return t;
}

SeriesSummary summarize(const std::vector<InfoRecord>& series) {
  SeriesSummary s;
  if (series.empty()) return s;
  s.min_I3 = series.front().I3;
  s.L_min_I3 = series.front().L;
  const double half = 0.5 * series.front().I2_ABC * (1.0 - 1e-9);
  for (const auto& r : series) {
    if (r.I3 < s.min_I3) {
      s.min_I3 = r.I3;
      s.L_min_I3 = r.L;
    }
    s.max_abs_I3 = std::max(s.max_abs_I3, std::abs(r.I3));
    if (!s.L_half_I2_ABC && r.I2_ABC < half) s.L_half_I2_ABC = r.L;
  }
  return s;
}

std::vector<SweepPoint> run_sweep(const RunConfig& cfg, unsigned workers) {
  if (!cfg.sweep) throw ConfigError("/sweep", 0, "missing sweep section");
  const auto& values = cfg.sweep->values;
  std::vector<ScenarioConfig> scenarios;
  for (double v : values) scenarios.push_back(apply_axis(cfg.scenario, cfg.sweep->axis, v).to_scenario());
  std::vector<SweepPoint> points(values.size());
  parallel_for(values.size(), workers == 0 ? worker_count() : workers, [&](std::size_t k) {
    points[k].value = values[k];
    points[k].series = info_series(scenarios[k], 1);
    points[k].summary = summarize(points[k].series);
  });
  return points;
}

Table phase_table(const RunConfig& cfg, unsigned workers) {
  const PhaseSpec grid = cfg.phase.value_or(PhaseSpec{});
  const ScenarioConfig sc = cfg.scenario.to_scenario();
  if (!env_is_uniform(sc.env)) throw ConfigError("/env", 0, "phase grids need identical environment modes");
  const auto se = grid.theta_se.values_pi();
  const auto ee = grid.theta_ee.values_pi();
  const PhaseDiagram pd = phase_diagram(radians(se), radians(ee), sc.L_max, env_mode(sc.env, 1),
                                        workers == 0 ? worker_count() : workers);
  Table t;
  t.header = kPhaseColumns;
  for (std::size_t i = 0; i < se.size(); ++i) {
    for (std::size_t j = 0; j < ee.size(); ++j) {
      const auto ii = static_cast<int>(i), jj = static_cast<int>(j);
      t.add_row({se[i], ee[j], pd.d(ii, jj), static_cast<long long>(pd.markovian(ii, jj) ? 1 : 0)});
    }
  }
  return t;
}

Resolved resolve(const Options& opts) {
  if (!opts.preset.empty() && !opts.config_path.empty()) {
    throw ConfigError("--config", 0, "give either --preset or --config, not both");
  }
  Resolved r;
  if (!opts.preset.empty()) {
    const Preset& p = find_preset(opts.preset);
    const std::string cmd = command_for(p.kind);
    if (!opts.command.empty() && cmd != opts.command) {
      throw ConfigError("--preset", 0, "preset " + p.name + " runs with `gcm " + cmd + "`");
    }
    r.config = p.config;
    r.name = p.name;
    r.source = "preset:" + p.name;
  } else if (!opts.config_path.empty()) {
    r.config = load_config(opts.config_path);
    r.name = fs::path(opts.config_path).stem().string();
    r.source = fs::path(opts.config_path).filename().string();
    if (opts.command == "sweep" && !r.config.sweep) throw ConfigError("/sweep", 0, "sweep needs a sweep section");
    if (opts.command == "evolve" && (r.config.sweep || r.config.phase)) {
      throw ConfigError(r.config.sweep ? "/sweep" : "/phase", 0, "evolve runs a single scenario");
    }
    if (opts.command == "phase" && r.config.sweep) throw ConfigError("/sweep", 0, "phase does not take a sweep");
  } else {
    throw ConfigError("--preset", 0, "one of --preset or --config is required");
  }
  if (opts.paper_literal_nc) use_paper_literal_nc(r.config);
  return r;
}

int exit_code(const std::exception_ptr& error, std::ostream& err) {
  try {
    std::rethrow_exception(error);
  } catch (const ConfigError& e) {
    err << e.what() << "\n";
    return kExitConfig;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const UnphysicalStateError& e) {
    err << "unphysical covariance: " << e.what() << "\n";
    return kExitUnphysical;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    // Malformed GCM_THREADS and rejected scenario fields.
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
}

int run(const Options& opts, std::ostream& out, std::ostream& err) {
  try {
    if (opts.command == "evolve") return cmd_evolve(opts, out);
    if (opts.command == "sweep") return cmd_sweep(opts, out);
    if (opts.command == "phase") return cmd_phase(opts, out);
    if (opts.command == "check") return cmd_check(opts, out);
    if (opts.command == "plot") return cmd_plot(opts, out);
    err << "unknown command: " << opts.command << "\n";
    return kExitConfig;
  } catch (const std::exception&) {
    return exit_code(std::current_exception(), err);
  }
}

}  // namespace gcm::app
