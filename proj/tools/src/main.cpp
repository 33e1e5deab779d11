#include <iostream>

#include "CLI11.hpp"
#include "gcm/app/commands.hpp"
#include "gcm/app/presets.hpp"

int main(int argc, char** argv) {
  gcm::app::Options opts;
  CLI::App app{"Gaussian collision-model simulator"};
  app.set_version_flag("--version", GCM_VERSION);
  app.require_subcommand(1);

  std::string preset_help = "Named preset:";
  for (const auto& p : gcm::app::presets()) {
    preset_help += "\n  " + p.name + " (" + gcm::app::command_for(p.kind) + "): " + p.summary;
  }

  auto add_common = [&](CLI::App* sub, bool scenario) {
    if (scenario) {
      sub->add_option("--preset", opts.preset, preset_help);
      sub->add_option("--config", opts.config_path, "JSON config file");
      sub->add_flag("--paper-literal-nc", opts.paper_literal_nc,
                    "Matched thermal C uses n_C = sinh^2(xi_AB) instead of (cosh(xi_AB) - 1)/2");
    }
    sub->add_option("--out", opts.out_dir, "Output directory")->capture_default_str();
  };

  add_common(app.add_subcommand("evolve", "Information series over L = 1..L_max"), true);
  add_common(app.add_subcommand("phase", "Non-Markovianity over the theta_se x theta_ee grid"), true);
  add_common(app.add_subcommand("sweep", "One series per value of a swept parameter"), true);
  add_common(app.add_subcommand("check", "Invariant suite; optionally validates a config"), true);
  CLI::App* plot = app.add_subcommand("plot", "SVG chart of evolve, sweep or phase CSV files");
  add_common(plot, false);
  plot->add_option("inputs", opts.inputs, "CSV files")->required();
  plot->add_option("--columns", opts.columns, "Columns to draw (default I3)");
  plot->add_option("--svg", opts.svg_path, "Output file (default <out>/<first input>.svg)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : gcm::app::kExitConfig;
  }
  for (const auto* sub : app.get_subcommands()) opts.command = sub->get_name();
  return gcm::app::run(opts, std::cout, std::cerr);
}
