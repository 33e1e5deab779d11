#pragma once

#include <exception>
#include <iosfwd>
#include <stdexcept>
#include <optional>
#include <string>
#include <vector>

#include "gcm/app/config.hpp"
#include "gcm/app/table.hpp"
#include "gcm/info.hpp"

namespace gcm::app {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitUnphysical = 3;
inline constexpr int kExitIo = 4;

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Unusable input to `plot`: malformed CSV or nothing to draw.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string command;  // evolve | phase | sweep | check | plot
  std::string preset;
  std::string config_path;
  std::string out_dir = ".";
  bool paper_literal_nc = false;
  // plot only
  std::vector<std::string> inputs;
  std::vector<std::string> columns;
  std::string svg_path;
};

/// Runs one command and returns its exit code. Diagnostics go to `err`,
/// progress and reports to `out`.
int run(const Options& opts, std::ostream& out, std::ostream& err);

/// Exit code for an error escaping a command; prints the diagnostic.
/// Errors outside the documented set are rethrown.
int exit_code(const std::exception_ptr& error, std::ostream& err);

// Building blocks shared by the commands, the tests and the acceptance runner.

inline const std::vector<std::string> kSeriesColumns = {"L",    "I2_AB", "I2_AC", "I2_ABC", "I3",   "S_A",
                                                        "S_B",  "S_C",   "S_AB",  "S_AC",   "S_ABC"};
inline const std::vector<std::string> kPhaseColumns = {"theta_se", "theta_ee", "D", "markovian"};
inline const std::vector<std::string> kIndexColumns = {"point",      "value",      "file",         "min_I3",
                                                       "L_min_I3",   "max_abs_I3", "L_half_I2_ABC"};

Table series_table(const std::vector<InfoRecord>& series);

struct SeriesSummary {
  double min_I3 = 0.0;
  int L_min_I3 = 0;
  double max_abs_I3 = 0.0;
  /// First L with I2_ABC below half its L = 1 value (relative margin 1e-9).
  std::optional<int> L_half_I2_ABC;
};

SeriesSummary summarize(const std::vector<InfoRecord>& series);

struct SweepPoint {
  double value = 0.0;
  std::vector<InfoRecord> series;
  SeriesSummary summary;
};

/// One series per axis value, evaluated concurrently on up to `workers`
/// threads (0 = worker_count()). Order follows the axis values.
std::vector<SweepPoint> run_sweep(const RunConfig& cfg, unsigned workers = 0);

/// Phase grid of D over theta_se x theta_ee, row-major in theta_se.
/// Angles in the table are multiples of pi.
Table phase_table(const RunConfig& cfg, unsigned workers = 0);

/// Config for a preset or config file, with --paper-literal-nc applied.
/// Throws ConfigError.
struct Resolved {
  RunConfig config;
  std::string name;    // output stem
  std::string source;  // preset:<name> or the config file name
};
Resolved resolve(const Options& opts);

}  // namespace gcm::app
