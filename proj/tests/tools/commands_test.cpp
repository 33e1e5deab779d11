#include "gcm/app/commands.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gcm/app/presets.hpp"
#include "gtest/gtest.h"

using namespace gcm::app;
namespace fs = std::filesystem;

namespace {

class CommandTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / ("gcm_cmd_" + std::string(info->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int run_cmd(Options opts) {
    out_.str("");
    err_.str("");
    if (opts.out_dir == ".") opts.out_dir = dir_.string();
    return run(opts, out_, err_);
  }

  std::string read(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
  }

  fs::path write_config(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p, std::ios::binary) << text;
    return p;
  }

  fs::path dir_;
  std::ostringstream out_;
  std::ostringstream err_;
};

Options preset(std::string command, std::string name) {
  Options o;
  o.command = std::move(command);
  o.preset = std::move(name);
  return o;
}

}  // namespace

TEST_F(CommandTest, evolve_writes_series_and_manifest) {
  ASSERT_EQ(run_cmd(preset("evolve", "closed")), kExitOk) << err_.str();
  const std::string csv = read(dir_ / "closed.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "L,I2_AB,I2_AC,I2_ABC,I3,S_A,S_B,S_C,S_AB,S_AC,S_ABC");
  EXPECT_EQ(csv.find('\r'), std::string::npos);
  const Table t = parse_csv(csv);
  ASSERT_EQ(t.rows.size(), 50u);
  for (std::size_t i = 0; i < t.rows.size(); ++i) EXPECT_LT(std::abs(t.number(i, t.column("I3"))), 1e-9);

  const std::string manifest = read(dir_ / "closed.manifest.json");
  EXPECT_NE(manifest.find(config_digest(find_preset("closed").config)), std::string::npos);
  EXPECT_NE(manifest.find("\"closed.csv\""), std::string::npos);
  EXPECT_NE(manifest.find("\"tool_version\""), std::string::npos);
}

TEST_F(CommandTest, evolve_is_byte_deterministic) {
  ASSERT_EQ(run_cmd(preset("evolve", "fig3a-sq-alt")), kExitOk);
  const std::string first = read(dir_ / "fig3a-sq-alt.csv");
  const std::string manifest = read(dir_ / "fig3a-sq-alt.manifest.json");
  ASSERT_EQ(run_cmd(preset("evolve", "fig3a-sq-alt")), kExitOk);
  EXPECT_EQ(read(dir_ / "fig3a-sq-alt.csv"), first);
  EXPECT_EQ(read(dir_ / "fig3a-sq-alt.manifest.json"), manifest);
}

TEST_F(CommandTest, sweep_writes_points_and_index) {
  const fs::path cfg = write_config("ee.json", R"({
  "L_max": 15,
  "theta_se_pi": 0.25,
  "sweep": {"axis": "theta_ee_pi", "values": [0.1, 0.2, 0.3]}
})");
  Options o;
  o.command = "sweep";
  o.config_path = cfg.string();
  ASSERT_EQ(run_cmd(o), kExitOk) << err_.str();
  const Table index = parse_csv(read(dir_ / "ee_index.csv"));
  EXPECT_EQ(index.header, kIndexColumns);
  ASSERT_EQ(index.rows.size(), 3u);
  for (std::size_t k = 0; k < 3; ++k) {
    const std::string file = std::get<std::string>(index.rows[k][index.column("file")]);
    EXPECT_EQ(file, "ee_p" + std::to_string(k) + ".csv");
    const Table series = parse_csv(read(dir_ / file));
    double min_i3 = 0.0;
    for (std::size_t i = 0; i < series.rows.size(); ++i) min_i3 = std::min(min_i3, series.number(i, 4));
    EXPECT_EQ(index.number(k, index.column("min_I3")), min_i3);
  }
}

TEST_F(CommandTest, sweep_output_independent_of_thread_count) {
  const fs::path cfg = write_config("n.json", R"({
  "L_max": 10, "env": {"type": "thermal", "n": 0},
  "sweep": {"axis": "n_E", "values": [0, 0.5, 1, 2]}
})");
  Options o;
  o.command = "sweep";
  o.config_path = cfg.string();
  setenv("GCM_THREADS", "1", 1);
  ASSERT_EQ(run_cmd(o), kExitOk);
  const std::string serial = read(dir_ / "n_index.csv") + read(dir_ / "n_p3.csv");
  setenv("GCM_THREADS", "4", 1);
  ASSERT_EQ(run_cmd(o), kExitOk);
  unsetenv("GCM_THREADS");
  EXPECT_EQ(read(dir_ / "n_index.csv") + read(dir_ / "n_p3.csv"), serial);
}

TEST_F(CommandTest, phase_grid_points) {
  const fs::path cfg = write_config("grid.json", R"({
  "phase": {"theta_se_pi": {"points": 21}, "theta_ee_pi": {"points": 21}}
})");
  Options o;
  o.command = "phase";
  o.config_path = cfg.string();
  ASSERT_EQ(run_cmd(o), kExitOk) << err_.str();
  const Table t = parse_csv(read(dir_ / "grid.csv"));
  EXPECT_EQ(t.header, kPhaseColumns);
  ASSERT_EQ(t.rows.size(), 441u);
  auto at = [&](int i, int j) { return static_cast<std::size_t>(21 * i + j); };
  EXPECT_EQ(t.number(at(14, 14), 0), 0.35);
  EXPECT_EQ(t.number(at(14, 14), 3), 1.0);
  EXPECT_EQ(t.number(at(10, 8), 0), 0.25);
  EXPECT_EQ(t.number(at(10, 8), 1), 0.2);
  EXPECT_EQ(t.number(at(10, 8), 3), 0.0);
  for (int i = 0; i < 21; ++i) EXPECT_EQ(t.number(at(i, 20), 3), 1.0);
}

TEST_F(CommandTest, config_errors_exit_2_with_field) {
  const fs::path bad = write_config("bad.json", "{\n  \"L_max\": 20,\n  \"theta_se_pi\": 0.5001\n}\n");
  Options o;
  o.command = "check";
  o.config_path = bad.string();
  EXPECT_EQ(run_cmd(o), kExitConfig);
  EXPECT_NE(err_.str().find("theta_se_pi"), std::string::npos);
  EXPECT_NE(err_.str().find("line 3"), std::string::npos);

  o.command = "evolve";
  EXPECT_EQ(run_cmd(o), kExitConfig);
  EXPECT_EQ(run_cmd(preset("evolve", "fig3b")), kExitConfig);
  EXPECT_EQ(run_cmd(preset("evolve", "missing")), kExitConfig);
  Options both = preset("evolve", "closed");
  both.config_path = bad.string();
  EXPECT_EQ(run_cmd(both), kExitConfig);
  Options none;
  none.command = "evolve";
  EXPECT_EQ(run_cmd(none), kExitConfig);
}

TEST_F(CommandTest, malformed_thread_count_is_config_error) {
  setenv("GCM_THREADS", "two", 1);
  EXPECT_EQ(run_cmd(preset("evolve", "closed")), kExitConfig);
  unsetenv("GCM_THREADS");
  EXPECT_NE(err_.str().find("GCM_THREADS"), std::string::npos);
}

TEST_F(CommandTest, unwritable_output_exits_4) {
  std::ofstream(dir_ / "file") << "x";
  Options o = preset("evolve", "closed");
  o.out_dir = (dir_ / "file").string();
  EXPECT_EQ(run_cmd(o), kExitIo);
}

TEST(ExitCode, mapping) {
  std::ostringstream err;
  EXPECT_EQ(exit_code(std::make_exception_ptr(gcm::UnphysicalStateError("nu < 1/2")), err), kExitUnphysical);
  EXPECT_EQ(exit_code(std::make_exception_ptr(ConfigError("/x", 2, "bad")), err), kExitConfig);
  EXPECT_EQ(exit_code(std::make_exception_ptr(IoError("disk")), err), kExitIo);
  EXPECT_EQ(exit_code(std::make_exception_ptr(InputError("empty")), err), kExitConfig);
  EXPECT_THROW(exit_code(std::make_exception_ptr(std::logic_error("bug")), err), std::logic_error);
  EXPECT_NE(err.str().find("unphysical covariance"), std::string::npos);
}

TEST_F(CommandTest, paper_literal_nc_changes_only_fig4_config) {
  Options o = preset("sweep", "fig4");
  o.paper_literal_nc = true;
  RunConfig expected = find_preset("fig4").config;
  use_paper_literal_nc(expected);
  const Resolved r = resolve(o);
  EXPECT_EQ(r.config, expected);
  EXPECT_NE(config_digest(r.config), config_digest(find_preset("fig4").config));
}

TEST_F(CommandTest, plot_series_and_phase) {
  for (const char* name : {"fig3a-vacuum", "fig3a-sq-alt", "closed"}) ASSERT_EQ(run_cmd(preset("evolve", name)), 0);
  Options o;
  o.command = "plot";
  o.inputs = {(dir_ / "fig3a-vacuum.csv").string(), (dir_ / "fig3a-sq-alt.csv").string(),
              (dir_ / "closed.csv").string()};
  o.svg_path = (dir_ / "i3.svg").string();
  ASSERT_EQ(run_cmd(o), kExitOk) << err_.str();
  const std::string svg = read(dir_ / "i3.svg");
  std::size_t polylines = 0;
  for (auto p = svg.find("<polyline"); p != std::string::npos; p = svg.find("<polyline", p + 1)) ++polylines;
  EXPECT_EQ(polylines, 3u);
  ASSERT_EQ(run_cmd(o), kExitOk);
  EXPECT_EQ(read(dir_ / "i3.svg"), svg);

  const fs::path grid = write_config("g.json", R"({"L_max": 10, "phase": {"theta_se_pi": {"points": 5}, "theta_ee_pi": {"points": 5}}})");
  Options ph;
  ph.command = "phase";
  ph.config_path = grid.string();
  ASSERT_EQ(run_cmd(ph), kExitOk);
  Options hp;
  hp.command = "plot";
  hp.inputs = {(dir_ / "g.csv").string()};
  ASSERT_EQ(run_cmd(hp), kExitOk) << err_.str();
  EXPECT_TRUE(fs::exists(dir_ / "g.svg"));
}

TEST_F(CommandTest, plot_rejects_empty_and_malformed_csv) {
  Options o;
  o.command = "plot";
  o.inputs = {write_config("empty.csv", "L,I3\n").string()};
  EXPECT_EQ(run_cmd(o), kExitConfig);
  o.inputs = {write_config("ragged.csv", "L,I3\n1,2,3\n").string()};
  EXPECT_EQ(run_cmd(o), kExitConfig);
  o.inputs = {write_config("cols.csv", "L,I2\n1,2\n").string()};
  EXPECT_EQ(run_cmd(o), kExitConfig);
  o.inputs = {(dir_ / "absent.csv").string()};
  EXPECT_EQ(run_cmd(o), kExitIo);
}
