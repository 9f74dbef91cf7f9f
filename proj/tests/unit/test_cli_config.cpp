#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "output.hpp"
#include "run_config.hpp"

namespace ringqpe::cli {
namespace {

RunConfig parse(const std::string& text) {
  RunConfig c;
  apply_config_text(c, text);
  return c;
}

std::string field_of(const std::string& text) {
  try {
    RunConfig c = parse(text);
    validate(c);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "";
}

TEST(RunConfig, Defaults) {
  const RunConfig c;
  EXPECT_EQ(c.physics.flux, 0.7);
  EXPECT_EQ(c.times_tr.size(), 3u);
  EXPECT_DOUBLE_EQ(c.times_tr[1], std::sqrt(0.5));
  EXPECT_TRUE(c.wants("csv") && c.wants("json") && c.wants("svg"));
  EXPECT_NO_THROW(validate(c));
}

TEST(RunConfig, ParsesAllSections) {
  const auto c = parse(
      "# comment\n"
      "[physics]\n hbar = 0.5 ; trailing\n flux=-1.25\n"
      "[numerics]\ncutoff = 64\ngrid = 512\ntimes = 0, 0.5 1\nscan_steps = 10,20\n"
      "[output]\ndir = out dir\nformats = json, csv, json\n");
  EXPECT_EQ(c.physics.hbar, 0.5);
  EXPECT_EQ(c.physics.flux, -1.25);
  EXPECT_EQ(*c.cutoff, 64);
  EXPECT_EQ(*c.grid, 512);
  EXPECT_EQ(c.times_tr, (std::vector<double>{0.0, 0.5, 1.0}));
  EXPECT_EQ(c.scan_steps, (std::vector<int>{10, 20}));
  EXPECT_EQ(c.out_dir, "out dir");
  EXPECT_EQ(c.formats, (std::vector<std::string>{"json", "csv"}));
  EXPECT_FALSE(c.wants("svg"));
}

TEST(RunConfig, ErrorsCarryFieldPath) {
  EXPECT_EQ(field_of("[numerics]\ngrd = 3\n"), "numerics.grd");
  EXPECT_EQ(field_of("[plots]\n"), "plots");
  EXPECT_EQ(field_of("[numerics]\ngrid = 1.5\n"), "numerics.grid");
  EXPECT_EQ(field_of("[physics]\nmass = 0\n"), "physics.mass");
  EXPECT_EQ(field_of("[physics]\nflux = abc\n"), "physics.flux");
  EXPECT_EQ(field_of("[physics]\nflux = nan\n"), "physics.flux");
  EXPECT_EQ(field_of("[numerics]\nt_qubits = 21\n"), "numerics.t_qubits");
  EXPECT_EQ(field_of("[output]\nformats = png\n"), "output.formats");
  EXPECT_EQ(field_of("[numerics]\nhbar_values = 1, 1\n"), "numerics.hbar_values");
  EXPECT_EQ(field_of("flux = 1\n"), "line 1");
  EXPECT_EQ(field_of("[physics\n"), "line 1");
}

TEST(RunConfig, GaugeBlockValidation) {
  EXPECT_EQ(field_of("[gauge]\ndim = 2\n"), "gauge");
  EXPECT_EQ(field_of("[gauge]\ndim = 2\nrandom_seed = 1\ncoefficients = 1 2 3 4\n"), "gauge");
  EXPECT_EQ(field_of("[gauge]\ndim = 2\ncoefficients = 1 2 3\n"), "gauge.coefficients");
  EXPECT_EQ(field_of("[gauge]\ndim = 1\nmatrix = 0.7\n"), "gauge.matrix");
  EXPECT_EQ(field_of("[gauge]\nrandom_seed = 1\n"), "gauge.dim");
  EXPECT_EQ(field_of("[gauge]\ndim = 1\nmatrix = 0.7 0\n"), "");
}

TEST(RunConfig, SetFieldOverridesFile) {
  auto c = parse("[physics]\nflux = 0.2\n");
  set_field(c, "physics", "flux", "1.5");
  EXPECT_EQ(c.physics.flux, 1.5);
  EXPECT_THROW(set_field(c, "physics", "spin", "1"), ConfigError);
}

TEST(RunConfig, MissingFile) {
  RunConfig c;
  try {
    apply_config_file(c, "/nonexistent/run.ini");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "config");
  }
}

TEST(Output, NumberFormat) {
  EXPECT_EQ(format_number(0.1), "0.10000000000000001");
  EXPECT_EQ(format_number(-0.0), "0");
  EXPECT_EQ(format_number(1e-5), "1.0000000000000001e-05");
  EXPECT_EQ(format_number(3.0), "3");
  EXPECT_EQ(std::stod(format_number(kPi)), kPi);
}

TEST(Output, CsvRender) {
  const CsvTable t{{"a", "b"}, {{1.0, 0.5}, {-2.0, 0.0}}};
  EXPECT_EQ(t.render(), "a,b\n1,0.5\n-2,0\n");
}

TEST(Output, SvgIsSelfContained) {
  const auto svg = svg_line_plot("t<1>", "x", "y", {{"s&1", "#000000", {0.0, 1.0}, {0.0, 2.0}}});
  EXPECT_NE(svg.find("viewBox=\"0 0 800 500\""), std::string::npos);
  EXPECT_NE(svg.find("<polyline"), std::string::npos);
  EXPECT_NE(svg.find("t&lt;1&gt;"), std::string::npos);
  EXPECT_NE(svg.find("s&amp;1"), std::string::npos);
  EXPECT_EQ(svg.find("href"), std::string::npos);
  EXPECT_EQ(svg, svg_line_plot("t<1>", "x", "y", {{"s&1", "#000000", {0.0, 1.0}, {0.0, 2.0}}}));
}

TEST(Output, AtomicWriteLeavesNoTemp) {
  const auto root = std::filesystem::temp_directory_path() / "ringqpe_output_test";
  std::filesystem::remove_all(root);
  const OutputDir dir(root / "nested");
  dir.ensure();
  dir.write("x.csv", "a\n1\n");
  dir.write("x.csv", "a\n2\n");
  std::ifstream in(root / "nested" / "x.csv");
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(ss.str(), "a\n2\n");
  int entries = 0;
  for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(root / "nested")) ++entries;
  EXPECT_EQ(entries, 1);
  std::filesystem::remove_all(root);
}

TEST(Output, UnwritableDirectory) {
  const OutputDir dir("/proc/ringqpe_cannot_exist");
  EXPECT_THROW(dir.ensure(), IoError);
}

TEST(RunCommand, ExitCodes) {
  const auto root = std::filesystem::temp_directory_path() / "ringqpe_run_command_test";
  std::filesystem::remove_all(root);
  RunConfig c;
  c.out_dir = root.string();
  c.formats = {"json"};
  std::ostringstream out;
  std::ostringstream err;
  EXPECT_EQ(run_command("qpe", c, out, err), kExitOk);
  EXPECT_EQ(out.str().back(), '\n');
  EXPECT_EQ(out.str().find('\n'), out.str().size() - 1);  // one line

  EXPECT_EQ(run_command("nonabelian", c, out, err), kExitConfig);
  c.grid = 100;
  EXPECT_EQ(run_command("qpe", c, out, err), kExitConfig);
  c.grid.reset();
  c.steps = 9;
  EXPECT_EQ(run_command("pathint propagator", c, out, err), kExitCostGuard);
  c.steps.reset();
  c.regulator = 1e-3;
  c.cutoff = 40;  // tail-limited Poisson check
  EXPECT_EQ(run_command("pathint check-poisson", c, out, err), kExitTolerance);
  c.out_dir = "/proc/ringqpe_cannot_exist";
  EXPECT_EQ(run_command("evolve", c, out, err), kExitIo);
  EXPECT_EQ(run_command("dance", c, out, err), kExitConfig);
  std::filesystem::remove_all(root);
}

TEST(RunCommand, NonHermitianGaugeReportsResidual) {
  RunConfig c;
  c.gauge = GaugeBlock{2, {0, 0, 1, 0, 0, 0, 0, 0}, {}, std::nullopt, 1.0};
  c.out_dir = (std::filesystem::temp_directory_path() / "ringqpe_nonherm").string();
  std::ostringstream out;
  std::ostringstream err;
  EXPECT_EQ(run_command("nonabelian", c, out, err), kExitConfig);
  EXPECT_NE(err.str().find("1.414214"), std::string::npos) << err.str();
}

}  // namespace
}  // namespace ringqpe::cli
