#include "cli/commands.hpp"
#include "cli/config.hpp"
#include "cli/csv.hpp"
#include "cli/presets.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <sstream>

namespace fs = std::filesystem;
using namespace rydchip;
using namespace rydchip::cli;

namespace {

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    root_ = fs::temp_directory_path() /
            ("rydchip_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(root_);
    fs::create_directories(root_);
  }
  void TearDown() override { fs::remove_all(root_); }

  std::string write_config(const std::string& name, const std::string& text) {
    const fs::path p = root_ / name;
    std::ofstream(p) << text;
    return p.string();
  }

  int run(std::vector<std::string> args) {
    args.insert(args.begin(), "rydchip");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    return cli::run(static_cast<int>(argv.size()), argv.data());
  }

  std::string out(const std::string& name) const { return (root_ / name).string(); }

  fs::path root_;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(slurp(p));
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

nlohmann::json manifest(const fs::path& dir) { return nlohmann::json::parse(slurp(dir / "manifest.json")); }

const char* kField = R"(
field.disk_radius = 83
field.charge_density = 6.45e-20
field.F0 = 37
field.zeta = 70
field.F_bias = -30
)";

}  // namespace

TEST(Config, ParsesCommentsAndWhitespace) {
  const Config c = Config::parse("# header\n  a.b = 1.5   # trailing\n\nname=hello\nlist = 1, 2,3\n", "t");
  EXPECT_EQ(c.number("a.b"), 1.5);
  EXPECT_EQ(c.text("name"), "hello");
  EXPECT_EQ(c.numbers("list"), (std::vector<double>{1, 2, 3}));
  EXPECT_EQ(c.unused_keys().size(), 0u);
}

TEST(Config, ReportsUnusedKeys) {
  const Config c = Config::parse("a = 1\nb = 2\n", "t");
  c.number("a");
  EXPECT_EQ(c.unused_keys(), std::vector<std::string>{"b"});
}

TEST(Config, MalformedInputs) {
  for (const char* text : {"novalue\n", "a = 1\na = 2\n", "bad key = 1\n", "a =\n", ".a = 1\n"}) {
    try {
      Config::parse(text, "t");
      ADD_FAILURE() << text;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::Config) << text;
    }
  }
}

TEST(Config, TypedLookupErrorsNameTheKey) {
  const Config c = Config::parse("x = abc\nn = 1.5\n", "src");
  try {
    c.number("x");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("'x'"), std::string::npos);
  }
  EXPECT_THROW(c.integer("n"), Error);
  try {
    c.number("field.zeta");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Config);
    EXPECT_NE(std::string(e.what()).find("zeta"), std::string::npos);
  }
}

TEST(Config, FieldKeysWithOrWithoutNamespace) {
  const Config dotted = Config::parse(kField, "t");
  const Config bare = Config::parse("disk_radius = 83\ncharge_density = 6.45e-20\nF0 = 37\nzeta = 70\nF_bias = -30\n", "t");
  const FieldConfig a = read_field_config(dotted), b = read_field_config(bare);
  EXPECT_EQ(a.zeta, b.zeta);
  EXPECT_EQ(a.F_bias, -30.0);
}

TEST(Config, GateDetuningAuto) {
  const Config c = Config::parse("gate.g = 1\ngate.kappa = 1e-3\ngate.gamma = 3e-4\ngate.delta_c = auto\n", "t");
  EXPECT_TRUE(gate_detuning_is_auto(c));
  const CavityGateConfig g = read_gate_config(c);
  EXPECT_EQ(g.kappa, 1e-3);
}

TEST(Presets, BundledConfigs) {
  for (const char* name : {"fig1b", "fig2b", "fig3b", "fig3c", "fig4"}) {
    ASSERT_TRUE(find_preset(name).has_value()) << name;
    EXPECT_NO_THROW(Config::load(name));
  }
  EXPECT_FALSE(find_preset("nope").has_value());
  EXPECT_THROW(Config::load("/nonexistent/file.cfg"), Error);
}

TEST(Csv, RoundTripFormatting) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-30.0, 30.0);
  for (int i = 0; i < 10000; ++i) {
    const double v = std::ldexp(u(rng), static_cast<int>(u(rng)));
    const std::string s = format_number(v);
    double back = 0.0;
    std::from_chars(s.data(), s.data() + s.size(), back);
    ASSERT_EQ(back, v) << s;
    ASSERT_EQ(s.find(','), std::string::npos);
  }
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(1e-20), "1e-20");
}

TEST_F(CliTest, CsvRowWidthChecked) {
  CsvWriter w(out("a.csv"), {"x", "y"});
  EXPECT_THROW(w.row({1.0}), Error);
  w.row({1.0, std::string("z")});
  w.close();
  EXPECT_EQ(slurp(out("a.csv")), "x,y\n1,z\n");
}

TEST_F(CliTest, MissingKeyExitsWithConfigCode) {
  const std::string cfg = write_config("f.cfg", "field.disk_radius = 83\nfield.charge_density = 6.45e-20\n"
                                                 "field.F0 = 37\nfield.F_bias = -30\n");
  ::testing::internal::CaptureStderr();
  const int rc = run({"field", "--config", cfg, "--out", out("o")});
  const std::string err = ::testing::internal::GetCapturedStderr();
  EXPECT_EQ(rc, exit_code::kConfig);
  EXPECT_NE(err.find("zeta"), std::string::npos) << err;
  const auto m = manifest(out("o"));
  EXPECT_EQ(m["status"], "incomplete");
  EXPECT_EQ(m["exit_code"], 2);
}

TEST_F(CliTest, ParseErrorsAndHelp) {
  EXPECT_EQ(run({"field", "--bogus"}), exit_code::kConfig);
  EXPECT_EQ(run({"field"}), exit_code::kConfig);
  ::testing::internal::CaptureStdout();
  const int rc = run({"--help"});
  ::testing::internal::GetCapturedStdout();
  EXPECT_EQ(rc, 0);
}

TEST_F(CliTest, GridOnDiskIsDomainError) {
  const std::string cfg = write_config(
      "f.cfg", std::string(kField) + "grid.x_lo = -10\ngrid.x_hi = 10\ngrid.n_x = 3\ngrid.z_lo = 0\n"
                                     "grid.z_hi = 10\ngrid.n_z = 3\n");
  ::testing::internal::CaptureStderr();
  EXPECT_EQ(run({"field", "--config", cfg, "--out", out("o")}), exit_code::kDomain);
  ::testing::internal::GetCapturedStderr();
}

TEST_F(CliTest, NoTrapAnywhereInScan) {
  const std::string cfg = write_config(
      "t.cfg", std::string(kField) + "pair.d_main = 400\npair.d_aux = -400\npair.detuning = 1.6\npair.rabi = 30\n"
                                     "scan.lo = -30\nscan.hi = -24\nscan.n = 4\n");
  ::testing::internal::CaptureStderr();
  EXPECT_EQ(run({"trap", "--config", cfg, "--out", out("o")}), exit_code::kNoTrap);
  ::testing::internal::GetCapturedStderr();
}

TEST_F(CliTest, CutoffAndOptimizerCodes) {
  const std::string cut = write_config(
      "c.cfg", "gate.g = 1\ngate.kappa = 1e-3\ngate.gamma = 3e-4\ngate.n_th = 0.39\ngate.n_max = 4\n"
               "gate.delta_c = 20\ngate.trajectories = 10\ngate.seed = 1\ngate.samples = 5\ngate.t_end_over_ttr = 1\n");
  const std::string unb = write_config(
      "u.cfg", "gate.g = 1\ngate.kappa = 1e-3\ngate.gamma = 0\ngate.nth_list = 1\n");
  ::testing::internal::CaptureStderr();
  EXPECT_EQ(run({"gate", "dynamics", "--config", cut, "--out", out("c")}), exit_code::kCutoff);
  EXPECT_EQ(run({"gate", "detuning-sweep", "--config", unb, "--out", out("u")}), exit_code::kOptimizer);
  ::testing::internal::GetCapturedStderr();
}

TEST_F(CliTest, TrapScanSymmetricAndRerunIdentical) {
  ASSERT_EQ(run({"trap", "--config", "fig2b", "--out", out("a")}), 0);
  ASSERT_EQ(run({"trap", "--config", "fig2b", "--out", out("b")}), 0);
  EXPECT_EQ(slurp(out("a") + "/trap_scan.csv"), slurp(out("b") + "/trap_scan.csv"));

  const auto rows = read_csv(out("a") + "/trap_scan.csv");
  ASSERT_EQ(rows[0][0], "F_bias_Vcm");
  ASSERT_EQ(rows.size(), 62u);
  for (size_t i = 1; i < rows.size(); ++i) EXPECT_EQ(rows[i][1], rows[i][2]);
  EXPECT_NEAR(std::stod(rows[1][1]), 10.2, 0.3);
  EXPECT_NEAR(std::stod(rows.back()[1]), 24.7, 0.5);

  const auto m = manifest(out("a"));
  EXPECT_EQ(m["status"], "complete");
  EXPECT_EQ(m["command"], "trap");
  EXPECT_FALSE(m["outputs"].empty());
  EXPECT_TRUE(m.contains("wall_time_s"));
}

TEST_F(CliTest, ColocationReport) {
  ASSERT_EQ(run({"trap", "--config", "colocation_pair1", "--out", out("a")}), 0);
  const auto rows = read_csv(out("a") + "/colocation.csv");
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_GE(std::stod(rows[1][7]), 0.999);  // franck_condon
}

TEST_F(CliTest, FieldMapMinimumNearCompensation) {
  ASSERT_EQ(run({"field", "--config", "fig1b", "--out", out("a")}), 0);
  const auto rows = read_csv(out("a") + "/field_map.csv");
  ASSERT_EQ(rows[0], (std::vector<std::string>{"x_um", "z_um", "Fx", "Fz", "Fmag", "gradFmag_x", "gradFmag_z"}));
  size_t best = 1;
  for (size_t i = 1; i < rows.size(); ++i) {
    if (std::stod(rows[i][4]) < std::stod(rows[best][4])) best = i;
  }
  EXPECT_LT(std::hypot(std::stod(rows[best][0]), std::stod(rows[best][1]) - 14.7), 2.0);
}

TEST_F(CliTest, ExponentialColumnWithoutBiasIsMonotone) {
  const std::string cfg = write_config("e.cfg", "field.disk_radius = 83\nfield.charge_density = 6.45e-20\n"
                                                 "field.F0 = 37\nfield.zeta = 70\n"
                                                 "grid.x_lo = 0\ngrid.x_hi = 0\ngrid.n_x = 1\n"
                                                 "grid.z_lo = 1\ngrid.z_hi = 100\ngrid.n_z = 40\n");
  ASSERT_EQ(run({"field", "--config", cfg, "--model", "exponential", "--bias", "0", "--out", out("a")}), 0);
  const auto rows = read_csv(out("a") + "/field_map.csv");
  ASSERT_EQ(rows.size(), 41u);
  for (size_t i = 2; i < rows.size(); ++i) EXPECT_LT(std::stod(rows[i][4]), std::stod(rows[i - 1][4]));
}

TEST_F(CliTest, ClosedGateDynamics) {
  const std::string cfg = write_config(
      "g.cfg", "gate.g = 1\ngate.kappa = 0\ngate.gamma = 0\ngate.n_th = 0\ngate.delta_c = 50\n"
               "gate.trajectories = 5\ngate.seed = 3\ngate.samples = 11\ngate.t_end_over_ttr = 1\n");
  ASSERT_EQ(run({"gate", "dynamics", "--config", cfg, "--out", out("a"), "--oracle"}), 0);
  const auto rows = read_csv(out("a") + "/dynamics.csv");
  ASSERT_EQ(rows.size(), 12u);
  EXPECT_EQ(rows[0][0], "t_over_g");
  EXPECT_GE(std::stod(rows.back()[2]), 0.99);      // p01 at t_tr
  EXPECT_NEAR(std::stod(rows.back()[15]), std::stod(rows.back()[2]), 1e-6);  // oracle_p01
  ASSERT_EQ(run({"gate", "dynamics", "--config", cfg, "--out", out("b"), "--oracle"}), 0);
  EXPECT_EQ(slurp(out("a") + "/dynamics.csv"), slurp(out("b") + "/dynamics.csv"));
  EXPECT_EQ(manifest(out("a"))["seed"], 3);
}

TEST_F(CliTest, SweepsWriteDocumentedSchemas) {
  ASSERT_EQ(run({"gate", "detuning-sweep", "--config", "fig3b", "--nth-list", "1", "--out", out("d")}), 0);
  EXPECT_EQ(read_csv(out("d") + "/detuning_sweep.csv")[0],
            (std::vector<std::string>{"n_th", "delta_c_opt_over_g", "t_tr_g", "p01_max"}));
  ASSERT_EQ(run({"gate", "fidelity-sweep", "--config", "fig4", "--nth-list", "1", "--trajectories", "50", "--seed",
                 "9", "--out", out("f")}),
            0);
  const auto rows = read_csv(out("f") + "/fidelity_sweep.csv");
  EXPECT_EQ(rows[0], (std::vector<std::string>{"n_th", "fidelity", "stderr", "M", "seed"}));
  EXPECT_EQ(rows[1][3], "50");
  EXPECT_EQ(rows[1][4], "9");
}
