#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cavsq/cli/app.hpp"

using namespace cavsq;
using namespace cavsq::cli;

namespace {

struct Invocation {
  int code = -1;
  std::string out, err;
};

Invocation invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "cavsq");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  Invocation r;
  r.code = cli::main(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "cavsq_cli_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

double cell(const CsvTable& t, std::size_t row, const std::string& col) {
  return std::get<double>(t.rows.at(row).at(t.column(col)));
}

}  // namespace

TEST(ParseConfig, TrajArguments) {
  const RunConfig c = parse_config({"traj", "--S", "50", "--kappa", "4", "--Omega", "0.01", "--beta0",
                                    "1", "--x", "1", "--t-grid", "0:1000:11"});
  EXPECT_EQ(c.command, "traj");
  EXPECT_EQ(*c.S, 50.0);
  ASSERT_TRUE(c.t_grid);
  EXPECT_EQ(c.t_grid->values().size(), 11u);
  EXPECT_EQ(c.t_grid->values().back(), 1000.0);
  EXPECT_EQ(c.phase_mode, PhaseMode::Analytic);
  EXPECT_EQ(c.overlap_mode, OverlapMode::On);
}

TEST(ParseConfig, DetuningConsistency) {
  const RunConfig ok = parse_config({"traj", "--kappa", "4", "--x", "1", "--delta", "-2"});
  EXPECT_DOUBLE_EQ(ok.resolved_x(), 1.0);
  EXPECT_THROW(parse_config({"traj", "--kappa", "4", "--x", "1", "--delta", "-3"}), UsageError);
  const RunConfig d = parse_config({"traj", "--kappa", "4", "--delta", "-6"});
  EXPECT_DOUBLE_EQ(d.resolved_x(), 3.0);

  const auto r = invoke({"traj", "--S", "10", "--kappa", "4", "--Omega", "0.01", "--beta0", "1",
                         "--x", "1", "--delta", "-3", "--t-grid", "0"});
  EXPECT_EQ(r.code, kExitUsage);
}

TEST(ParseConfig, Grids) {
  const GridSpec g = parse_grid("g", "1:100:3:log");
  const auto v = g.values();
  ASSERT_EQ(v.size(), 3u);
  EXPECT_EQ(v[0], 1.0);
  EXPECT_NEAR(v[1], 10.0, 1e-12);
  EXPECT_EQ(v[2], 100.0);
  EXPECT_EQ(parse_grid("g", "5").values(), std::vector<double>{5.0});
  EXPECT_THROW(parse_grid("g", "1:0:3"), UsageError);
  EXPECT_THROW(parse_grid("g", "0:1:3:log"), UsageError);
  EXPECT_THROW(parse_grid("g", "0:1:1"), UsageError);
  EXPECT_THROW(parse_grid("g", "0:1:3:cubic"), UsageError);
  EXPECT_THROW(parse_grid("g", "a:b:c"), UsageError);
}

TEST(ParseConfig, Eta) {
  EXPECT_TRUE(std::isinf(parse_config({"scatter"}).eta));
  EXPECT_EQ(parse_config({"scatter", "--eta", "2.5"}).eta, 2.5);
  EXPECT_THROW(parse_config({"scatter", "--eta", "lots"}), UsageError);
}

TEST(Cli, MissingKeyNamesIt) {
  const auto r = invoke({"traj", "--S", "10", "--kappa", "4", "--beta0", "1", "--x", "1",
                         "--t-grid", "0:10:3"});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("Omega"), std::string::npos) << r.err;
}

TEST(Cli, UnknownCommandAndOption) {
  EXPECT_EQ(invoke({"bogus"}).code, kExitUsage);
  EXPECT_EQ(invoke({"traj", "--frobnicate", "1"}).code, kExitUsage);
  EXPECT_EQ(invoke({}).code, kExitUsage);
}

TEST(Cli, HelpExitsZero) {
  const auto r = invoke({"--help"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("traj"), std::string::npos);
}

TEST(Cli, ConfigFileWithOverrides) {
  const auto path = scratch("run.cfg");
  {
    std::ofstream os(path);
    os << "# trajectory setup\n"
       << "S = 10\n"
       << "kappa = 4   # linewidth\n"
       << "Omega = 0.01\n"
       << "beta0 = 1\n"
       << "x = 1\n"
       << "t-grid = 0\n";
  }
  const RunConfig c = parse_config({"traj", "--config", path.string(), "--S", "20"});
  EXPECT_EQ(*c.S, 20.0);
  EXPECT_EQ(*c.kappa, 4.0);
  ASSERT_TRUE(c.t_grid);

  const auto r = invoke({"traj", "--config", path.string(), "--no-meta"});
  EXPECT_EQ(r.code, kExitOk) << r.err;

  const auto bad = scratch("bad.cfg");
  {
    std::ofstream os(bad);
    os << "S = 10\nwarp = 9\n";
  }
  EXPECT_EQ(invoke({"traj", "--config", bad.string()}).code, kExitUsage);
}

TEST(Cli, TrajAtZeroIsCoherentState) {
  const auto r = invoke({"traj", "--S", "50", "--kappa", "4", "--Omega", "0.01", "--beta0", "1",
                         "--x", "1", "--t-grid", "0", "--no-meta"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const CsvTable t = parse_csv(r.out);
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_NEAR(cell(t, 0, "xi2"), 1.0, 1e-12);
  EXPECT_NEAR(cell(t, 0, "Sx"), 50.0, 1e-9);
  EXPECT_NE(r.err.find("minimum xi2"), std::string::npos);
}

TEST(Cli, TrajQxGridMatchesLibrary) {
  const auto r = invoke({"traj", "--S", "30", "--kappa", "4", "--Omega", "0.01", "--beta0", "1",
                         "--x", "1", "--Qx-grid", "1:20:4", "--no-meta"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const CsvTable t = parse_csv(r.out);
  const DriveParams p = DriveParams::from_x(4, 1, 0.01, 1);
  const auto spec = EnsembleSpec::from_spin(30);
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const double xi = evolve(spec, p, cell(t, i, "t")).report.xi2;
    EXPECT_NEAR(cell(t, i, "xi2"), xi, 1e-11 * xi);
  }
  EXPECT_NEAR(cell(t, 3, "Qx"), 20.0, 1e-9);
}

TEST(Csv, RoundTripTwelveDigits) {
  CsvTable t;
  t.header = {"a", "b"};
  t.rows = {{1.0 / 3.0, 2.0e-17}, {123456.789012345, -0.5}};
  const CsvTable back = parse_csv(to_csv(t, "meta"));
  ASSERT_EQ(back.rows.size(), 2u);
  EXPECT_EQ(back.header, t.header);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      const double a = std::get<double>(t.rows[i][j]);
      EXPECT_NEAR(std::get<double>(back.rows[i][j]), a, 1e-11 * std::abs(a));
    }
  EXPECT_EQ(format_number(INFINITY), "inf");
}

TEST(Cli, DeterministicWithoutMeta) {
  const std::vector<std::string> args{"scatter", "--S", "1e4", "--x", "200", "--eta", "2",
                                      "--Qx-grid", "1:100:5:log", "--no-meta"};
  const auto a = invoke(args);
  const auto b = invoke(args);
  ASSERT_EQ(a.code, kExitOk) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out.rfind("Qx,", 0), 0u);

  auto with_meta = args;
  with_meta.pop_back();
  const auto m = invoke(with_meta);
  EXPECT_EQ(m.out.rfind("# cavsq ", 0), 0u);
}

TEST(Cli, ScatterOrderedInCooperativity) {
  std::vector<CsvTable> tables;
  for (const char* eta : {"1", "2", "20", "inf"}) {
    const auto r = invoke({"scatter", "--S", "1e4", "--x", "200", "--eta", eta, "--Qx-grid",
                           "1:200:8:log", "--no-meta"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    tables.push_back(parse_csv(r.out));
  }
  for (std::size_t i = 0; i < tables[0].rows.size(); ++i)
    for (std::size_t k = 1; k < tables.size(); ++k)
      EXPECT_LT(cell(tables[k], i, "xi2_standard"), cell(tables[k - 1], i, "xi2_standard"));
}

TEST(Svg, SinglePolyline) {
  const auto svg = scratch("plot.svg");
  const auto csv = scratch("plot.csv");
  std::filesystem::remove(svg);
  const auto r = invoke({"scatter", "--S", "1e4", "--x", "200", "--eta", "2", "--Qx-grid",
                         "1:100:6:log", "--out", csv.string(), "--svg", svg.string(),
                         "--svg-columns", "Qx,xi2_standard", "--svg-logx", "--svg-logy"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  std::ifstream is(svg);
  const std::string text((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  std::size_t count = 0;
  for (std::size_t p = text.find("<polyline"); p != std::string::npos;
       p = text.find("<polyline", p + 1))
    ++count;
  EXPECT_EQ(count, 1u);
  EXPECT_TRUE(std::filesystem::exists(csv));
}

TEST(Svg, Errors) {
  CsvTable t;
  t.header = {"a", "b"};
  EXPECT_THROW(emit_svg(t, "a", "b", {}), InvalidArgument);
  t.rows = {{1.0, 2.0}, {2.0, 3.0}};
  EXPECT_THROW(emit_svg(t, "a", "zzz", {}), InvalidArgument);
  EXPECT_NO_THROW(emit_svg(t, "a", "b", {}));

  const auto r = invoke({"scatter", "--S", "1e4", "--x", "200", "--Qx-grid", "1:10:3",
                         "--svg", scratch("x.svg").string(), "--svg-columns", "Qx,nope"});
  EXPECT_EQ(r.code, kExitUsage);
}

TEST(Cli, RegimeViolationExitCode) {
  const auto r = invoke({"scaling", "--scaling-mode", "analytic", "--kappa", "4", "--Omega",
                         "0.01", "--beta0", "1", "--x", "0.01", "--S-list", "10,20,40,80"});
  EXPECT_EQ(r.code, kExitRegime) << r.err;
}

TEST(Cli, NoPartialFilesOnFailure) {
  const auto svg = scratch("partial.svg");
  std::filesystem::remove(svg);
  const auto r = invoke({"scatter", "--S", "1e4", "--x", "200", "--Qx-grid", "1:10:3", "--svg",
                         svg.string(), "--svg-columns", "Qx,Rx", "--out",
                         (scratch("no_such_dir") / "deeper" / "t.csv").string()});
  EXPECT_NE(r.code, kExitOk);
  EXPECT_FALSE(std::filesystem::exists(svg));
}

TEST(Cli, ValidateReportsChecks) {
  const auto r = invoke({"validate", "--S", "1e4", "--kappa", "4", "--Omega", "0.01", "--beta0",
                         "1", "--x", "200", "--Qx", "50", "--no-meta"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const CsvTable t = parse_csv(r.out);
  EXPECT_GE(t.rows.size(), 5u);
  EXPECT_NE(r.out.find("detuning_regime"), std::string::npos);
}

TEST(Cli, ScalingFooter) {
  const auto r = invoke({"scaling", "--scaling-mode", "analytic", "--kappa", "4", "--Omega",
                         "0.01", "--beta0", "1", "--x", "1e4", "--S-list", "1e2,1e3,1e4,1e5",
                         "--no-meta"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("exponent,prefactor,rSquared"), std::string::npos);
}
