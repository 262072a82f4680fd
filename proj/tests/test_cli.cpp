#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>

#include "fixtures.hpp"
#include "nnls/config.hpp"
#include "nnls/error.hpp"
#include "nnls/field_io.hpp"
#include "nnls/run.hpp"

using namespace nnls;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("nnls_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

RunConfig small_sweep() {
  RunConfig c = load_config(fs::path(NNLS_CONFIG_DIR) / "sweep_1d.json");
  c.epsilon = {0.4, 0.2};
  c.groundstate.n = 801;
  c.groundstate.half_extent = 10.0;
  c.groundstate.starts = 1;
  return c;
}

}  // namespace

TEST(Config, EchoRoundTrip) {
  RunConfig c = load_config(fs::path(NNLS_CONFIG_DIR) / "two_well_1d.json");
  c.nonlinearity.sigma = 1.0 / 3.0;
  c.solver.tol = 0.1 + 0.2;
  const nlohmann::json j = config_to_json(c);
  const RunConfig back = parse_config(j);
  EXPECT_EQ(config_to_json(back), j);
  EXPECT_EQ(back.nonlinearity.sigma, c.nonlinearity.sigma);
  EXPECT_EQ(back.solver.tol, c.solver.tol);
  EXPECT_EQ(parse_config_text(j.dump()).potential.wells.size(), 2u);
}

TEST(Config, ShippedConfigsValidate) {
  for (const char* name : {"sweep_1d.json", "two_well_1d.json", "smoke_2d.json", "groundstate_1d.json"}) {
    const RunConfig c = load_config(fs::path(NNLS_CONFIG_DIR) / name);
    EXPECT_NO_THROW(validate_config(c, ConfigUse::Check)) << name;
    EXPECT_NO_THROW(validate_config(c, ConfigUse::GroundState)) << name;
  }
}

TEST(Config, ExponentOutsideRangeRejected) {
  RunConfig c;
  c.nonlinearity.p = 3.5;
  EXPECT_THROW(validate_config(c, ConfigUse::Check), ConfigError);
}

TEST(Config, UnknownKeyRejected) {
  EXPECT_THROW(parse_config_text(R"({"grid": {"dim": 1, "nn": 5}})"), ConfigError);
  EXPECT_THROW(parse_config_text(R"({"epsilons": [0.1]})"), ConfigError);
}

TEST(Config, MalformedTextIsConfigError) { EXPECT_THROW(parse_config_text("{\"grid\": [1,"), ConfigError); }

TEST(Config, LambdaListChecks) {
  RunConfig c;
  c.lambdas = {};
  EXPECT_THROW(validate_config(c, ConfigUse::GroundState), ConfigError);
  c.lambdas = {1.0, 2.0, 1.0};
  EXPECT_THROW(validate_config(c, ConfigUse::GroundState), ConfigError);
  c.lambdas = {1.0, 2.0, 4.0};
  EXPECT_NO_THROW(validate_config(c, ConfigUse::GroundState));
}

TEST(Config, IncreasingEpsRejectedForSweep) {
  RunConfig c;
  c.epsilon = {0.1, 0.2, 0.4};
  EXPECT_THROW(validate_config(c, ConfigUse::Sweep), ConfigError);
  EXPECT_THROW(cmd_sweep(c, std::nullopt, 1), ConfigError);
}

TEST(FieldIo, BinaryRoundTripIsExact) {
  const fs::path dir = scratch("field_io");
  const GridSpec g = build_grid(2, 1.5, 31);
  std::mt19937_64 rng(101);
  const Field f = nnls::testing::smooth_field(g, rng, -1.0, 1.0, 1.0);
  write_field(dir / "f.nnls", f);
  const Field back = read_field(dir / "f.nnls");
  EXPECT_EQ(back.grid(), g);
  for (std::size_t j = 0; j < f.size(); ++j) EXPECT_EQ(back[j], f[j]);
}

TEST(FieldIo, CorruptFileRejected) {
  const fs::path dir = scratch("field_io_bad");
  std::ofstream(dir / "bad.nnls") << "NNLS1 1 5 1\nshort";
  EXPECT_THROW(read_field(dir / "bad.nnls"), Error);
  EXPECT_THROW(read_field(dir / "missing.nnls"), Error);
}

TEST(Sweep, RowsPopulatedAndDeterministic) {
  const RunConfig c = small_sweep();
  const SweepResult a = run_sweep(c, true);
  const SweepResult b = run_sweep(c, true);
  ASSERT_EQ(a.rows.size(), 2u);
  ASSERT_TRUE(a.all_converged());
  EXPECT_FALSE(a.rows[0].warm_started);
  EXPECT_TRUE(a.rows[1].warm_started);
  for (std::size_t k = 0; k < a.rows.size(); ++k) {
    EXPECT_NEAR(a.rows[k].solution.energy.total, b.rows[k].solution.energy.total, 1e-12);
    EXPECT_EQ(a.rows[k].decay_u.size(), 1u);
    EXPECT_EQ(a.rows[k].maxima.wells.size(), 1u);
    EXPECT_EQ(a.rows[k].localization.per_well_gap.size(), 1u);
  }
  const nlohmann::json j = to_json(a, 1);
  EXPECT_EQ(j["rows"].size(), 2u);
}

TEST(Sweep, ConcurrentRowsMatchFreshSolves) {
  const RunConfig c = small_sweep();
  const SweepResult seq = run_sweep(c, false, 1);
  const SweepResult par = run_sweep(c, false, 2, &seq.ground_states);
  ASSERT_TRUE(par.all_converged());
  for (std::size_t k = 0; k < seq.rows.size(); ++k)
    EXPECT_EQ(seq.rows[k].solution.energy.total, par.rows[k].solution.energy.total);
}

TEST(Commands, SweepWritesOutputs) {
  const fs::path dir = scratch("sweep");
  const CommandResult r = cmd_sweep(small_sweep(), dir, 1);
  EXPECT_EQ(r.exit_code, kExitSuccess);
  EXPECT_TRUE(fs::exists(dir / "report.json"));
  EXPECT_TRUE(fs::exists(dir / "fields" / "row0_u.nnls"));
  EXPECT_TRUE(fs::exists(dir / "fields" / "row1_v.csv"));
  EXPECT_TRUE(fs::exists(dir / "decay_row1.csv"));
  EXPECT_EQ(read_field(dir / "fields" / "row0_u.nnls").size(), 501u);
}

TEST(Commands, CheckPassesOnDefaults) {
  RunConfig c;
  c.hypotheses.samples = 2000;
  const CommandResult r = cmd_check(c, std::nullopt);
  EXPECT_EQ(r.exit_code, kExitSuccess);
}

TEST(Commands, CheckFailsOnBrokenNonlinearity) {
  RunConfig c;
  c.hypotheses.samples = 2000;
  c.nonlinearity.c_bilinear = -0.5;
  EXPECT_EQ(cmd_check(c, std::nullopt).exit_code, kExitFailure);
}

TEST(Commands, GroundStateTable) {
  const fs::path dir = scratch("groundstate");
  RunConfig c = load_config(fs::path(NNLS_CONFIG_DIR) / "groundstate_1d.json");
  c.groundstate.n = 801;
  c.groundstate.half_extent = 10.0;
  c.groundstate.starts = 1;
  const CommandResult r = cmd_groundstate(c, dir);
  EXPECT_EQ(r.exit_code, kExitSuccess);
  std::ifstream is(dir / "groundstate.csv");
  std::string line;
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  EXPECT_EQ(rows, 4);
  EXPECT_TRUE(r.report["monotonicity"]["increasing"].get<bool>());
}

#ifdef NNLS_TOOL_PATH
namespace {

int run_tool(const std::string& args) {
  const std::string cmd = std::string(NNLS_TOOL_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Tool, MalformedConfigExitsTwo) {
  const fs::path dir = scratch("tool_bad");
  std::ofstream(dir / "bad.json") << "{ \"grid\": ";
  EXPECT_EQ(run_tool("check --config " + (dir / "bad.json").string()), 2);
}

TEST(Tool, InvalidExponentExitsTwo) {
  const fs::path dir = scratch("tool_p");
  std::ofstream(dir / "p.json") << R"({"nonlinearity": {"p": 3.5}})";
  EXPECT_EQ(run_tool("check --config " + (dir / "p.json").string()), 2);
}

TEST(Tool, MissingSubcommandExitsTwo) { EXPECT_EQ(run_tool(""), 2); }

TEST(Tool, CheckDefaultsExitsZero) {
  const fs::path dir = scratch("tool_ok");
  std::ofstream(dir / "ok.json") << R"({"hypotheses": {"samples": 2000}})";
  EXPECT_EQ(run_tool("check --config " + (dir / "ok.json").string() + " --out " + (dir / "out").string()), 0);
  EXPECT_TRUE(fs::exists(dir / "out" / "check.json"));
}
#endif
