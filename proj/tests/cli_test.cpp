#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gcsc/cases.hpp"
#include "gcsc/json_io.hpp"

using gcsc::json;

namespace {

// The harness passes the CLI binary and the fixtures directory as positional
// arguments; gtest_main owns main(), so recover them from the command line.
std::vector<std::string> own_cmdline() {
  std::ifstream in("/proc/self/cmdline", std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  std::string all = ss.str();
  std::vector<std::string> args;
  size_t start = 0;
  while (start < all.size()) {
    size_t end = all.find('\0', start);
    if (end == std::string::npos) end = all.size();
    if (end > start) args.push_back(all.substr(start, end - start));
    start = end + 1;
  }
  return args;
}

std::string cli_path() {
  auto args = own_cmdline();
  if (args.size() < 2) ADD_FAILURE() << "missing CLI binary argument";
  return args.size() >= 2 ? args[1] : "";
}

std::string fixtures_dir() {
  auto args = own_cmdline();
  if (args.size() < 3) ADD_FAILURE() << "missing fixtures directory argument";
  return args.size() >= 3 ? args[2] : "";
}

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout and stderr interleaved
};

RunResult run(const std::string& command) {
  RunResult res;
  std::string full = command + " 2>&1";
  FILE* pipe = popen(full.c_str(), "r");
  if (!pipe) {
    ADD_FAILURE() << "popen failed for: " << command;
    return res;
  }
  std::array<char, 4096> buf{};
  size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0)
    res.output.append(buf.data(), got);
  int status = pclose(pipe);
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

json parse_output(const std::string& text) {
  return json::parse(text);
}

std::string temp_path(const std::string& name) {
  return ::testing::TempDir() + name;
}

TEST(Cli, VerifyFixtureCertified) {
  std::string fx = fixtures_dir();
  RunResult res = run(cli_path() + " verify --game " + fx +
                      "/example1_game.json --problem " + fx +
                      "/example1_problem.json --gain " + fx +
                      "/example1_gain.json");
  ASSERT_EQ(res.exit_code, 0) << res.output;
  json j = parse_output(res.output);
  EXPECT_EQ(j.at("status").get<std::string>(), "certified");
  EXPECT_NEAR(j.at("J_alpha").get<double>(), 1.3654830576830896, 1e-9);
  EXPECT_TRUE(j.contains("certificate"));
}

TEST(Cli, VerifyWritesReportFile) {
  std::string fx = fixtures_dir();
  std::string out = temp_path("cli_verify.json");
  RunResult res = run(cli_path() + " verify --game " + fx +
                      "/example1_game.json --problem " + fx +
                      "/example1_problem.json --gain " + fx +
                      "/example1_gain.json --out " + out);
  ASSERT_EQ(res.exit_code, 0) << res.output;
  json j = gcsc::jsondetail::parse_file(out);
  EXPECT_EQ(j.at("status").get<std::string>(), "certified");
  std::remove(out.c_str());
}

TEST(Cli, VerifyZeroGainRejectedWithExitOne) {
  gcsc::GameDefinition g = gcsc::microgrid_game();
  std::string game = temp_path("cli_mg_game.json");
  std::string prob = temp_path("cli_mg_problem.json");
  std::string gain = temp_path("cli_mg_zero_gain.json");
  gcsc::save_game(game, g);
  gcsc::save_problem(prob, gcsc::microgrid_problem());
  std::vector<gcsc::Matrix> zeros;
  for (int i = 0; i < g.N(); ++i)
    zeros.push_back(gcsc::Matrix::Zero(g.m(i), g.s(i)));
  gcsc::save_gain(gain, gcsc::assemble_gain(zeros, g));
  RunResult res = run(cli_path() + " verify --game " + game + " --problem " +
                      prob + " --gain " + gain);
  EXPECT_EQ(res.exit_code, 1) << res.output;
  EXPECT_NE(res.output.find("not-stabilizing"), std::string::npos);
  std::remove(game.c_str());
  std::remove(prob.c_str());
  std::remove(gain.c_str());
}

TEST(Cli, MalformedInputExitsTwoNamingPath) {
  std::string fx = fixtures_dir();
  std::string bad = temp_path("cli_broken_game.json");
  std::ofstream(bad) << "{ \"A\": [[0, ";
  RunResult res = run(cli_path() + " verify --game " + bad + " --problem " +
                      fx + "/example1_problem.json --gain " + fx +
                      "/example1_gain.json");
  EXPECT_EQ(res.exit_code, 2) << res.output;
  EXPECT_NE(res.output.find(bad), std::string::npos);
  std::remove(bad.c_str());
}

TEST(Cli, MissingRequiredFlagExitsTwo) {
  RunResult res = run(cli_path() + " verify");
  EXPECT_EQ(res.exit_code, 2) << res.output;
}

TEST(Cli, NoSubcommandExitsTwo) {
  RunResult res = run(cli_path());
  EXPECT_EQ(res.exit_code, 2) << res.output;
}

TEST(Cli, HelpExitsZero) {
  RunResult res = run(cli_path() + " --help");
  EXPECT_EQ(res.exit_code, 0) << res.output;
  EXPECT_NE(res.output.find("verify"), std::string::npos);
  EXPECT_NE(res.output.find("synth"), std::string::npos);
}

TEST(Cli, SynthWritesCertifiedGain) {
  std::string fx = fixtures_dir();
  std::string out = temp_path("cli_synth_gain.json");
  RunResult res = run(cli_path() + " synth --game " + fx +
                      "/example1_game.json --problem " + fx +
                      "/example1_problem.json --out " + out);
  ASSERT_EQ(res.exit_code, 0) << res.output;
  json j = parse_output(res.output);
  EXPECT_EQ(j.at("status").get<std::string>(), "success");
  EXPECT_LT(j.at("J_alpha").get<double>(), 1.75);
  gcsc::GameDefinition g = gcsc::example1_game();
  gcsc::StructuredGain gain = gcsc::load_gain(out, g);
  EXPECT_EQ(gain.blocks.size(), 2u);
  EXPECT_LT(gcsc::hurwitz_margin(g.A + g.joint_B() * gain.F), 0.0);
  std::remove(out.c_str());
}

TEST(Cli, MetricsReportsRatios) {
  std::string fx = fixtures_dir();
  RunResult res = run(cli_path() + " metrics --game " + fx +
                      "/example1_game.json --gain " + fx +
                      "/example1_gain.json --problem " + fx +
                      "/example1_problem.json");
  ASSERT_EQ(res.exit_code, 0) << res.output;
  json j = parse_output(res.output);
  EXPECT_NEAR(j.at("J_OPT").get<double>(), 2.5669816758056467, 1e-9);
  EXPECT_NEAR(j.at("eta2").get<double>(), 1.0105775018970882, 1e-9);
}

TEST(Cli, SimulateWritesCsv) {
  std::string fx = fixtures_dir();
  std::string out = temp_path("cli_traj.csv");
  RunResult res = run(cli_path() + " simulate --game " + fx +
                      "/example1_game.json --gain " + fx +
                      "/example1_gain.json --x0 1.0,1.2 --t-final 2.0 --out " +
                      out);
  ASSERT_EQ(res.exit_code, 0) << res.output;
  std::ifstream in(out);
  ASSERT_TRUE(in.good());
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "t,x1,x2,u1,u2");
  json j = parse_output(res.output);
  EXPECT_GT(j.at("samples").get<size_t>(), 100u);
  std::remove(out.c_str());
}

TEST(Cli, SimulateWrongX0SizeExitsTwo) {
  std::string fx = fixtures_dir();
  RunResult res = run(cli_path() + " simulate --game " + fx +
                      "/example1_game.json --gain " + fx +
                      "/example1_gain.json --x0 1.0 --t-final 2.0 --out " +
                      temp_path("cli_traj_bad.csv"));
  EXPECT_EQ(res.exit_code, 2) << res.output;
  EXPECT_NE(res.output.find("--x0"), std::string::npos);
}

TEST(Cli, MinDeltaFindsFirstFeasibleBound) {
  std::string fx = fixtures_dir();
  RunResult res = run(cli_path() + " min-delta --game " + fx +
                      "/example1_game.json --problem " + fx +
                      "/example1_problem.json --deltas 0.5,1.0,1.75");
  ASSERT_EQ(res.exit_code, 0) << res.output;
  json j = parse_output(res.output);
  EXPECT_TRUE(j.at("found").get<bool>());
  EXPECT_DOUBLE_EQ(j.at("delta_star").get<double>(), 1.75);
  EXPECT_EQ(j.at("grid").size(), 3u);
  EXPECT_EQ(j.at("grid")[0].at("status").get<std::string>(),
            "stage1-shortfall");
}

TEST(Cli, MinDeltaAllShortfallExitsOne) {
  std::string fx = fixtures_dir();
  RunResult res = run(cli_path() + " min-delta --game " + fx +
                      "/example1_game.json --problem " + fx +
                      "/example1_problem.json --deltas 0.0001");
  EXPECT_EQ(res.exit_code, 1) << res.output;
  json j = parse_output(res.output);
  EXPECT_FALSE(j.at("found").get<bool>());
}

TEST(Cli, ParetoScanReportsAllFail) {
  std::string fx = fixtures_dir();
  std::string out = temp_path("cli_scan.csv");
  RunResult res = run(cli_path() + " pareto-scan --game " + fx +
                      "/example1_game.json --grid 0.2 --out " + out);
  ASSERT_EQ(res.exit_code, 0) << res.output;
  json j = parse_output(res.output);
  EXPECT_EQ(j.at("rows").get<int>(), 4);
  EXPECT_TRUE(j.at("all_fail").get<bool>());
  EXPECT_EQ(j.at("passing").get<int>(), 0);
  std::ifstream in(out);
  ASSERT_TRUE(in.good());
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "alpha_1,alpha_2,are_residual,sc1_residual,passes");
  std::remove(out.c_str());
}

TEST(Cli, BargainReportsWeight) {
  std::string fx = fixtures_dir();
  RunResult res = run(cli_path() + " bargain --game " + fx +
                      "/example1_game.json --disagreement 1.3939,1.2339 "
                      "--grid 0.01 --x0 1.0,1.2");
  ASSERT_EQ(res.exit_code, 0) << res.output;
  json j = parse_output(res.output);
  EXPECT_NEAR(j.at("alpha_star")[0].get<double>(), 0.63, 1e-12);
  EXPECT_LE(j.at("J1").get<double>(), 1.3939);
  EXPECT_LE(j.at("J2").get<double>(), 1.2339);
}

TEST(Cli, CaseFiveAgentReportsHonestShortfall) {
  RunResult res = run(cli_path() + " case five-agent");
  ASSERT_EQ(res.exit_code, 0) << res.output;
  json j = parse_output(res.output);
  EXPECT_EQ(j.at("name").get<std::string>(), "five-agent");
  EXPECT_EQ(j.at("printed_gain").at("status").get<std::string>(),
            "margin-shortfall");
  EXPECT_EQ(j.at("synthesis").at("status").get<std::string>(),
            "stage1-shortfall");
  EXPECT_NEAR(j.at("printed_metrics").at("eta2").get<double>(),
              1.1130719165133705, 1e-9);
}

TEST(Cli, CaseUnknownNameExitsTwo) {
  RunResult res = run(cli_path() + " case no-such-case");
  EXPECT_EQ(res.exit_code, 2) << res.output;
}

}  // namespace
