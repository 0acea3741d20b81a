// ---------------------------------------------------------------------
// End-to-end tests for the `ulat` command-line tool.
//
// Each test shells out to the real binary (path passed as argv[1]) and
// compares captured stdout byte-for-byte against a golden transcript
// under the golden directory (argv[2]).  The golden files were produced
// by the tool itself and the numbers in them were checked against the
// closed formulas and the finite-quotient counting oracle before being
// frozen, so these tests pin the full plumbing: argument parsing, grid
// construction, exact arithmetic, and the three output formats.
//
// Exit-code contract:
//   0  success
//   1  verification mismatch in verify-kr
//   2  usage error (bad flags, malformed entries, degenerate input)
//   3  verify-kr --strict with budget-skipped rows
// ---------------------------------------------------------------------

#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "json.hpp"

namespace {

std::string g_cli;     // path to the ulat binary
std::string g_golden;  // path to the golden transcript directory

struct RunResult {
  int exit_code = -1;
  std::string out;
};

/// Runs `ulat <args>` and captures stdout; stderr is discarded so that
/// usage-error diagnostics do not pollute golden comparisons.
RunResult run_cli(const std::string& args) {
  RunResult r;
  const std::string cmd = g_cli + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  char buf[4096];
  size_t got = 0;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  const int status = pclose(pipe);
  if (WIFEXITED(status)) r.exit_code = WEXITSTATUS(status);
  return r;
}

std::string read_golden(const std::string& name) {
  std::ifstream in(g_golden + "/" + name, std::ios::binary);
  EXPECT_TRUE(in.good()) << "missing golden file " << name;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST(Cli, ClassifyMatchesGolden) {
  const RunResult anti = run_cli("classify --p 3 0 pi -pi 0");
  EXPECT_EQ(anti.exit_code, 0);
  EXPECT_EQ(anti.out, read_golden("classify_anti.txt"));

  const RunResult diag = run_cli("classify --p 3 -1 0 0 3");
  EXPECT_EQ(diag.exit_code, 0);
  EXPECT_EQ(diag.out, read_golden("classify_diag.txt"));
}

TEST(Cli, ClassifyRejectsBadInput) {
  // Degenerate Gram matrix.
  EXPECT_EQ(run_cli("classify --p 3 1 0 0 0").exit_code, 2);
  // Wrong entry count.
  EXPECT_EQ(run_cli("classify --p 3 0 pi -pi").exit_code, 2);
  // Pi coefficients must be written b*pi, not bpi.
  EXPECT_EQ(run_cli("classify --p 3 0 2pi -2pi 0").exit_code, 2);
}

TEST(Cli, VerifyKrMatchesGolden) {
  const std::string args =
      "verify-kr --p 3 --q-list 3 --alpha-max 1 --beta-max 1 "
      "--n-list=-1,1 --format csv";
  const RunResult r = run_cli(args);
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.out, read_golden("verify_kr_small.csv"));

  // The same grid contains a budget-skipped row (Diagonal(1,1,+1) needs
  // counting level 3), so --strict must turn success into exit 3.
  EXPECT_EQ(run_cli(args + " --strict").exit_code, 3);
}

TEST(Cli, TableIntersectionNumbersMatchesGolden) {
  const RunResult r = run_cli(
      "table --which thm1.1 --q-list 3,5 --alpha-max 2 --beta-max 2 "
      "--n-list=-1,1,3 --format markdown");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.out, read_golden("table_thm11_small.md"));
  // Spot-check two rows inside the golden transcript.
  EXPECT_NE(r.out.find("| split | Diagonal(2,2,+1) | 3 | -20 |"),
            std::string::npos);
  EXPECT_NE(r.out.find("| nonsplit | Diagonal(1,1,-1) | 3 | 8 |"),
            std::string::npos);
}

TEST(Cli, TableDensityValuesMatchesGolden) {
  const RunResult r = run_cli(
      "table --which thm6.1 --q-list 3 --alpha-max 0 --beta-max 0 "
      "--n-list=-1 --format json");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.out, read_golden("table_thm61_small.json"));

  // The JSON must parse and echo the run configuration.
  const nlohmann::json j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["config"]["p"], 3);
  EXPECT_EQ(j["config"]["format"], "json");
  ASSERT_EQ(j["rows"].size(), 9u);
  const auto& row = j["rows"][0];
  EXPECT_EQ(row["base"], "L");
  EXPECT_EQ(row["class"], "Diagonal(0,0,+1)");
  EXPECT_EQ(row["alpha_at_1"], "0");
  EXPECT_EQ(row["alpha_at_qinv2"], "80/81");
  EXPECT_EQ(row["alpha_prime"], "2");
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run_cli("").exit_code, 2);               // missing subcommand
  EXPECT_EQ(run_cli("frobnicate").exit_code, 2);     // unknown subcommand
  EXPECT_EQ(run_cli("table").exit_code, 2);          // --which required
  EXPECT_EQ(run_cli("table --which thm9.9").exit_code, 2);
  EXPECT_EQ(run_cli("verify-kr --p 3 --format yaml").exit_code, 2);
  EXPECT_EQ(run_cli("verify-kr --p 2").exit_code, 2);   // ramified: p odd
  EXPECT_EQ(run_cli("verify-kr --p 9").exit_code, 2);   // not prime
  EXPECT_EQ(run_cli("verify-kr --p 3 --n-list=2").exit_code, 2);  // n odd
}

}  // namespace

// gtest_main is linked, but defining main here takes precedence; we need
// it to pick up the binary path and golden directory from the harness.
int main(int argc, char** argv) {
  ::testing::InitGoogleTest(&argc, argv);
  if (argc < 3) {
    std::fprintf(stderr, "usage: cli_test <ulat-binary> <golden-dir>\n");
    return 2;
  }
  g_cli = argv[1];
  g_golden = argv[2];
  return RUN_ALL_TESTS();
}
