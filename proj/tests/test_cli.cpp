#include "pqbernstein/cli.hpp"

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "pqbernstein/table.hpp"

using namespace pqb;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "pqbern");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

Table parse_csv(const std::string& text) {
  std::istringstream in(text);
  return read_csv(in);
}

std::string param(const Table& t, const std::string& key) {
  for (const auto& [k, v] : t.params) {
    if (k == key) return v;
  }
  return "<missing>";
}

std::string verdict(const Table& t, const std::string& key) {
  for (const auto& [k, v] : t.verdicts) {
    if (k == key) return v;
  }
  return "<missing>";
}

std::size_t column(const Table& t, const std::string& name) {
  for (std::size_t i = 0; i < t.columns.size(); ++i) {
    if (t.columns[i] == name) return i;
  }
  ADD_FAILURE() << "no column " << name;
  return 0;
}

double num(const Cell& c) { return std::get<double>(c); }

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("pqbern_test_" + name);
}

}  // namespace

TEST(CliEval, DefaultPaperCubic) {
  const auto r = run_cli({"eval", "--n", "10", "--p", "0.95", "--q", "0.9", "--function",
                          "paper_cubic", "--reproducible"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  const auto t = parse_csv(r.out);
  EXPECT_EQ(t.columns, (std::vector<std::string>{"x", "f", "B"}));
  ASSERT_EQ(t.rows.size(), 1001u);
  EXPECT_EQ(param(t, "command"), "eval");
  EXPECT_EQ(param(t, "n"), "10");
  EXPECT_EQ(param(t, "function"), "paper_cubic");
  EXPECT_EQ(param(t, "timestamp"), "<missing>");
  EXPECT_NEAR(num(t.rows.front()[2]), num(t.rows.front()[1]), 1e-13);
  EXPECT_NEAR(num(t.rows.back()[2]), num(t.rows.back()[1]), 1e-13);
}

TEST(CliEval, ConstantIsReproduced) {
  const auto r = run_cli({"eval", "--function", "monomial_0"});
  ASSERT_EQ(r.code, cli::kExitOk);
  const auto t = parse_csv(r.out);
  EXPECT_NE(param(t, "timestamp"), "<missing>");
  for (const auto& row : t.rows) EXPECT_NEAR(num(row[2]), 1.0, 1e-12);
}

TEST(CliEval, OriginalOperatorColumn) {
  const auto r = run_cli({"eval", "--use-original", "--n", "2", "--p", "0.5", "--q", "0.25",
                          "--function", "monomial_0"});
  ASSERT_EQ(r.code, cli::kExitOk);
  const auto t = parse_csv(r.out);
  const auto col = column(t, "B_original");
  EXPECT_EQ(num(t.rows.front()[0]), 0.0);
  EXPECT_NEAR(num(t.rows.front()[col]), 0.5, 1e-15);
  EXPECT_NEAR(num(t.rows.front()[column(t, "B")]), 1.0, 1e-15);
}

TEST(CliEval, PolynomialInput) {
  const auto r = run_cli({"eval", "--poly", "0,0,1", "--grid", "11", "--n", "2", "--p", "0.9",
                          "--q", "0.6"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  const auto t = parse_csv(r.out);
  ASSERT_EQ(t.rows.size(), 11u);
  EXPECT_NEAR(num(t.rows[5][2]), 0.4, 1e-15);
}

TEST(CliEval, UsageErrors) {
  auto r = run_cli({"eval", "--p", "0.8", "--q", "0.9"});
  EXPECT_EQ(r.code, cli::kExitUsage);
  EXPECT_NE(r.err.find("invalid (p,q)"), std::string::npos);
  EXPECT_EQ(std::count(r.err.begin(), r.err.end(), '\n'), 1);

  r = run_cli({"eval", "--function", "cosine"});
  EXPECT_EQ(r.code, cli::kExitUsage);
  EXPECT_NE(r.err.find("paper_cubic"), std::string::npos);

  r = run_cli({"eval", "--n", "201"});
  EXPECT_EQ(r.code, cli::kExitUsage);

  r = run_cli({"eval", "--format", "xml"});
  EXPECT_EQ(r.code, cli::kExitUsage);

  r = run_cli({});
  EXPECT_EQ(r.code, cli::kExitUsage);

  r = run_cli({"eval", "--output", "/nonexistent-dir/x.csv"});
  EXPECT_EQ(r.code, cli::kExitUsage);
  EXPECT_NE(r.err.find("cannot write"), std::string::npos);
}

TEST(CliMoments, MatchesClosedForm) {
  const auto r = run_cli({"moments", "--n", "40", "--p", "0.9", "--q", "0.7", "--grid", "101"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  const auto t = parse_csv(r.out);
  EXPECT_EQ(verdict(t, "status"), "pass");
  for (const auto& row : t.rows) EXPECT_NEAR(num(row[5]), num(row[6]), 1e-11);
}

TEST(CliVerify, DefaultLatticePasses) {
  const auto r = run_cli({"verify", "--reproducible"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.out;
  const auto t = parse_csv(r.out);
  EXPECT_EQ(verdict(t, "status"), "pass");
  for (const auto& row : t.rows) {
    EXPECT_EQ(std::get<std::string>(row[3]), "pass") << std::get<std::string>(row[0]);
    if (std::get<std::string>(row[0]) == "partition_of_unity") EXPECT_LE(num(row[1]), 1e-12);
  }
}

TEST(CliVerify, DegreeOne) {
  const auto r = run_cli({"verify", "--n", "1"});
  EXPECT_EQ(r.code, cli::kExitOk);
}

TEST(CliVerify, OriginalOperatorFailsUnlessDefectExpected) {
  auto r = run_cli({"verify", "--use-original"});
  EXPECT_EQ(r.code, cli::kExitCheckFailed);
  auto t = parse_csv(r.out);
  EXPECT_EQ(verdict(t, "status"), "fail");
  EXPECT_EQ(std::get<std::string>(t.rows.back()[0]), "original_partition_of_unity");
  EXPECT_GT(num(t.rows.back()[1]), 1e-3);

  r = run_cli({"verify", "--use-original", "--expect-defect"});
  EXPECT_EQ(r.code, cli::kExitOk) << r.out;
  t = parse_csv(r.out);
  EXPECT_EQ(std::get<std::string>(t.rows.back()[0]), "original_defect_exhibited");
}

TEST(CliConverge, HalfHarmonic) {
  const auto r = run_cli({"converge", "--rule", "half_harmonic", "--n-max", "100", "--grid",
                          "201", "--reproducible"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  const auto t = parse_csv(r.out);
  ASSERT_EQ(t.rows.size(), 99u);
  EXPECT_EQ(t.columns, (std::vector<std::string>{"n", "p_n", "q_n", "error_m0", "error_m1",
                                                 "error_m2", "bound", "error_f"}));
  for (const auto& row : t.rows) {
    EXPECT_LE(num(row[3]), 1e-12);
    EXPECT_LE(num(row[4]), 1e-12);
    EXPECT_LE(num(row[5]), num(row[6]));
  }
  EXPECT_EQ(verdict(t, "m2_within_bound"), "true");
  EXPECT_EQ(verdict(t, "convergence"), "convergence");
}

TEST(CliConverge, ConstantRuleReportsNoConvergence) {
  const auto r = run_cli({"converge", "--rule", "constant(0.9,0.8)", "--n-values",
                          "50,100,200", "--grid", "201"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  const auto t = parse_csv(r.out);
  EXPECT_EQ(verdict(t, "convergence"), "no-convergence");
  for (const auto& row : t.rows) EXPECT_GE(num(row[5]), 0.01);
}

TEST(CliConverge, Errors) {
  EXPECT_EQ(run_cli({"converge", "--rule", "fibonacci"}).code, cli::kExitUsage);
  // half_harmonic has q_1 = 0.
  EXPECT_EQ(run_cli({"converge", "--n-min", "1", "--n-max", "3"}).code, cli::kExitUsage);
}

TEST(CliConverge, ReproducibleRunsAreByteIdentical) {
  const std::vector<std::string> args = {"converge", "--n-max", "30", "--grid", "301",
                                         "--reproducible"};
  EXPECT_EQ(run_cli(args).out, run_cli(args).out);
}

TEST(CliTrend, VaryQ) {
  const auto r = run_cli({"trend", "--kind", "vary_q"});
  ASSERT_EQ(r.code, cli::kExitOk);
  const auto t = parse_csv(r.out);
  ASSERT_EQ(t.rows.size(), 4u);
  EXPECT_EQ(verdict(t, "weakly_decreasing"), "true");
}

TEST(CliFigure, VaryQHasFiveCurves) {
  const auto r = run_cli({"figure", "vary_q", "--reproducible"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  const auto t = parse_csv(r.out);
  // Figure-data contract: shared x column, target curve, one column per variant.
  ASSERT_EQ(t.columns.size(), 6u);
  EXPECT_EQ(t.columns[0], "x");
  EXPECT_EQ(t.columns[1], "f");
  EXPECT_EQ(t.columns[2], "B(n=10;p=0.95;q=0.5)");
  EXPECT_EQ(param(t, "curves"), "5");
  EXPECT_EQ(verdict(t, "weakly_decreasing"), "true");
  ASSERT_EQ(t.rows.size(), 1001u);
  for (const auto& row : t.rows) ASSERT_EQ(row.size(), 6u);
}

TEST(CliFigure, VaryNSortedAscending) {
  const auto r = run_cli({"figure", "--id", "vary_n", "--values", "40,5,20,10"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  const auto t = parse_csv(r.out);
  ASSERT_EQ(t.columns.size(), 6u);
  EXPECT_EQ(t.columns[2].rfind("B(n=5;", 0), 0u);
  EXPECT_EQ(t.columns[3].rfind("B(n=10;", 0), 0u);
  EXPECT_EQ(t.columns[4].rfind("B(n=20;", 0), 0u);
  EXPECT_EQ(t.columns[5].rfind("B(n=40;", 0), 0u);
}

TEST(CliFigure, SingleVariantEqualToBase) {
  const auto fig = run_cli({"figure", "vary_pq", "--n", "10", "--p", "0.95", "--q", "0.9",
                            "--values", "0.95:0.9", "--grid", "101"});
  ASSERT_EQ(fig.code, cli::kExitOk) << fig.err;
  const auto ev = run_cli({"eval", "--n", "10", "--p", "0.95", "--q", "0.9", "--grid", "101"});
  const auto tf = parse_csv(fig.out);
  const auto te = parse_csv(ev.out);
  ASSERT_EQ(tf.columns.size(), 3u);
  for (std::size_t i = 0; i < tf.rows.size(); ++i) {
    EXPECT_EQ(num(tf.rows[i][2]) - num(te.rows[i][2]), 0.0);
  }
}

TEST(CliFigure, UnknownId) {
  EXPECT_EQ(run_cli({"figure", "vary_x"}).code, cli::kExitUsage);
}

TEST(CliFormats, JsonMatchesCsvBitwise) {
  const std::vector<std::string> base = {"eval", "--n", "13", "--p", "0.97", "--q", "0.61",
                                         "--function", "sin_pi", "--grid", "257",
                                         "--reproducible"};
  auto csv_args = base;
  auto json_args = base;
  json_args.insert(json_args.end(), {"--format", "json"});
  const auto csv = parse_csv(run_cli(csv_args).out);
  std::istringstream json_in(run_cli(json_args).out);
  const auto json = read_json(json_in);
  ASSERT_EQ(csv.rows.size(), json.rows.size());
  EXPECT_EQ(csv.params, json.params);
  for (std::size_t i = 0; i < csv.rows.size(); ++i) {
    for (std::size_t j = 0; j < csv.columns.size(); ++j) {
      EXPECT_EQ(std::bit_cast<std::uint64_t>(num(csv.rows[i][j])),
                std::bit_cast<std::uint64_t>(num(json.rows[i][j])));
    }
  }
}

TEST(CliConfig, FileSuppliesDefaultsAndFlagsWin) {
  const auto path = temp_path("config.ini");
  {
    std::ofstream cfg(path);
    cfg << "# experiment config\n"
        << "n = 5\n"
        << "p=0.8\n"
        << "q=0.4\n"
        << "function=exp\n"
        << "grid=21\n";
  }
  const auto r = run_cli({"eval", "--config", path.string(), "--p", "0.85"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  const auto t = parse_csv(r.out);
  EXPECT_EQ(param(t, "n"), "5");
  EXPECT_EQ(param(t, "p"), "0.84999999999999998");
  EXPECT_EQ(param(t, "q"), "0.40000000000000002");
  EXPECT_EQ(param(t, "function"), "exp");
  EXPECT_EQ(t.rows.size(), 21u);

  {
    std::ofstream cfg(path);
    cfg << "colour=blue\n";
  }
  EXPECT_EQ(run_cli({"eval", "--config", path.string()}).code, cli::kExitUsage);
  std::filesystem::remove(path);
}

TEST(CliExecutable, WritesOutputFileAndExitStatus) {
  const auto out_path = temp_path("figure.csv");
  const std::string cmd = std::string(PQBERN_EXE) + " figure vary_q --reproducible --output " +
                          out_path.string();
  EXPECT_EQ(std::system(cmd.c_str()), 0);
  std::ifstream in(out_path);
  const auto t = read_csv(in);
  EXPECT_EQ(t.columns.size(), 6u);
  std::filesystem::remove(out_path);

  const std::string bad = std::string(PQBERN_EXE) + " verify --use-original > /dev/null";
  const int status = std::system(bad.c_str());
  ASSERT_TRUE(WIFEXITED(status));
  EXPECT_EQ(WEXITSTATUS(status), cli::kExitCheckFailed);
}
