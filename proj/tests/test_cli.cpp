#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "teig/cli.hpp"
#include "teig/examples.hpp"
#include "teig/io.hpp"

using namespace teig;

namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun Invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = RunCli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string WriteTemp(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / ("teig_test_" + name);
  std::ofstream(path) << content;
  return path.string();
}

// Drops every timing field so two runs can be compared.
nlohmann::json WithoutTimings(nlohmann::json j) {
  j.erase("timings");
  for (auto& d : j["diagnostics"]) d.erase("seconds");
  return j;
}

}  // namespace

TEST(TensorText, ParsesAndSymmetrizes) {
  const SymmetricTensor t = ParseTensorText("# comment\n2 3\n1 1 2 1.5\n2 2 2 -1\n");
  EXPECT_EQ(t.dim(), 2);
  EXPECT_EQ(t.order(), 3);
  EXPECT_DOUBLE_EQ(t.form().coefficient({2, 1}), 1.5);
  EXPECT_DOUBLE_EQ(t.form().coefficient({0, 3}), -1.0);
  EXPECT_EQ(ParseTensorText(FormatTensorText(t)), t);
}

TEST(TensorText, ReportsLineOfError) {
  try {
    ParseTensorText("2 3\n1 1 2 1.5\n1 1 x\n");
    FAIL() << "expected a parse error";
  } catch (const std::exception& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
  EXPECT_ANY_THROW(ParseTensorText(""));
  EXPECT_ANY_THROW(ParseTensorText("2 3\n1 1 3 1.0\n"));
  EXPECT_ANY_THROW(ParseTensorText("2 3\n1 1 1.0\n"));
}

TEST(TensorJson, ParsesEntries) {
  const std::string text = R"({"n": 2, "m": 4, "entries": [{"idx": [1,1,1,1], "val": 3}, {"idx": [2,2,2,2], "val": 1}]})";
  const SymmetricTensor t = ParseTensor(text);
  EXPECT_EQ(t, MakeExample("ex4_4", 0.0).tensor);
  EXPECT_ANY_THROW(ParseTensorJson(R"({"n": 2})"));
}

TEST(Matrix, ParsesSquare) {
  const Eigen::MatrixXd d = ParseMatrix("2 0.5\n0.5 1\n");
  ASSERT_EQ(d.rows(), 2);
  EXPECT_DOUBLE_EQ(d(0, 1), 0.5);
  EXPECT_ANY_THROW(ParseMatrix("1 2 3"));
}

TEST(Region, SkipsCommentsAndBlanks) {
  const std::vector<Polynomial> r = ParseRegion("# disk\n\n1:0,0 -1:2,0 -1:0,2\n1:1,0\n", 2);
  ASSERT_EQ(r.size(), 2u);
  EXPECT_EQ(r[1], Polynomial::Variable(2, 0));
}

TEST(ReportJson, RoundTrip) {
  RunReport r;
  r.input = {"example:ex4_9", "desc", 3, 3, "z", 2};
  r.config.delta0 = 0.05;
  r.config.epsilon0 = 0.05;
  r.config.n_max = 5;
  r.config.rank_tol = 1e-6;
  r.config.residual_tol = 1e-6;
  r.config.seed = 7;
  r.config.symmetry = "none";
  r.config.band = std::make_pair(-1.0, 2.0);
  EigenPair p;
  p.lambda = 2.0;
  p.vectors = {{1.0, 0.0, 0.0}};
  p.multiplicity = 1;
  p.residual = 1e-12;
  p.paired = true;
  r.spectrum.pairs = {p};
  PairDiagnostics d;
  d.order = 2;
  d.flat_t = 2;
  d.values = {2.0, 2.0};
  d.note = "flat";
  r.spectrum.diagnostics = {d};
  r.spectrum.complete = true;
  r.spectrum.warnings = {"w"};
  r.spectrum.relaxations = 4;
  r.spectrum.sdp_iterations = 40;
  r.total_seconds = 0.5;
  r.oracle = OracleEcho{"newton_multistart", {2.0, -2.0}, true, "ok"};
  EXPECT_EQ(ReportFromJson(ReportToJson(r)), r);

  const nlohmann::json j = nlohmann::json::parse(ReportToJson(r));
  for (const char* key : {"input", "config", "spectrum", "complete", "warnings", "diagnostics", "stats", "timings", "oracle"})
    EXPECT_TRUE(j.contains(key)) << key;
}

TEST(ReportJson, NonFiniteResidualBecomesNull) {
  RunReport r;
  EigenPair p;
  p.residual = std::numeric_limits<double>::infinity();
  r.spectrum.pairs = {p};
  const std::string text = ReportToJson(r);
  EXPECT_NE(text.find("null"), std::string::npos);
  EXPECT_TRUE(std::isinf(ReportFromJson(text).spectrum.pairs[0].residual));
}

TEST(Table, MarksRecoveredAndMultiplicity) {
  RunReport r;
  r.input = {"example:x", "test", 2, 4, "z", 2};
  EigenPair a;
  a.lambda = 4.125;
  a.vectors = {{0.5, 0.8660254}, {0.5, -0.8660254}};
  a.multiplicity = 2;
  EigenPair b;
  b.lambda = 0.0;
  b.vectors = {{1.0, 0.0}};
  b.multiplicity = 1;
  b.recovered = true;
  r.spectrum.pairs = {a, b};
  r.spectrum.complete = true;
  std::ostringstream os;
  PrintTable(r, os);
  const std::string s = os.str();
  EXPECT_NE(s.find("4.1250 (2)"), std::string::npos) << s;
  EXPECT_NE(s.find("(*)"), std::string::npos) << s;
  EXPECT_NE(s.find("complete"), std::string::npos) << s;
}

TEST(Cli, UsageErrorsExitOne) {
  EXPECT_EQ(Invoke({}).code, kExitUsage);
  EXPECT_EQ(Invoke({"--tensor", "a.txt", "--example", "ex4_1"}).code, kExitUsage);
  EXPECT_EQ(Invoke({"--example", "nope"}).code, kExitUsage);
  EXPECT_EQ(Invoke({"--example", "ex4_1", "--nmax", "1"}).code, kExitUsage);
  EXPECT_EQ(Invoke({"--tensor", "/nonexistent/tensor.txt"}).code, kExitUsage);
  EXPECT_EQ(Invoke({"--example", "ex4_1", "--kind", "q"}).code, kExitUsage);
  EXPECT_EQ(Invoke({"--param", "1", "--tensor", "x"}).code, kExitUsage);
}

TEST(Cli, CompleteRunExitsZero) {
  const CliRun r = Invoke({"--example", "ex4_9"});
  EXPECT_EQ(r.code, kExitComplete) << r.err;
  EXPECT_NE(r.out.find("2.0000"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("-2.0000"), std::string::npos) << r.out;
}

TEST(Cli, TensorFileWithOracle) {
  const std::string path = WriteTemp("quartic.txt", "2 4\n1 1 1 1 3\n2 2 2 2 1\n1 1 2 2 1\n");
  const CliRun r = Invoke({"--tensor", path, "--verify-oracle", "--format", "json"});
  ASSERT_EQ(r.code, kExitComplete) << r.err << r.out;
  const nlohmann::json j = nlohmann::json::parse(r.out);
  EXPECT_TRUE(j["complete"].get<bool>());
  EXPECT_TRUE(j["oracle"]["agrees"].get<bool>());
  EXPECT_EQ(j["oracle"]["source"], "circle_scan");
  EXPECT_EQ(j["spectrum"]["pairs"].size(), 3u);
}

TEST(Cli, BandAndRegion) {
  const std::string region = WriteTemp("orthant.txt", "1:1,0,0\n1:0,1,0\n1:0,0,1\n");
  const CliRun r = Invoke({"--example", "ex4_1", "--band", "1", "2.5", "--region", region, "--format", "json"});
  ASSERT_EQ(r.code, kExitComplete) << r.err;
  const nlohmann::json j = nlohmann::json::parse(r.out);
  ASSERT_EQ(j["spectrum"]["pairs"].size(), 3u);
  EXPECT_NEAR(j["spectrum"]["pairs"][0]["lambda"].get<double>(), 2.0, 1e-6);
  EXPECT_EQ(j["config"]["region_size"], 3);
  for (const auto& p : j["spectrum"]["pairs"])
    for (const auto& v : p["vectors"])
      for (const auto& x : v) EXPECT_GE(x.get<double>(), -1e-6);
}

TEST(Cli, SeedDeterminism) {
  const std::vector<std::string> args = {"--example", "ex4_4", "--param", "0.25", "--seed", "11", "--format", "json"};
  const CliRun a = Invoke(args), b = Invoke(args);
  ASSERT_EQ(a.code, kExitComplete) << a.err;
  EXPECT_EQ(WithoutTimings(nlohmann::json::parse(a.out)), WithoutTimings(nlohmann::json::parse(b.out)));
}

TEST(Cli, DumpRelaxation) {
  const CliRun r = Invoke({"--example", "ex4_4", "--dump-relaxation"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("moment relaxation n=2 N=2"), std::string::npos) << r.out.substr(0, 200);
}

TEST(Cli, VerboseLogsToErr) {
  const CliRun r = Invoke({"--example", "ex4_9", "--verbose"});
  EXPECT_EQ(r.code, kExitComplete);
  EXPECT_FALSE(r.err.empty());
}
