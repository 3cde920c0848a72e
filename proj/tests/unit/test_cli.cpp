#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "thetapolar/cli.hpp"

using namespace thetapolar;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  args.push_back("--timestamp=2020-01-01T00:00:00Z");
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path write_temp(const std::string& name, const std::string& text) {
  const fs::path p = fs::temp_directory_path() / ("thetapolar_test_" + name);
  std::ofstream(p) << text;
  return p;
}

}  // namespace

TEST(Cli, ThetaEvalPrintsEightyDigits) {
  const Result r = run({"theta", "eval", "--alpha", "1", "--x", "0.5"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "0.91357913815611682140724259340122208970196391639346903341969653126590800937200911\n");
  const Result p = run({"theta", "eval", "--alpha", "1", "--x", "0.5", "--method", "product", "--precision-digits", "20"});
  EXPECT_EQ(p.out, "0.91357913815611682141\n");
}

TEST(Cli, PrecisionFromEnvironment) {
  ::setenv(cli::kPrecisionEnv, "12", 1);
  const Result r = run({"theta", "eval", "--alpha", "1", "--x", "0"});
  ::unsetenv(cli::kPrecisionEnv);
  EXPECT_EQ(r.out, "1.08643481121\n");
}

TEST(Cli, PolarizeEquispacedThree) {
  const Result r = run({"polarize", "--equispaced", "3", "--alpha", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  ASSERT_EQ(doc["argmin"].size(), 3u);
  const double expected[] = {1.0 / 6, 0.5, 5.0 / 6};
  const double enclosure = std::stod(doc["enclosure"].get<std::string>());
  EXPECT_LE(enclosure, 1e-30);
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(std::stod(doc["argmin"][i].get<std::string>()), expected[i], 1e-15);
  }
  EXPECT_TRUE(doc["polarization"].is_string());
  EXPECT_EQ(doc["manifest"]["subcommand"], "polarize");
  EXPECT_EQ(doc["manifest"]["parameters"]["equispaced"], "3");
  EXPECT_EQ(doc["manifest"]["precision_digits"], "80");
  EXPECT_EQ(doc["manifest"]["timestamp"], "2020-01-01T00:00:00Z");
}

TEST(Cli, VerifyMidpoint) {
  const Result r = run({"verify", "--lemma", "midpoint", "--trials", "200", "--seed", "7"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["failures"], "0");
  EXPECT_EQ(doc["trials"], "200");
  EXPECT_EQ(doc["manifest"]["seed"], "7");
}

TEST(Cli, UnknownFlagIsValidationError) {
  const Result r = run({"polarize", "--equispaced", "3", "--alpha", "1", "--bogus"});
  EXPECT_EQ(r.code, 2);
  EXPECT_TRUE(r.out.empty());
  EXPECT_EQ(std::count(r.err.begin(), r.err.end(), '\n'), 1);
}

TEST(Cli, MalformedPointsNameTheIndex) {
  const fs::path bad = write_temp("bad.json", R"({"n":3,"points":["0","0.25",0.5]})");
  const Result r = run({"polarize", "--points", bad.string(), "--alpha", "1"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("points[2]"), std::string::npos) << r.err;
  const fs::path nan = write_temp("nan.json", R"(["0","x"])");
  const Result r2 = run({"energy", "--points", nan.string(), "--alpha", "1"});
  EXPECT_EQ(r2.code, 2);
  EXPECT_NE(r2.err.find("points[1]"), std::string::npos) << r2.err;
  const fs::path count = write_temp("count.json", R"({"n":2,"points":["0"]})");
  EXPECT_EQ(run({"energy", "--points", count.string(), "--alpha", "1"}).code, 2);
  EXPECT_EQ(run({"energy", "--points", "/nonexistent/file.json", "--alpha", "1"}).code, 2);
}

TEST(Cli, BareArrayPointsFile) {
  const fs::path f = write_temp("bare.json", R"(["0","0.5"])");
  const Result r = run({"energy", "--points", f.string(), "--alpha", "1", "--precision-digits", "20"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(nlohmann::json::parse(r.out)["n"], "2");
}

TEST(Cli, ValidationErrors) {
  EXPECT_EQ(run({"theta", "eval", "--alpha", "-1", "--x", "0"}).code, 2);
  EXPECT_EQ(run({"theta", "eval", "--alpha", "one", "--x", "0"}).code, 2);
  EXPECT_EQ(run({"polarize", "--alpha", "1"}).code, 2);
  EXPECT_EQ(run({"polarize", "--alpha", "1", "--equispaced", "3", "--random", "3"}).code, 2);
  EXPECT_EQ(run({"verify", "--lemma", "nope"}).code, 2);
  EXPECT_EQ(run({"decompose", "--points", write_temp("far.json", R"(["0","0.1","0.5"])").string()}).code, 2);
  EXPECT_EQ(run({"optimize", "--alpha", "1", "--n", "6", "--oracle"}).code, 2);
  EXPECT_EQ(run({"theta", "eval", "--alpha", "1", "--x", "0", "--precision-digits", "0"}).code, 2);
  EXPECT_EQ(run({}).code, 2);
}

TEST(Cli, CurveCsvCarriesManifest) {
  const fs::path out = fs::temp_directory_path() / "thetapolar_test_curve.csv";
  const Result r = run({"polarize", "--equispaced", "2", "--alpha", "1", "--emit-curve", "8", "--out", out.string(),
                        "--precision-digits", "20"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(nlohmann::json::parse(r.out)["n"], "2");
  std::ifstream in(out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line.rfind("# manifest: {", 0), 0u);
  std::getline(in, line);
  EXPECT_EQ(line, "x,f");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 8);
}

TEST(Cli, SweepDefaultsToCsv) {
  const Result r = run({"sweep-one", "--alpha", "1", "--n", "2", "--samples", "4", "--precision-digits", "10"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  std::getline(in, line);
  EXPECT_EQ(line, "x1,polarization");
  std::getline(in, line);
  EXPECT_EQ(line.substr(0, 2), "0,");
}

TEST(Cli, OutputIndependentOfThreads) {
  const std::vector<std::string> base = {"optimize", "--alpha", "1", "--n", "3", "--starts", "3", "--seed", "4",
                                         "--precision-digits", "30"};
  auto with = [&](const char* t) {
    auto a = base;
    a.push_back("--threads");
    a.push_back(t);
    return run(a);
  };
  const Result one = with("1");
  ASSERT_EQ(one.code, 0) << one.err;
  EXPECT_EQ(with("3").out, one.out);
  EXPECT_EQ(with("1").out, one.out);
}

TEST(Cli, SplitAndDecompose) {
  const Result s = run({"split", "--equispaced", "5", "--alpha", "1", "--samples", "4", "--precision-digits", "30"});
  ASSERT_EQ(s.code, 0) << s.err;
  EXPECT_TRUE(nlohmann::json::parse(s.out)["reconstruction"]["holds"].get<bool>());
  const Result d = run({"decompose", "--equispaced", "4"});
  ASSERT_EQ(d.code, 0) << d.err;
  EXPECT_EQ(nlohmann::json::parse(d.out)["eps"].size(), 4u);
}

TEST(Cli, TimestampFromSourceDateEpoch) {
  ::setenv("SOURCE_DATE_EPOCH", "86400", 1);
  EXPECT_EQ(cli::manifest_timestamp(""), "1970-01-02T00:00:00Z");
  ::unsetenv("SOURCE_DATE_EPOCH");
  EXPECT_EQ(cli::manifest_timestamp("x"), "x");
}
