#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "ellipsoid/cli.hpp"

namespace ellipsoid {
namespace {

namespace fs = std::filesystem;

const std::string kProblems = ELLIPSOID_PROBLEMS_DIR;

struct Result {
  int status;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int status = cli::run(args, out, err);
  return {status, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("ellipsoid_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }

  fs::path dir_;
};

TEST_F(CliTest, FeasibleWithVerify) {
  const Result r = run_cli({"--input", kProblems + "/feasible_quadrant.json", "--verify"});
  EXPECT_EQ(r.status, 0) << r.err;
  EXPECT_NE(r.out.find("status: feasible"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("oracle: agree"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("certified: yes"), std::string::npos) << r.out;
}

TEST_F(CliTest, DisjointHalfPlanesJsonReport) {
  const Result r = run_cli({"--input", kProblems + "/disjoint_halfplanes.json", "--output", "json", "--verify"});
  EXPECT_EQ(r.status, 1) << r.err;
  const auto report = nlohmann::json::parse(r.out);
  EXPECT_EQ(report.at("status"), "volume_exhausted");
  EXPECT_LT(report.at("final_log_volume").get<double>(), report.at("log_epsilon").get<double>());
  EXPECT_EQ(report.at("oracle"), "agree");
  EXPECT_TRUE(report.at("certified").get<bool>());
}

TEST_F(CliTest, MissingFileIsInputError) {
  const Result r = run_cli({"--input", (dir_ / "nope.json").string()});
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.err.find("cannot read"), std::string::npos);
}

TEST_F(CliTest, FlagAndFileErrors) {
  EXPECT_EQ(run_cli({}).status, 2);
  EXPECT_EQ(run_cli({"--input", kProblems + "/feasible_quadrant.json", "--output", "xml"}).status, 2);
  EXPECT_EQ(run_cli({"--input", kProblems + "/feasible_quadrant.json", "--bogus"}).status, 2);
  EXPECT_EQ(run_cli({"--input", kProblems + "/feasible_quadrant.json", "--epsilon", "-1"}).status, 2);
  EXPECT_EQ(run_cli({"--input", kProblems + "/feasible_quadrant.json", "--tol", "-1"}).status, 2);
  EXPECT_EQ(run_cli({"--input", write("bad.json", "{\"dim\": 2,")}).status, 2);
  const Result mismatch = run_cli({"--input", write("m.json", R"({"dim":2,"radius":1,"constraints":[{"a":[1],"b":0}]})")});
  EXPECT_EQ(mismatch.status, 2);
  EXPECT_NE(mismatch.err.find("constraints[0]"), std::string::npos) << mismatch.err;
  const Result svg3 = run_cli({"--input", kProblems + "/triangle_3d.json", "--svg", (dir_ / "x.svg").string()});
  EXPECT_EQ(svg3.status, 2);
  EXPECT_NE(svg3.err.find("two-dimensional"), std::string::npos);
}

TEST_F(CliTest, NumericalBreakdownExitsThree) {
  const Result r = run_cli({"--input", kProblems + "/degenerate_normal.json", "--output", "json"});
  EXPECT_EQ(r.status, 3) << r.err;
  const auto report = nlohmann::json::parse(r.out);
  EXPECT_EQ(report.at("status"), "numerical_breakdown");
  EXPECT_EQ(report.at("iteration"), 0);
}

TEST_F(CliTest, IterationCapExitsOne) {
  const Result r = run_cli({"--input", kProblems + "/disjoint_halfplanes.json", "--max-iter", "2", "--epsilon", "1e-12"});
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.out.find("status: iteration_cap"), std::string::npos) << r.out;
}

TEST_F(CliTest, ThreeDimensionalVerify) {
  const Result r = run_cli({"--input", kProblems + "/triangle_3d.json", "--verify"});
  EXPECT_EQ(r.status, 0) << r.err;
  EXPECT_NE(r.out.find("oracle: agree"), std::string::npos) << r.out;
}

TEST_F(CliTest, TraceFileIsArithmeticInLogVolume) {
  const std::string trace = (dir_ / "trace.ndjson").string();
  const Result r = run_cli({"--input", kProblems + "/disjoint_halfplanes.json", "--trace", trace});
  ASSERT_EQ(r.status, 1);
  std::ifstream in(trace);
  std::string line;
  std::vector<TraceRecord> records;
  while (std::getline(in, line)) records.push_back(trace_record_from_json(nlohmann::json::parse(line)));
  ASSERT_GT(records.size(), 2u);
  for (std::size_t i = 1; i < records.size(); ++i) {
    EXPECT_EQ(records[i].iter, i);
    EXPECT_NEAR(records[i].log_volume - records[i - 1].log_volume, step_log_ratio(2), 1e-9);
  }
}

TEST_F(CliTest, SvgForSingleCut) {
  const std::string svg_path = (dir_ / "cut.svg").string();
  const Result r = run_cli({"--input", kProblems + "/single_cut.json", "--svg", svg_path});
  ASSERT_EQ(r.status, 0) << r.err;
  std::ifstream in(svg_path);
  const std::string svg{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  EXPECT_NE(svg.find("rx=\"0.66666666666666"), std::string::npos) << svg;
  EXPECT_NE(svg.find("ry=\"1.1547005383792"), std::string::npos) << svg;
}

TEST_F(CliTest, HelpExitsZero) {
  const Result r = run_cli({"--help"});
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("--input"), std::string::npos);
}

}  // namespace
}  // namespace ellipsoid
