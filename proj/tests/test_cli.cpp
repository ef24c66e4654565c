#include "matroid_er/cli.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

using namespace matroid_er;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args, const std::string& stdin_text = "") {
  std::istringstream in(stdin_text);
  std::ostringstream out, err;
  int code = cli::run(args, in, out, err);
  return {code, out.str(), err.str()};
}

class CliFiles : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("matroid_er_cli_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string file(const std::string& name, const std::string& content = "") {
    auto p = (dir_ / name).string();
    if (!content.empty()) std::ofstream(p) << content;
    return p;
  }
  static std::string slurp(const std::string& p) {
    std::ifstream f(p);
    return {std::istreambuf_iterator<char>(f), {}};
  }

  fs::path dir_;
};

}  // namespace

TEST(Cli, BuiltinPipesIntoAxiomsCheck) {
  auto fano = run({"builtin", "fano"});
  ASSERT_EQ(fano.code, 0);
  auto check = run({"axioms-check"}, fano.out);
  EXPECT_EQ(check.code, 0);
  EXPECT_NE(check.out.find("bases: 28"), std::string::npos);
  auto bad = run({"axioms-check"}, "matroid n=4 r=2\nbases\n0 1\n2 3\n");
  EXPECT_EQ(bad.code, 1);
  auto j = run({"--format", "json", "axioms-check"}, "matroid n=4 r=2\nbases\n0 1\n2 3\n");
  EXPECT_EQ(io::json::parse(j.out).at("ok"), false);
  EXPECT_TRUE(io::json::parse(j.out).contains("witness"));
}

TEST_F(CliFiles, VerifyExitCodes) {
  auto nf = file("nf.m", run({"builtin", "nonfano"}).out);
  auto f = file("f.m", run({"builtin", "fano"}).out);
  auto a = file("a.mat", run({"builtin", "nonfano", "--matrix"}).out);
  EXPECT_EQ(run({"verify", "--matroid", nf, "--matrix", a}).code, 0);
  auto no = run({"verify", "--matroid", f, "--matrix", a});
  EXPECT_EQ(no.code, 1);
  auto j = io::json::parse(no.out);
  EXPECT_EQ(j.at("verdict"), "extra-basis");
  EXPECT_EQ(j.at("independent_non_basis"), io::json({1, 3, 5}));
  auto small = file("s.mat", "matrix 3 2\n1 0\n0 1\n0 0\n");
  auto mismatch = run({"verify", "--matroid", f, "--matrix", small});
  EXPECT_EQ(mismatch.code, 2);
  EXPECT_NE(mismatch.err.find("columns"), std::string::npos);
}

TEST_F(CliFiles, UsageAndInputErrors) {
  EXPECT_EQ(run({"bogus"}).code, 2);
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"--seed", "4", "nope"}).code, 2);
  EXPECT_EQ(run({"builtin", "petersen"}).code, 2);
  EXPECT_EQ(run({"verify", "--matroid", "x"}).code, 2);
  EXPECT_EQ(run({"builtin", "--help"}).code, 0);
  auto malformed = run({"axioms-check"}, "matroid n=4 r=2\nbases\n0 1\n0 x\n");
  EXPECT_EQ(malformed.code, 2);
  EXPECT_NE(malformed.err.find("line 4"), std::string::npos);
  EXPECT_EQ(run({"axioms-check", file("missing.txt")}).code, 2);
}

TEST_F(CliFiles, FromMatrixRespectsGuard) {
  auto a = file("a.mat", run({"builtin", "u34", "--matrix"}).out);
  auto m = run({"from-matrix", a});
  ASSERT_EQ(m.code, 0);
  EXPECT_EQ(io::parse_matroid(m.out).matroid, builtin::u34());
  EXPECT_EQ(run({"--max-n", "3", "from-matrix", a}).code, 2);
}

TEST_F(CliFiles, CompileRealizeReadBack) {
  auto sys = file("s.etr", "VAR x\nVAR y\nVAR z\nVAR w\nADD x y z\nMUL x z w\nPOS y\n");
  auto asg = file("a.txt", "x 2\ny 1/3\nz 7/3\nw 14/3\n");
  auto m = file("m.txt"), t = file("t.json"), p = file("p.txt"), p2 = file("p2.txt");
  ASSERT_EQ(run({"compile", "--system", sys, "--out", m, "--trace", t}).code, 0);
  EXPECT_EQ(run({"check", "--system", sys, "--assignment", asg}).code, 0);
  auto r = run({"--seed", "9", "realize", "--trace", t, "--assignment", asg, "--matroid", m, "--out", p});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("verified: true"), std::string::npos);
  ASSERT_EQ(run({"--seed", "9", "realize", "--trace", t, "--assignment", asg, "--out", p2}).code, 0);
  EXPECT_EQ(slurp(p), slurp(p2));
  auto values = run({"read-values", "--vars-only", p});
  ASSERT_EQ(values.code, 0);
  EXPECT_EQ(values.out, "x 2\ny 1/3\nz 7/3\nw 14/3\n");
  auto wrong = file("w.txt", "x 2\ny 1/3\nz 7/3\nw 5\n");
  EXPECT_EQ(run({"check", "--system", sys, "--assignment", wrong}).code, 1);
  EXPECT_EQ(run({"realize", "--trace", t, "--assignment", wrong}).code, 2);
}

TEST_F(CliFiles, NormalizeIsDeterministic) {
  auto poly = file("sq.poly", "poly 1\nterm 1 2\nterm -2 0\n");
  auto a = run({"--format", "json", "normalize", "--in", poly, "--stage", "distinct", "--test-scale", "1/16", "100"});
  auto b = run({"--format", "json", "normalize", "--in", poly, "--stage", "distinct", "--test-scale", "1/16", "100"});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  auto j = io::json::parse(a.out);
  EXPECT_EQ(j.at("delta"), "1/16");
  EXPECT_EQ(j.at("coefficient_bound"), "12348");  // 36 * 7^3
  auto cs = parse_system(j.at("output").get<std::string>());
  EXPECT_TRUE(cs.distinct_promise);
  auto bad = run({"normalize", "--stage", "feasibility"}, "poly 1\nterm 1 3\n");
  EXPECT_EQ(bad.code, 0);  // cubes flatten to degree <= 2 constraints first
  EXPECT_EQ(run({"normalize", "--stage", "sideways"}, "poly 1\n").code, 2);
}

TEST_F(CliFiles, SimulateAndRealizeOrderType) {
  auto chi = file("c.ot", "chirotope 4\n0 1 2 1\n0 1 3 1\n0 2 3 -1\n1 2 3 1\n");
  auto src = file("src.pts", "points 4\n0 0 1\n4 0 1\n0 4 1\n1 1 1\n");
  auto m = file("m.txt"), t = file("t.json"), p = file("p.txt");
  auto sim = run({"simulate-ot", "--in", chi, "--out", m, "--trace", t});
  ASSERT_EQ(sim.code, 0) << sim.err;
  EXPECT_NE(sim.out.find("points: 246"), std::string::npos);
  auto r = run({"realize", "--trace", t, "--points", src, "--matroid", m, "--out", p});
  EXPECT_EQ(r.code, 0) << r.err;
  auto flipped = file("f.pts", "points 4\n0 0 1\n4 0 1\n0 4 1\n3 3 1\n");
  EXPECT_EQ(run({"realize", "--trace", t, "--points", flipped}).code, 2);
  EXPECT_EQ(run({"simulate-ot", "--trace", t}, "chirotope 3\n0 1 2 1\n0 1 2 1\n").code, 2);
}
