#include "cdvrp/cli.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cdvrp/io.hpp"
#include "cdvrp/oracle.hpp"
#include "cdvrp/solvers.hpp"
#include "test_support.hpp"

namespace cdvrp {
namespace {

namespace fs = std::filesystem;
using testing::data_path;
using testing::read_text;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("cdvrp-cli-" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
            "-" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  void write(const std::string& name, const std::string& text) const {
    std::ofstream(path(name), std::ios::binary) << text;
  }

  fs::path dir_;
};

TEST_F(CliTest, SolveMinNtOnUnitSquare) {
  const Outcome r = cli({"solve", data_path("i1.vrp"), "--alg", "min-nt"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const RoutingSolution sol = parse_solution(r.out);
  EXPECT_EQ(sol.pi, 1u);
  EXPECT_EQ(sol.algorithm, "min-nt");
}

TEST_F(CliTest, SolveWritesFileAndVerifies) {
  for (const char* alg : {"min-nt", "min-nht", "bdcvrp"}) {
    const std::string out = path(std::string(alg) + ".json");
    const Outcome solved = cli({"solve", data_path("mixed_fleet.vrp"), "--alg", alg, "-o", out});
    ASSERT_EQ(solved.code, kExitOk) << alg << ": " << solved.err;
    EXPECT_TRUE(solved.out.empty());
    const Outcome checked = cli({"verify", data_path("mixed_fleet.vrp"), out});
    EXPECT_EQ(checked.code, kExitOk) << alg << ": " << checked.out;
    EXPECT_EQ(checked.out, "ok\n");
  }
}

TEST_F(CliTest, SolveParametersAreRecorded) {
  const Outcome nht = cli({"solve", data_path("line.vrp"), "--alg", "min-nht", "--lambda", "2"});
  ASSERT_EQ(nht.code, kExitOk) << nht.err;
  const RoutingSolution sol = parse_solution(nht.out);
  EXPECT_EQ(sol.parameters.at("lambda"), 2.0);
  EXPECT_EQ(sol.pi, 2u);

  const Outcome bd = cli({"solve", data_path("i1.vrp"), "--alg", "bdcvrp", "--alpha", "0.25"});
  ASSERT_EQ(bd.code, kExitOk) << bd.err;
  EXPECT_EQ(parse_solution(bd.out).parameters.at("alpha_target"), 0.25);
}

TEST_F(CliTest, VerifyReportsMissingCustomer) {
  const auto inst = parse_instance(read_text(data_path("i1.vrp")));
  RoutingSolution partial;
  partial.algorithm = "hand";
  partial.tours.push_back({make_tour(inst, {0, 1, 3, 0}), 0});
  normalize_solution(partial);
  write("partial.json", write_solution(partial, inst));
  const Outcome r = cli({"verify", data_path("i1.vrp"), path("partial.json")});
  EXPECT_EQ(r.code, kExitInfeasible);
  EXPECT_NE(r.out.find("violation: coverage"), std::string::npos) << r.out;
}

TEST_F(CliTest, VerifyBalanceTarget) {
  const auto inst = parse_instance(read_text(data_path("i1.vrp")));
  RoutingSolution sol;
  sol.tours.push_back({make_tour(inst, {0, 1, 0}), 0});
  sol.tours.push_back({make_tour(inst, {0, 3, 2, 0}), 0});
  normalize_solution(sol);
  write("uneven.json", write_solution(sol, inst));
  EXPECT_EQ(cli({"verify", data_path("i1.vrp"), path("uneven.json")}).code, kExitOk);
  const Outcome r = cli({"verify", data_path("i1.vrp"), path("uneven.json"), "--alpha", "0.9"});
  EXPECT_EQ(r.code, kExitInfeasible);
  EXPECT_NE(r.out.find("balance"), std::string::npos);
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(cli({"solve", data_path("i1.vrp"), "--alg", "bogus"}).code, kExitUsage);
  EXPECT_EQ(cli({"solve", data_path("i1.vrp")}).code, kExitUsage);
  EXPECT_EQ(cli({}).code, kExitUsage);
  EXPECT_EQ(cli({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(cli({"solve", path("missing.vrp"), "--alg", "min-nt"}).code, kExitUsage);
  EXPECT_EQ(cli({"gen", "--n", "3", "--fleet", "10"}).code, kExitUsage);
  EXPECT_EQ(cli({"--help"}).code, kExitOk);
}

TEST_F(CliTest, ParseErrorsExitWithUsageCode) {
  const Outcome r = cli({"solve", data_path("bad_triangle.vrp"), "--alg", "min-nt"});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("line 9, column 3"), std::string::npos) << r.err;
}

TEST_F(CliTest, InfeasibleDemandExitsOne) {
  write("heavy.vrp", "SIZE 2\nFLEET 0 1 4\nDEMANDS 0 2\nMATRIX 1\n");
  const Outcome r = cli({"solve", path("heavy.vrp"), "--alg", "min-nt"});
  EXPECT_EQ(r.code, kExitInfeasible);
  EXPECT_NE(r.err.find("infeasible"), std::string::npos);
  EXPECT_EQ(cli({"oracle", path("heavy.vrp")}).out, "infeasible\n");
}

TEST_F(CliTest, GenIsDeterministicAndValid) {
  const std::vector<std::string> args{"gen",   "--n",    "8",     "--seed", "5",
                                      "--box", "1",      "--fleet", "10:3,6:2.5:4"};
  const Outcome a = cli(args);
  const Outcome b = cli(args);
  ASSERT_EQ(a.code, kExitOk) << a.err;
  EXPECT_EQ(a.out, b.out);
  const auto inst = parse_instance(a.out);
  EXPECT_EQ(inst.size(), 8u);
  ASSERT_EQ(inst.fleet().size(), 2u);
  EXPECT_EQ(inst.fleet()[1].multiplicity, std::optional<std::size_t>(4));

  write("gen.vrp", a.out);
  const Outcome v = cli({"validate", path("gen.vrp")});
  EXPECT_EQ(v.code, kExitOk);
  EXPECT_EQ(v.out.rfind("ok:", 0), 0u);
}

TEST_F(CliTest, ValidateListsViolations) {
  const Outcome r = cli({"validate", data_path("bad_triangle.vrp")});
  EXPECT_EQ(r.code, kExitInfeasible);
  EXPECT_NE(r.out.find("violation: triangle"), std::string::npos) << r.out;
}

TEST_F(CliTest, OracleMatchesLibrary) {
  const Outcome r = cli({"oracle", data_path("i1.vrp")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(parse_solution(r.out).pi, 1u);
  const Outcome capped = cli({"oracle", data_path("line.vrp"), "--max-n", "4"});
  EXPECT_EQ(capped.code, kExitUsage);
  EXPECT_NE(capped.err.find("resource limit"), std::string::npos);
}

TEST_F(CliTest, ReduceWritesGadgetAndPaddedSolution) {
  const auto inst = parse_instance(read_text(data_path("i1.vrp")));
  RoutingSolution sol;
  sol.algorithm = "hand";
  sol.tours.push_back({make_tour(inst, {0, 1, 0}), 0});
  sol.tours.push_back({make_tour(inst, {0, 3, 2, 0}), 0});
  normalize_solution(sol);
  write("base.json", write_solution(sol, inst));

  const Outcome r = cli({"reduce", data_path("i1.vrp"), path("base.json"), "--alpha", "0.5", "-o",
                     path("gadget.vrp"), "--solution-out", path("padded.json")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto gadget = parse_instance(read_text(path("gadget.vrp")));
  EXPECT_GT(gadget.size(), inst.size());
  const Outcome v =
      cli({"verify", path("gadget.vrp"), path("padded.json"), "--alpha", "0.999999999"});
  EXPECT_EQ(v.code, kExitOk) << v.out;
}

TEST_F(CliTest, CompareReportsAllThree) {
  const Outcome r = cli({"compare", data_path("star_matrix.vrp")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("min-nt"), std::string::npos);
  EXPECT_NE(r.out.find("bdcvrp"), std::string::npos);
  EXPECT_NE(r.out.find("oracle   pi"), std::string::npos);
  const Outcome skipped = cli({"compare", data_path("line.vrp"), "--max-n", "3"});
  EXPECT_NE(skipped.out.find("skipped"), std::string::npos);
}

TEST_F(CliTest, RepeatedSolveIsByteIdentical) {
  for (const char* alg : {"min-nt", "min-nht", "bdcvrp"}) {
    const Outcome a = cli({"solve", data_path("star_matrix.vrp"), "--alg", alg});
    const Outcome b = cli({"solve", data_path("star_matrix.vrp"), "--alg", alg});
    ASSERT_EQ(a.code, kExitOk) << a.err;
    EXPECT_EQ(a.out, b.out);
  }
}

}  // namespace
}  // namespace cdvrp
