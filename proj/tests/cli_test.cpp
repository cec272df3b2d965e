#include <gtest/gtest.h>

#include <cstdlib>

#include "cli.hpp"

using namespace etale::cli;

namespace {

std::string data(const std::string& name) { return std::string(ETALE_DATA_DIR) + "/" + name; }

RunConfig config() {
  RunConfig c;
  c.budgets = etale::Budgets{};
  return c;
}

}  // namespace

TEST(Cli, ValidateAcceptsEveryShippedInstance) {
  for (const char* name : {"sierpinski.json", "chain3.json", "homeo_discrete2.json", "homeo_sierpinski.json",
                           "group_sheaf_z2_discrete2.json", "pair_groupoid.json", "constant_presheaf_sierpinski.json"}) {
    const auto r = cmd_validate(data(name), config());
    EXPECT_EQ(r.exit_code, kExitPass) << name << "\n" << r.report.dump(2);
  }
}

TEST(Cli, InputErrorsExitWithTwo) {
  EXPECT_EQ(cmd_validate(data("malformed.json"), config()).exit_code, kExitInput);
  EXPECT_EQ(cmd_validate(data("not_closed_under_union.json"), config()).exit_code, kExitInput);
  EXPECT_EQ(cmd_validate(data("does_not_exist.json"), config()).exit_code, kExitInput);
  EXPECT_EQ(cmd_check(data("sierpinski.json"), "def21", config()).exit_code, kExitInput);
  EXPECT_EQ(cmd_check(data("homeo_sierpinski.json"), "prop45", config()).exit_code, kExitInput);
}

TEST(Cli, ConditionSuiteOnHomeoL) {
  EXPECT_EQ(cmd_check(data("homeo_discrete2.json"), "def21", config()).exit_code, kExitPass);
  const auto r = cmd_check(data("homeo_sierpinski.json"), "def21", config());
  EXPECT_EQ(r.exit_code, kExitFail);
  std::vector<std::string> failing;
  for (const auto& c : r.report["checks"])
    if (c["status"] != "pass") failing.push_back(c["name"]);
  EXPECT_EQ(failing, std::vector<std::string>{"(2)"});
}

TEST(Cli, SuitesOnShippedInstances) {
  EXPECT_EQ(cmd_check(data("pair_groupoid.json"), "prop11", config()).exit_code, kExitPass);
  EXPECT_EQ(cmd_check(data("unit_groupoid_sierpinski.json"), "prop11", config()).exit_code, kExitPass);
  EXPECT_EQ(cmd_check(data("homeo_sierpinski.json"), "prop24", config()).exit_code, kExitPass);
  EXPECT_EQ(cmd_check(data("trivial_group_sheaf_sierpinski.json"), "prop25", config()).exit_code, kExitPass);
  EXPECT_EQ(cmd_check(data("homeo_discrete2_truncated.json"), "prop45", config()).exit_code, kExitPass);
  EXPECT_EQ(cmd_check(data("constant_group_presheaf_z2_discrete2.json"), "prop45", config()).exit_code, kExitPass);
  EXPECT_EQ(cmd_check(data("homeo_discrete2_truncated.json"), "universality", config()).exit_code, kExitPass);
  EXPECT_EQ(cmd_check(data("constant_presheaf_sierpinski.json"), "universality", config()).exit_code, kExitPass);
}

TEST(Cli, RoundTrips) {
  EXPECT_EQ(cmd_roundtrip(data("pair_groupoid.json"), "g2p2g", config()).exit_code, kExitPass);
  EXPECT_EQ(cmd_roundtrip(data("homeo_sierpinski.json"), "p2g2p", config()).exit_code, kExitPass);
  EXPECT_EQ(cmd_roundtrip(data("group_sheaf_z2_discrete2.json"), "p2g2p", config()).exit_code, kExitPass);
  const auto bad = cmd_roundtrip(data("indiscrete_z2_groupoid.json"), "g2p2g", config());
  EXPECT_EQ(bad.exit_code, kExitFail);
  EXPECT_EQ(bad.report["checks"][0]["details"]["kind"], "NotEtale");
}

TEST(Cli, BudgetOverrideFromEnvironment) {
  ::setenv("ETALE_ENUM_HOM_BUDGET", "1", 1);
  RunConfig c;
  ::unsetenv("ETALE_ENUM_HOM_BUDGET");
  EXPECT_EQ(c.budgets.enum_hom_size, 1u);
  const auto r = cmd_check(data("homeo_discrete2_truncated.json"), "universality", c);
  EXPECT_EQ(r.exit_code, kExitFail);
  bool skipped = false;
  for (const auto& e : r.report["checks"]) skipped = skipped || e["status"] == "skipped";
  EXPECT_TRUE(skipped);
}

TEST(Cli, DotArtifacts) {
  const auto space = cmd_dot(data("sierpinski.json"), "space", config());
  EXPECT_EQ(space.exit_code, kExitPass);
  EXPECT_NE(space.artifact.find("1 -> 0"), std::string::npos);
  EXPECT_EQ(cmd_dot(data("pair_groupoid.json"), "groupoid", config()).exit_code, kExitPass);
  EXPECT_EQ(cmd_dot(data("constant_presheaf_sierpinski.json"), "etale", config()).exit_code, kExitPass);
  EXPECT_EQ(cmd_dot(data("sierpinski.json"), "groupoid", config()).exit_code, kExitInput);
}

TEST(Cli, CorpusDigestIsDeterministic) {
  auto c = config();
  c.max_points = 2;
  c.random_groupoids = 10;
  auto a = cmd_corpus(c);
  auto b = cmd_corpus(c);
  EXPECT_EQ(a.exit_code, kExitPass) << a.report["summary"].dump(2);
  a.report.erase("timings");
  b.report.erase("timings");
  EXPECT_EQ(digest(a.report), digest(b.report));
  c.seed += 1;
  auto other = cmd_corpus(c);
  other.report.erase("timings");
  EXPECT_NE(digest(a.report), digest(other.report));
}

TEST(Cli, CorpusRejectsOversizedSpaces) {
  auto c = config();
  c.max_points = 9;
  EXPECT_EQ(cmd_corpus(c).exit_code, kExitInput);
}
