#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <string>

namespace {

struct CliRun {
  int exit_code = -1;
  std::string out;
};

CliRun btk(const std::string& args, const std::string& env = "BTK_P=") {
  CliRun r;
  FILE* pipe = popen((env + " " + std::string(BTK_CLI_PATH) + " " + args + " 2>/dev/null").c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buffer;
  std::size_t n;
  while ((n = std::fread(buffer.data(), 1, buffer.size(), pipe)) > 0) r.out.append(buffer.data(), n);
  const int status = pclose(pipe);
  if (WIFEXITED(status)) r.exit_code = WEXITSTATUS(status);
  return r;
}

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t hits = 0;
  for (std::size_t pos = 0; (pos = text.find(needle, pos)) != std::string::npos; pos += needle.size()) ++hits;
  return hits;
}

const std::string graft = std::string(BTK_FIXTURE_DIR) + "/graft_p5_e1.json";

TEST(Cli, DecomposeIwasawa) {
  const CliRun r = btk("decompose --kind iwasawa --p 5 --matrix '1,0;1/5,1'");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_NE(r.out.find("\"verified\": true"), std::string::npos);
}

TEST(Cli, BallDotHasTenVertices) {
  const CliRun r = btk("ball --p 2 --radius 2 --format dot");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(count(r.out, "label="), 10u);
}

TEST(Cli, VerifyCartanDistance) { EXPECT_EQ(btk("verify --suite cartan-distance --p 3 --radius 4 --seed 1").exit_code, 0); }

TEST(Cli, PrimeFromEnvironment) {
  EXPECT_EQ(btk("distance --p 3 --x '(0;0)' --y '(-1;1/7)'").exit_code, 2);
  const CliRun env = btk("distance --x '(0;0)' --y '(-1;1/7)'", "BTK_P=7");
  EXPECT_EQ(env.exit_code, 0);
  EXPECT_NE(env.out.find("\"distance\": 1"), std::string::npos);
}

TEST(Cli, GraftFixture) {
  const CliRun violation = btk("ghat-test --p 5 --level 1 --file " + graft);
  EXPECT_EQ(violation.exit_code, 1);
  EXPECT_NE(violation.out.find("VIOLATION"), std::string::npos);
  const CliRun level0 = btk("ghat-test --p 5 --level 0 --file " + graft);
  EXPECT_EQ(level0.exit_code, 0);
  EXPECT_NE(level0.out.find("LOCALLY_PGL2"), std::string::npos);
}

TEST(Cli, MalformedInputExitsTwo) {
  EXPECT_EQ(btk("decompose --kind iwasawa --p 4 --matrix '1,0;0,1'").exit_code, 2);
  EXPECT_EQ(btk("verify --suite nope --seed 1").exit_code, 2);
  EXPECT_EQ(btk("verify --suite regularity").exit_code, 2);
  EXPECT_EQ(btk("decompose --kind levi --p 3 --matrix '1,0;1,1'").exit_code, 2);
  EXPECT_EQ(btk("distance --p 3 --x '(0;1)' --y '(0;0)'").exit_code, 2);
  EXPECT_EQ(btk("decompose --kind iwasawa --p 3 --matrix '1,1;1,1'").exit_code, 2);
}

TEST(Cli, SameArgumentsSameOutput) {
  const std::string args = "verify --suite decomp-recompose --p 3 --seed 42";
  EXPECT_EQ(btk(args).out, btk(args).out);
}

}  // namespace
