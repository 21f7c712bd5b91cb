#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include <gtest/gtest.h>
#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct Outcome {
  int status = -1;
  std::string out;
};

Outcome lstord(const std::string& args) {
  const std::string cmd = std::string(LSTORD_CLI_PATH) + " " + args + " 2>/dev/null";
  Outcome r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

class Cli : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = fs::temp_directory_path() / "lstord_cli_test";
    fs::create_directories(dir_);
    std::mt19937_64 eng(17);
    std::normal_distribution<double> z;
    std::ofstream x(dir_ / "x.csv"), y(dir_ / "y.csv"), g(dir_ / "g.csv");
    x << "a,b\n";
    y << "a,b\n";
    g << "arm,a,b\n";
    for (int i = 0; i < 25; ++i) {
      const double x1 = z(eng), x2 = z(eng), y1 = z(eng) + 10.0, y2 = z(eng) + 10.0;
      x << x1 << "," << x2 << "\n";
      y << y1 << "," << y2 << "\n";
      g << "ctl," << x1 << "," << x2 << "\ntrt," << y1 << "," << y2 << "\n";
    }
    std::ofstream(dir_ / "na.csv") << "a,b\n1,2\n3,NA\n";
  }
  static std::string path(const std::string& name) { return (dir_ / name).string(); }
  static std::string xy() { return "--x " + path("x.csv") + " --y " + path("y.csv") + " --header"; }

  static fs::path dir_;
};

fs::path Cli::dir_;

}  // namespace

TEST_F(Cli, SameSeedGivesIdenticalOutput) {
  const std::string args = "test " + xy() + " --replicates 99 --seed 5";
  const Outcome a = lstord(args), b = lstord(args);
  ASSERT_EQ(a.status, 0);
  EXPECT_EQ(a.out, b.out);
  const Outcome c = lstord("ci " + xy() + " --replicates 99 --seed 5");
  ASSERT_EQ(c.status, 0);
  EXPECT_EQ(c.out, lstord("ci " + xy() + " --replicates 99 --seed 5").out);
}

TEST_F(Cli, SeparatedSamplesGiveSmallestPValue) {
  const Outcome r = lstord("test " + xy() + " --replicates 99 --seed 1 --format machine");
  ASSERT_EQ(r.status, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["p_value"].get<double>(), 0.01);
  EXPECT_EQ(j["psi_at_direction"].get<double>(), 1.0);
  EXPECT_EQ(j["n"].get<int>(), 25);
  EXPECT_EQ(j["direction"].size(), 2u);
}

TEST_F(Cli, GroupedInputMatchesTwoFiles) {
  const Outcome a = lstord("estimate " + xy() + " --format machine");
  const Outcome b = lstord("estimate --data " + path("g.csv") + " --group arm --header --format machine");
  ASSERT_EQ(a.status, 0);
  ASSERT_EQ(b.status, 0);
  const auto ja = nlohmann::json::parse(a.out), jb = nlohmann::json::parse(b.out);
  EXPECT_EQ(ja["direction"], jb["direction"]);
  EXPECT_EQ(ja["psi"], jb["psi"]);
  EXPECT_EQ(jb["x_label"], "ctl");
}

TEST_F(Cli, ExitCodes) {
  EXPECT_EQ(lstord("").status, 1);
  EXPECT_EQ(lstord("estimate --x " + path("x.csv")).status, 1);
  EXPECT_EQ(lstord("test " + xy() + " --replicates 50").status, 1);
  EXPECT_EQ(lstord("test " + xy() + " --method nope").status, 1);
  EXPECT_EQ(lstord("estimate --x " + path("na.csv") + " --y " + path("y.csv") + " --header").status, 2);
  EXPECT_EQ(lstord("estimate --x " + path("missing.csv") + " --y " + path("y.csv")).status, 2);
  EXPECT_EQ(lstord("verify upper-sets --p 9").status, 3);
  EXPECT_EQ(lstord("simulate --study estimation --p 3 --delta 3,2,1 --rho 0.5 --runs 2").status, 3);
}

TEST_F(Cli, ManifestReproducesRun) {
  const std::string m = path("run.manifest");
  const Outcome a = lstord("test " + xy() + " --method integral --replicates 99 --seed 9 --save-manifest " + m);
  ASSERT_EQ(a.status, 0);
  const Outcome b = lstord("--manifest " + m);
  ASSERT_EQ(b.status, 0);
  EXPECT_EQ(a.out, b.out);
  const Outcome c = lstord("--manifest " + m + " --seed 10");
  EXPECT_EQ(c.status, 0);
  EXPECT_NE(c.out.find("seed=10"), std::string::npos);
}

TEST_F(Cli, OutFileMatchesStdout) {
  const std::string o = path("report.txt");
  const Outcome a = lstord("estimate " + xy());
  ASSERT_EQ(lstord("estimate " + xy() + " --out " + o).status, 0);
  std::ifstream in(o);
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(a.out, ss.str());
}

TEST_F(Cli, VerifyThreePointExample) {
  const Outcome r = lstord("verify example21");
  ASSERT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("linear_order=no_violation_found"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("multivariate_order=violated"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("witness_generators=(0 1);(1 0)"), std::string::npos) << r.out;
}

TEST_F(Cli, VerifyUpperSetCount) {
  const Outcome r = lstord("verify upper-sets --p 4 --format machine");
  ASSERT_EQ(r.status, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["target"], "upper-sets");
  EXPECT_NE(r.out.find("166"), std::string::npos) << r.out;
}

TEST_F(Cli, SimulateMachineReportParses) {
  const Outcome r = lstord("simulate --study test --p 2 --n 10 --runs 3 --replicates 99 --delta 0.5,0.5 "
                       "--format machine --seed 2");
  ASSERT_EQ(r.status, 0);
  const auto j = nlohmann::json::parse(r.out);
  const auto& rows = j["tables"]["rows"];
  EXPECT_EQ(rows["columns"][2], "metric");
  ASSERT_FALSE(rows["rows"].empty());
  EXPECT_EQ(rows["rows"][0][0], j["config_hash"]);
}
