#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace {

namespace fs = std::filesystem;

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("mctp_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  static int run(const std::string& args) {
    const std::string cmd = std::string("\"") + MCTP_CLI + "\" " + args + " >/dev/null 2>&1";
    const int raw = std::system(cmd.c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  }

  static std::string slurp(const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  fs::path dir_;
};

TEST_F(Cli, GenIsDeterministic) {
  ASSERT_EQ(run("gen --preset small --seed 3 --out " + path("a.json")), 0);
  ASSERT_EQ(run("gen --preset small --seed 3 --out " + path("b.json")), 0);
  ASSERT_EQ(run("gen --preset small --seed 4 --out " + path("c.json")), 0);
  EXPECT_EQ(slurp(path("a.json")), slurp(path("b.json")));
  EXPECT_NE(slurp(path("a.json")), slurp(path("c.json")));
  const auto j = nlohmann::json::parse(slurp(path("a.json")));
  EXPECT_EQ(j["waypoints"].size(), 11u);  // nine plus both depots
  EXPECT_EQ(j["meta"]["seed"], 3);
}

TEST_F(Cli, SolveThenVerify) {
  ASSERT_EQ(run("gen --preset custom --waypoints 4 --targets 3 --coverage-radius 30 --required 0.2 --seed 5 --out " +
                path("i.json")),
            0);
  ASSERT_EQ(run("solve " + path("i.json") + " --case I --oracle --solution " + path("r.json") + " --out " +
                path("res.json")),
            0);
  const auto res = nlohmann::json::parse(slurp(path("res.json")));
  EXPECT_EQ(res["status"], "converged");
  EXPECT_LE(res["dual_bound"].get<double>(), res["initial_bound"].get<double>());
  ASSERT_TRUE(res["oracle"]["primal"].is_number());
  EXPECT_GE(res["dual_bound"].get<double>(), res["oracle"]["primal"].get<double>() - 1e-6);
  EXPECT_EQ(run("verify " + path("i.json") + " " + path("r.json") + " --enforce-coverage"), 0);

  // idling far past the deadline must be rejected
  auto route = nlohmann::json::parse(slurp(path("r.json")));
  const double deadline = nlohmann::json::parse(slurp(path("i.json")))["deadline"].get<double>();
  const int stop = route["nodes"][1].get<int>();
  route["idle"] = nlohmann::json::array({{{"node", stop}, {"time", 2.0 * deadline}}});
  std::ofstream(path("bad.json")) << route.dump();
  EXPECT_EQ(run("verify " + path("i.json") + " " + path("bad.json")), 1);
}

TEST_F(Cli, LimitAndInfeasibleExitCodes) {
  ASSERT_EQ(run("gen --preset small --seed 6 --out " + path("i.json")), 0);
  EXPECT_EQ(run("solve " + path("i.json") + " --iter-limit 0"), 2);
  ASSERT_EQ(run("gen --preset small --seed 6 --case II --deadline-scale 0.0001 --out " + path("tight.json")), 0);
  EXPECT_EQ(run("solve " + path("tight.json") + " --case II"), 3);
}

TEST_F(Cli, InputErrors) {
  EXPECT_EQ(run("solve " + path("missing.json")), 4);
  EXPECT_EQ(run("verify " + path("missing.json") + " " + path("also_missing.json")), 4);
  std::ofstream(path("junk.json")) << "{ not json";
  EXPECT_EQ(run("solve " + path("junk.json")), 4);
  EXPECT_EQ(run("gen --preset tiny"), 4);
  ASSERT_EQ(run("gen --preset small --seed 1 --out " + path("i.json")), 0);
  EXPECT_EQ(run("solve " + path("i.json") + " --case II --ratio-mode sideways"), 4);
}

}  // namespace
