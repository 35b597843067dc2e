#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "eos/cli.hpp"
#include "test_support.hpp"

using namespace eos;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "eos");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("eos_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                        "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  fs::path dir_;
};

}  // namespace

TEST(CliRank, Values) {
  EXPECT_EQ(run({"rank", "w"}).out, "1\n");
  EXPECT_EQ(run({"rank", "sum(w; ; w)"}).out, "2\n");
  EXPECT_EQ(run({"rank", "1"}).out, "0\n");
  EXPECT_EQ(run({"rank", "0"}).out, "0\n");
  EXPECT_EQ(run({"rank", "sum(w; ; ^0)"}).out, "w\n");
  auto bad = run({"rank", "sum(w; w"});
  EXPECT_EQ(bad.code, 2);
  EXPECT_FALSE(bad.err.empty());
  EXPECT_EQ(run({"rank", "eta"}).code, 2);
}

TEST_F(CliTest, ConstructThenVerify) {
  auto c = run({"construct", "--system", "odometer", "--x", "0", "--y", "1/3", "--target", "sum(w*; ; z)", "--depth",
                "4", "--out", path("a.json")});
  ASSERT_EQ(c.code, 0) << c.err;
  EXPECT_NE(c.out.find("result=pass"), std::string::npos);
  auto v = run({"verify", path("a.json")});
  EXPECT_EQ(v.code, 0) << v.out;
  EXPECT_NE(v.out.find("realization=pass"), std::string::npos);
  auto vj = run({"verify", "--json", path("a.json")});
  EXPECT_EQ(vj.code, 0);
  EXPECT_TRUE(json::parse(vj.out).at("result").get<bool>());
}

TEST_F(CliTest, OrbitChainArtifact) {
  auto c = run({"construct", "--x", "0", "--y", "5", "--target", "fin(4)", "--out", path("o.json")});
  ASSERT_EQ(c.code, 0) << c.err;
  auto j = json::parse(slurp(path("o.json")));
  EXPECT_EQ(j.at("stages").at(0).at("points").size(), 6u);
  EXPECT_EQ(run({"verify", path("o.json")}).code, 0);
}

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(run({"construct", "--x", "0", "--y", "7", "--target", "w", "--out", path("p.json")}).code, 3);
  EXPECT_EQ(run({"construct", "--x", "0", "--y", "1/3", "--target", "fin(4)", "--out", path("p.json")}).code, 3);
  EXPECT_EQ(run({"construct", "--target", "sum(", "--out", path("p.json")}).code, 2);
  EXPECT_EQ(run({"construct", "--y", "1/2", "--out", path("p.json")}).code, 2);
  EXPECT_EQ(run({"construct", "--system", "tent", "--out", path("p.json")}).code, 2);
  EXPECT_EQ(run({"construct", "--eps", "list:1/2,1/4", "--depth", "3", "--out", path("p.json")}).code, 3);
  EXPECT_EQ(run({"verify", path("missing.json")}).code, 2);
  EXPECT_EQ(run({"bogus"}).code, 2);
}

TEST_F(CliTest, ByteIdenticalArtifacts) {
  std::vector<std::string> args{"construct", "--target", "sum(fin; w, w*, z)", "--depth", "4", "--seed", "3", "--out"};
  auto a = args, b = args;
  a.push_back(path("a.json"));
  b.push_back(path("b.json"));
  ASSERT_EQ(run(a).code, 0);
  ASSERT_EQ(run(b).code, 0);
  EXPECT_EQ(slurp(path("a.json")), slurp(path("b.json")));
}

TEST_F(CliTest, PerturbedAndTruncatedArtifacts) {
  ASSERT_EQ(run({"construct", "--target", "w", "--depth", "4", "--out", path("a.json")}).code, 0);
  auto j = json::parse(slurp(path("a.json")));
  auto& pts = j["stages"][3]["points"];
  pts[2] = "1024/3";
  std::ofstream(path("bad.json")) << j.dump(1);
  auto v = run({"verify", path("bad.json")});
  EXPECT_EQ(v.code, 1);
  EXPECT_NE(v.out.find("=fail"), std::string::npos);

  std::string text = slurp(path("a.json"));
  std::ofstream(path("cut.json")) << text.substr(0, text.size() / 2);
  EXPECT_EQ(run({"verify", path("cut.json")}).code, 2);
  std::ofstream(path("junk.json")) << R"({"system": "odometer", "stages": 3})";
  EXPECT_EQ(run({"verify", path("junk.json")}).code, 2);
}

TEST_F(CliTest, RotationSystem) {
  auto c = run({"construct", "--system", "rotation:golden", "--x", "(0, 0)", "--y", "(1/3, 0)", "--target", "w",
                "--depth", "4", "--out", path("r.json")});
  ASSERT_EQ(c.code, 0) << c.err;
  EXPECT_EQ(run({"verify", path("r.json")}).code, 0);
}

TEST(CliDemo, Runs) {
  auto d = run({"demo"});
  EXPECT_EQ(d.code, 0);
  EXPECT_NE(d.out.find("verified"), std::string::npos);
  EXPECT_EQ(d.out.find("FAILED"), std::string::npos);
}

#ifdef EOS_CLI_PATH
TEST_F(CliTest, BinaryEndToEnd) {
  std::string cmd = std::string(EOS_CLI_PATH) + " construct --target 'sum(w; ; w)' --depth 3 --out " + path("e.json") +
                    " > /dev/null";
  EXPECT_EQ(std::system(cmd.c_str()), 0);
  std::string ver = std::string(EOS_CLI_PATH) + " verify " + path("e.json") + " > /dev/null";
  EXPECT_EQ(std::system(ver.c_str()), 0);
  std::string bad = std::string(EOS_CLI_PATH) + " rank 'sum(' 2> /dev/null";
  int st = std::system(bad.c_str());
  EXPECT_EQ(WEXITSTATUS(st), 2);
}
#endif
