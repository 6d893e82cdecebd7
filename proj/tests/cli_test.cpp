// Copyright 2026 The gamehard Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include <gtest/gtest.h>

#include "gamehard/enumerate.hpp"
#include "gamehard/gphi.hpp"
#include "gamehard/json_io.hpp"
#include "test_util.hpp"

namespace gamehard {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::json;

struct Result {
  int code = -1;
  std::string out;
  Json json() const { return Json::parse(out); }
};

Result run(const std::string& args) {
  const std::string cmd = std::string(GAMEHARD_CLI) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  Result r;
  if (!p) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("gamehard_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string file(const std::string& name, const std::string& text) {
    const auto path = (dir_ / name).string();
    std::ofstream(path) << text;
    return path;
  }

  fs::path dir_;
};

TEST_F(CliTest, ReportEnvelope) {
  auto r = run("--no-timing gphi analyze --query count --cnf " +
               file("a.cnf", "p cnf 1 1\n1 0\n"));
  ASSERT_EQ(r.code, 0);
  auto j = r.json();
  EXPECT_EQ(j["command"], "gphi analyze");
  EXPECT_EQ(j["result"]["count"], 2);
  EXPECT_EQ(j["options"]["query"], "count");
  EXPECT_EQ(j["inputs"]["cnf"]["sha256"].get<std::string>().size(), 64u);
  EXPECT_EQ(j["tool"]["name"], "gamehard");
  EXPECT_FALSE(j.contains("timing"));
  EXPECT_TRUE(run("gphi analyze --query count --cnf " + file("b.cnf", "p cnf 1 1\n1 0\n"))
                  .json()
                  .contains("timing"));
}

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("enumerate --bogus").code, 2);
  EXPECT_EQ(run("enumerate").code, 2);
  EXPECT_EQ(run("enumerate --game " + file("bad.json", "{ not json")).code, 2);
  EXPECT_EQ(run("gphi build --cnf " + file("bad.cnf", "p cnf 1 1\n2 0\n")).code, 2);
  EXPECT_EQ(run("enumerate --game " + dir_.string() + "/missing.json").code, 2);
  EXPECT_EQ(run("gphi analyze --query nonsense --cnf " +
                file("a.cnf", "p cnf 1 1\n1 0\n"))
                .code,
            2);
  EXPECT_EQ(run("--help").code, 0);

  std::vector<std::string> labels;
  for (int i = 0; i < 11; ++i) labels.push_back("s" + std::to_string(i));
  auto big = json_io::to_json(NormalFormGame({labels, labels}));
  EXPECT_EQ(run("enumerate --game " + file("big.json", big.dump())).code, 3);
}

TEST_F(CliTest, SetcoverWithoutCover) {
  auto r = run("setcover solve --instance " +
               file("i.json", R"({"n": 2, "subsets": [[1], [2]], "k": 1})"));
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(r.json()["result"]["cover"].is_null());
  auto b = run("bne solve --instance " + file("i.json", R"({"n": 2, "subsets": [[1], [2]], "k": 1})"));
  ASSERT_EQ(b.code, 0);
  EXPECT_TRUE(b.json()["result"]["profile"].is_null());
  EXPECT_EQ(run("setcover solve --instance " +
                file("j.json", R"({"n": 2, "subsets": [[1]], "k": 1})"))
                .code,
            2);
}

TEST_F(CliTest, BuildThenEnumerateMatchesLibrary) {
  const std::string cnf = "p cnf 2 2\n1 2 0\n-1 2 0\n";
  auto built = run("--no-timing gphi build --cnf " + file("f.cnf", cnf));
  ASSERT_EQ(built.code, 0);
  auto e = run("--no-timing enumerate --game " + file("g.json", built.out));
  ASSERT_EQ(e.code, 0);
  auto g = build_g_phi(parse_dimacs(cnf));
  EXPECT_EQ(e.json()["result"], json_io::to_json(g.game(), enumerate_equilibria(g.game())));
  EXPECT_EQ(e.json()["result"]["equilibria"].size(), 3u);
}

TEST_F(CliTest, RationalsPrintAsFractions) {
  auto mp = NormalFormGame::bimatrix({"H", "T"}, {"H", "T"},
                                     {{Rational(1), Rational(-1)}, {Rational(-1), Rational(1)}},
                                     {{Rational(-1), Rational(1)}, {Rational(1), Rational(-1)}});
  auto r = run("enumerate --game " + file("mp.json", json_io::to_json(mp).dump()));
  ASSERT_EQ(r.code, 0);
  auto eq = r.json()["result"]["equilibria"];
  ASSERT_EQ(eq.size(), 1u);
  EXPECT_EQ(eq[0]["profile"], Json::parse(R"([["1/2","1/2"],["1/2","1/2"]])"));
  EXPECT_EQ(eq[0]["utilities"], Json::parse(R"(["0/1","0/1"])"));
}

TEST_F(CliTest, VerifyRejectsWithWitness) {
  auto bos = NormalFormGame::bimatrix({"o", "f"}, {"o", "f"},
                                      {{Rational(2), Rational(0)}, {Rational(0), Rational(1)}},
                                      {{Rational(1), Rational(0)}, {Rational(0), Rational(2)}});
  const auto game = file("bos.json", json_io::to_json(bos).dump());
  auto r = run("verify --game " + game + " --profile " +
               file("p.json", R"([["1","0"],["0","1"]])"));
  ASSERT_EQ(r.code, 0);
  auto res = r.json()["result"];
  EXPECT_EQ(res["verdict"], "rejected");
  EXPECT_EQ(res["witness"]["strategy"], "f");
  auto ok = run("verify --game " + game + " --profile " +
                file("q.json", R"([["1","0"],["1","0"]])"));
  EXPECT_EQ(ok.json()["result"]["verdict"], "accepted");
  EXPECT_EQ(run("verify --game " + game + " --profile " +
                file("bad.json", R"([["1","1"],["1","0"]])"))
                .code,
            2);
}

TEST_F(CliTest, WorkerCountDoesNotChangeReport) {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 3; ++trial) {
    auto g = testing::random_game(rng, 4, 4, 3);
    const auto path = file("g" + std::to_string(trial) + ".json", json_io::to_json(g).dump());
    auto a = run("--no-timing --jobs 1 enumerate --game " + path);
    auto b = run("--no-timing --jobs 4 enumerate --game " + path);
    ASSERT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
  }
}

TEST_F(CliTest, MarkovFiniteSolve) {
  auto sat = run("markov solve --horizon 6 --cnf " +
                 file("s.cnf", "p cnf 2 2\n1 2 0\n-1 -2 0\n"));
  ASSERT_EQ(sat.code, 0);
  auto j = sat.json()["result"];
  EXPECT_TRUE(j["windowed_satisfiable"].get<bool>());
  EXPECT_FALSE(j["witness"].is_null());
  auto unsat = run("markov solve --horizon 6 --cnf " +
                   file("u.cnf", "p cnf 2 2\n1 0\n-2 0\n"));
  ASSERT_EQ(unsat.code, 0);
  EXPECT_FALSE(unsat.json()["result"]["windowed_satisfiable"].get<bool>());
  EXPECT_TRUE(unsat.json()["result"]["witness"].is_null());
  EXPECT_EQ(run("markov solve --horizon 2 --cnf " +
                file("o.cnf", "p cnf 2 1\n1 0\n"))
                .code,
            2);
  EXPECT_EQ(run("markov build --cnf " + file("odd.cnf", "p cnf 3 1\n1 0\n")).code, 2);
}

TEST_F(CliTest, MarkovCheckInfinite) {
  const auto cnf = file("s.cnf", "p cnf 2 2\n1 2 0\n-1 -2 0\n");
  auto built = run("markov build --cnf " + cnf);
  ASSERT_EQ(built.code, 0);
  const auto game = file("g.json", built.out);
  auto good = run("markov check --game " + game + " --profile " +
                  file("p.json", R"({"player1": {"preamble": [], "cycle": ["t", "f"]},
                                     "player2": {"preamble": [], "cycle": ["t", "f"]}})"));
  ASSERT_EQ(good.code, 0);
  auto j = good.json()["result"];
  EXPECT_TRUE(j["certified_equilibrium"].get<bool>());
  EXPECT_EQ(j["values"], Json::parse(R"(["0/1","0/1"])"));
  EXPECT_TRUE(j["profitable_deviation"].is_null());

  auto bad = run("markov check --game " + game + " --profile " +
                 file("q.json", R"({"player1": {"preamble": [], "cycle": ["t"]},
                                    "player2": {"preamble": [], "cycle": ["t"]}})"));
  ASSERT_EQ(bad.code, 0);
  EXPECT_FALSE(bad.json()["result"]["certified_equilibrium"].get<bool>());
  EXPECT_FALSE(bad.json()["result"]["profitable_deviation"].is_null());

  auto solved = run("markov solve --max-period 2 --cnf " + cnf);
  ASSERT_EQ(solved.code, 0);
  EXPECT_TRUE(solved.json()["result"]["check"]["certified_equilibrium"].get<bool>());
}

}  // namespace
}  // namespace gamehard
