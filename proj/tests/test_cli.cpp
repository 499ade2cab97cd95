// Copyright 2026 The PNC Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "pnc/cli.hpp"
#include "pnc/scenario.hpp"

namespace pnc::cli {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  for (std::string cell; std::getline(ss, cell, ',');) out.push_back(cell);
  return out;
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("pnc_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("simulate writes a trace CSV and a summary") {
  TempDir dir;
  const auto csv = (dir.path / "t.csv").string();
  const auto summary = (dir.path / "s.json").string();
  const auto r = invoke({"simulate", "--scenario", "builtin:generic", "--policy", "mw", "--slots", "100",
                         "--seed", "7", "--out", csv, "--summary", summary});
  REQUIRE(r.code == kExitOk);
  const auto rows = lines(slurp(csv));
  REQUIRE(rows.size() == 101);
  CHECK(rows[0] == "t,sigma,q_1,q_2,u_1,u_2,u_3,s_1,s_2,s_3,a_1,a_2");
  for (const auto& row : rows) CHECK(split(row).size() == 12);
  CHECK(slurp(csv).find('\r') == std::string::npos);
  CHECK(std::stoi(split(rows[100])[2]) >= 10);  // q_1 grows under MaxWeight at 2.4
  const std::string js = slurp(summary);
  CHECK(js.find("\"avg_queue\"") != std::string::npos);
  CHECK(js.find("\"final_queue\"") != std::string::npos);
  CHECK(js.find("\"slope\"") != std::string::npos);
}

TEST_CASE("repeated invocations are byte-identical") {
  TempDir dir;
  const auto a = (dir.path / "a.csv").string();
  const auto b = (dir.path / "b.csv").string();
  const std::vector<std::string> base = {"simulate", "--scenario", "builtin:natural", "--policy", "qpnc",
                                         "--horizon", "3", "--slots", "300", "--seed", "11", "--out"};
  auto args_a = base;
  args_a.push_back(a);
  auto args_b = base;
  args_b.push_back(b);
  REQUIRE(invoke(args_a).code == 0);
  REQUIRE(invoke(args_b).code == 0);
  CHECK(slurp(a) == slurp(b));
}

TEST_CASE("qpnc with H = 1 reproduces MaxWeight queues") {
  TempDir dir;
  const auto mw = (dir.path / "mw.csv").string();
  const auto lp = (dir.path / "lp.csv").string();
  REQUIRE(invoke({"simulate", "--scenario", "builtin:generic", "--policy", "mw", "--slots", "300", "--seed", "3",
                  "--out", mw}).code == 0);
  REQUIRE(invoke({"simulate", "--scenario", "builtin:generic", "--policy", "lpnc", "--horizon", "1", "--slots",
                  "300", "--seed", "3", "--out", lp}).code == 0);
  CHECK(slurp(mw) == slurp(lp));
}

TEST_CASE("a scenario file round-trips through the CLI") {
  TempDir dir;
  const auto file = (dir.path / "natural.json").string();
  {
    std::ofstream out(file);
    out << dump_scenario(natural_scenario());
  }
  const auto a = (dir.path / "a.csv").string();
  const auto b = (dir.path / "b.csv").string();
  REQUIRE(invoke({"simulate", "--scenario", file, "--slots", "200", "--seed", "2", "--out", a}).code == 0);
  REQUIRE(invoke({"simulate", "--scenario", "builtin:natural", "--slots", "200", "--seed", "2", "--out", b}).code == 0);
  CHECK(slurp(a) == slurp(b));
}

TEST_CASE("configuration errors exit with 2 and write nothing") {
  TempDir dir;
  const auto csv = dir.path / "never.csv";
  auto r = invoke({"simulate", "--scenario", (dir.path / "missing.json").string(), "--out", csv.string()});
  CHECK(r.code == kExitInvalidConfig);
  CHECK_FALSE(r.err.empty());
  CHECK_FALSE(fs::exists(csv));

  CHECK(invoke({"simulate", "--scenario", "builtin:generic", "--policy", "best"}).code == kExitInvalidConfig);
  CHECK(invoke({"simulate", "--scenario", "builtin:generic", "--horizon", "2", "--tau-hard", "3"}).code ==
        kExitInvalidConfig);
  CHECK(invoke({"simulate", "--scenario", "builtin:generic", "--a1", "9"}).code == kExitInvalidConfig);
  CHECK(invoke({"simulate", "--scenario", "builtin:generic", "--alternating"}).code == kExitInvalidConfig);
  CHECK(invoke({"simulate", "--bogus"}).code == kExitInvalidConfig);
  CHECK(invoke({}).code == kExitInvalidConfig);
  CHECK(invoke({"sweep", "--scenario", "builtin:generic", "--a1", "3:1:0.5"}).code == kExitInvalidConfig);
  CHECK(invoke({"sweep", "--scenario", "builtin:generic", "--a1", "0:1:0"}).code == kExitInvalidConfig);
  CHECK(invoke({"compare", "--scenario", "builtin:natural", "--policies", "mw,xyz:2"}).code == kExitInvalidConfig);
}

TEST_CASE("sweep writes the region CSV in row-major order") {
  TempDir dir;
  const auto csv = (dir.path / "region.csv").string();
  const auto r = invoke({"sweep", "--scenario", "builtin:generic", "--policy", "mw", "--a1", "1.5:2.5:0.5", "--a2",
                         "0:0.5:0.5", "--slots", "2000", "--seeds", "2", "--out", csv});
  REQUIRE(r.code == kExitOk);
  const auto rows = lines(slurp(csv));
  REQUIRE(rows.size() == 7);
  CHECK(rows[0] == "a1,a2,stable_fraction,stable");
  CHECK(rows[1].rfind("1.5,0,", 0) == 0);
  CHECK(rows[3].rfind("2.5,0,", 0) == 0);
  CHECK(rows[4].rfind("1.5,0.5,", 0) == 0);
  CHECK(r.out.find("last stable a1") != std::string::npos);
}

TEST_CASE("compare writes one row per policy and buffer") {
  TempDir dir;
  const auto csv = (dir.path / "summary.csv").string();
  const auto r = invoke({"compare", "--scenario", "builtin:natural", "--policies", "mw,qpnc:2,qpnc:2", "--slots",
                         "300", "--seeds", "2", "--out", csv});
  REQUIRE(r.code == kExitOk);
  const auto rows = lines(slurp(csv));
  REQUIRE(rows.size() == 1 + 3 * 3);
  CHECK(rows[0] == "policy,horizon,buffer,avg_queue");
  CHECK(rows[1].rfind("mw,1,1,", 0) == 0);
  for (int b = 0; b < 3; ++b) CHECK(split(rows[4 + b])[3] == split(rows[7 + b])[3]);

  const auto alt = invoke({"compare", "--scenario", "builtin:natural", "--alternating", "--policies", "mw,qpnc:3",
                           "--slots", "600", "--seeds", "2"});
  CHECK(alt.code == kExitOk);
}

TEST_CASE("range and policy parsing") {
  const auto v = parse_range("0:3.5:0.25");
  CHECK(v.size() == 15);
  CHECK(v.back() == doctest::Approx(3.5));
  CHECK(parse_range("0:0:1").size() == 1);
  CHECK_THROWS(parse_range("1:2"));
  CHECK_THROWS(parse_range("a:b:c"));
  const auto cfgs = parse_policy_list("mw,qpnc:3,lpnc", 2, 2, false);
  REQUIRE(cfgs.size() == 3);
  CHECK(cfgs[1].H == 3);
  CHECK(cfgs[1].tau_hard == 2);
  CHECK(cfgs[2].H == 2);
  CHECK(parse_policy_list("qpnc:3", 2, 2, true)[0].tau_hard == 3);
}

}  // namespace pnc::cli
