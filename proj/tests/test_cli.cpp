/*
 * Copyright 2026 The nla Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <memory>
#include <string>
#include <sys/wait.h>

#include "nla/io.hpp"
#include "test_util.hpp"

using namespace nla;

namespace {

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args) {
  std::string cmd = std::string(NLA_CLI) + " " + args + " 2>/dev/null";
  std::unique_ptr<FILE, int (*)(FILE*)> pipe(popen(cmd.c_str(), "r"), pclose);
  std::string out;
  std::array<char, 4096> buf;
  size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), pipe.get())) > 0) out.append(buf.data(), got);
  int status = pclose(pipe.release());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string fixture(const std::string& name) { return std::string(NLA_FIXTURES) + "/" + name; }

bool contains(const std::string& s, const std::string& part) { return s.find(part) != std::string::npos; }

}  // namespace

TEST(Cli, Resultant) {
  auto r = run("resultant " + fixture("qmap_generic.json"));
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "-3\n");
  EXPECT_EQ(run("resultant " + fixture("zero_form.json")).out, "0\n");
  EXPECT_EQ(run("resultant " + fixture("qmap.json")).out, "-4*a*b + 1\n");
  EXPECT_EQ(run("resultant " + fixture("qmap.json") + " --set a=1/4 --set b=1").out, "0\n");
}

TEST(Cli, Complanart) {
  auto q = run("complanart " + fixture("quadratic.json"));
  EXPECT_EQ(q.code, 0);
  EXPECT_TRUE(contains(q.out, "complanart: 4*a*c - b^2\n"));
  auto lin = run("complanart " + fixture("linear.json"));
  EXPECT_TRUE(contains(lin.out, "shortcut"));
  EXPECT_TRUE(contains(lin.out, "complanart: 1\n"));
  auto pair = run("complanart " + fixture("conic_pair.json") + " --set a=0 --set b=1");
  EXPECT_TRUE(contains(pair.out, "complanart: 1\n"));  // (1 - 2a)^4 (1 - 2b)^4 at a = 0, b = 1
  auto oc = run("complanart " + fixture("cubic.json") + " --oracle-check a=1,b=2,c=-3,d=5");
  EXPECT_EQ(oc.code, 0);
  EXPECT_TRUE(contains(oc.out, "oracle:"));
}

TEST(Cli, Eigen) {
  auto r = run("eigen " + fixture("qmap_generic.json"));
  ASSERT_EQ(r.code, 0);
  auto j = json::parse(r.out);
  EXPECT_EQ(j["found_count"], 3);
  bool minus_one = false;
  for (const auto& e : j["eigenvectors"])
    if (e["components"] == json::array({"-1", "-1"})) minus_one = true;
  EXPECT_TRUE(minus_one);

  auto u = json::parse(run("eigen " + fixture("qmap_unit.json")).out);
  EXPECT_TRUE(u["is_unit_map"].get<bool>());
  EXPECT_EQ(u["family"]["mu"], "x1 + x2");
  EXPECT_EQ(u["family"]["unitary_generator"], json::array({"C", "-C + 1"}));

  auto c = json::parse(run("eigen " + fixture("qmap.json") + " --charpoly").out);
  EXPECT_TRUE(c["characteristic_polynomial"]["verified"].get<bool>());
  EXPECT_EQ(c["characteristic_polynomial"]["factors"].size(), 3u);
  EXPECT_EQ(c["characteristic_polynomial"]["remainder"], "-4*a*b + 1");

  auto k = json::parse(run("eigen " + fixture("qmap_degenerate.json") + " --canonical 1,3 --complanart").out);
  EXPECT_EQ(k["canonical_form"]["form"], "unitary-zero");
  EXPECT_TRUE(k["canonical_form"]["fixed_components_ok"].get<bool>());
  EXPECT_TRUE(k.contains("eigen_complanart"));
}

TEST(Cli, Stability) {
  auto k = run("stability " + fixture("kinetics.json"));
  EXPECT_EQ(k.code, 0);
  EXPECT_TRUE(contains(k.out, "verdict: unstable-real\n"));
  EXPECT_TRUE(contains(run("stability " + fixture("no_unitary.json")).out, "verdict: indeterminate\n"));
  EXPECT_TRUE(contains(run("stability " + fixture("qmap_generic.json")).out, "verdict: unstable-real\n"));
  // (10 - 3 - 1)^2 - 8 * 2 > 0 flips below K24 ~ 8.47
  EXPECT_TRUE(contains(run("stability " + fixture("kinetics.json") + " --set K24=6").out, "verdict: unstable-complex\n"));
}

TEST(Cli, Phase) {
  const std::string svg = ::testing::TempDir() + "/portrait.svg";
  const std::string csv = ::testing::TempDir() + "/portrait.csv";
  auto r = run("phase " + fixture("qmap_generic.json") + " --svg " + svg + " --csv " + csv + " --steps 500");
  ASSERT_EQ(r.code, 0);
  auto j = json::parse(r.out);
  int dirs = 0;
  for (const auto& a : j["annotations"]) dirs += a["kind"] == "eigen-direction";
  EXPECT_EQ(dirs, 3);
  std::ifstream s(svg);
  std::string head;
  std::getline(s, head);
  EXPECT_TRUE(contains(head, "<svg"));
  std::ifstream c(csv);
  std::getline(c, head);
  EXPECT_EQ(head, "trajectory,t,x1,x2");

  auto d = json::parse(run("phase " + fixture("qmap_double.json") + " --steps 200").out);
  bool flagged = false;
  for (const auto& a : d["annotations"])
    if (a["kind"] == "double-eigenvector") flagged = a["one_sided"].get<bool>() && a["vector"][1] == 0.0;
  EXPECT_TRUE(flagged);
  auto z = json::parse(run("phase " + fixture("qmap_degenerate.json") + " --steps 200").out);
  bool line = false;
  for (const auto& a : z["annotations"]) line = line || a["kind"] == "stationary-line";
  EXPECT_TRUE(line);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run("eigen /nonexistent.json").code, 2);
  const std::string bad = ::testing::TempDir() + "/bad.json";
  std::ofstream(bad) << R"({"kind": "map", "variables": ["x1", "x2"], "polynomials": ["x1^2 + x2", "x2^2"]})";
  EXPECT_EQ(run("eigen " + bad).code, 2);
  const std::string big = ::testing::TempDir() + "/big.json";
  std::ofstream(big) << R"({"kind": "map", "variables": ["x1", "x2", "x3", "x4"],
    "polynomials": ["x1^2", "x2^2", "x3^2", "x4^2"]})";
  EXPECT_EQ(run("eigen " + big).code, 3);
  EXPECT_EQ(run("resultant " + fixture("qmap.json") + " --set q=1").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
}

TEST(Cli, DumpRoundTrip) {
  for (const auto* name : {"qmap_degenerate.json", "kinetics.json", "cubic.json", "no_unitary.json"}) {
    auto orig = load_problem(fixture(name));
    auto r = run("resultant " + fixture(name) + " --dump");
    ASSERT_EQ(r.code, 0);
    auto again = problem_from_json(json::parse(r.out));
    EXPECT_EQ(orig, again) << name;
    auto a = orig.parsed(), b = again.parsed();
    EXPECT_EQ(a, b);
  }
}

TEST(Cli, Deterministic) {
  auto a = run("complanart " + fixture("conic_pair.json") + " --seed 99");
  auto b = run("complanart " + fixture("conic_pair.json") + " --seed 99");
  EXPECT_EQ(a.out, b.out);
  EXPECT_TRUE(contains(a.out, "seed 99"));
}
