#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <string>

#include "monoshift/json_io.hpp"

using namespace monoshift;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(MONOSHIFT_CLI) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string data(const std::string& name) { return std::string(MONOSHIFT_DATA) + "/" + name; }

}  // namespace

TEST(Json, ParsesProblem) {
  const auto pf = load_problem(data("example21_full.json"));
  ASSERT_TRUE(pf.presentation);
  EXPECT_EQ(pf.presentation->matrix(), (BinaryMatrix{{0, 1, 1}, {0, 0, 1}, {1, 1, 1}}));
  ASSERT_TRUE(pf.sft);
  EXPECT_EQ(pf.sft->rules.size(), 3u);
}

TEST(Json, ParsesAutomaton) {
  const auto pf = load_problem(data("even_full.json"));
  ASSERT_TRUE(pf.automaton);
  const auto e = even_monoid();
  EXPECT_EQ(pf.automaton->step, e.step);
  EXPECT_EQ(pf.automaton->names, e.names);
  EXPECT_EQ(parse_problem(R"({"automaton": "even"})").automaton->step, e.step);
}

TEST(Json, Diagnostics) {
  auto message = [](const std::string& text) {
    try {
      parse_problem(text);
    } catch (const InvalidInput& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  EXPECT_NE(message("{\n\"presentation\": {\"d\": 2,\n \"A\": [[1,1],[1,]]}}").find("line 3"), std::string::npos);
  EXPECT_NE(message(R"({"presentation": {"d": 2, "A": [[1,1],[1,2]]}})").find("/presentation/A/1/1"), std::string::npos);
  EXPECT_NE(message(R"({"presentation": {"d": 3, "A": [[1,1],[1,1]]}})").find("/presentation/A"), std::string::npos);
  EXPECT_NE(message(R"({"presentation": {"A": [[1]]}, "automaton": "even"})").find("exactly one"), std::string::npos);
  EXPECT_NE(message(R"({"presentation": {"A": [[1]]}, "sft": {"k": 2, "rules": []}})").find("/sft/rules"),
            std::string::npos);
  EXPECT_NE(message(R"({"automaton": {"states": ["a"], "initial": "b", "transitions": {}}})").find("/automaton/initial"),
            std::string::npos);
  EXPECT_NE(message(R"({"presentation": {"A": [[1]]}, "extra": 1})").find("/extra"), std::string::npos);
}

TEST(Json, RoundTrip) {
  const auto pf = load_problem(data("even_full.json"));
  Json j{{"automaton", to_json(*pf.automaton)}, {"sft", to_json(*pf.sft)}};
  const auto back = parse_problem(j.dump());
  EXPECT_EQ(back.automaton->step, pf.automaton->step);
  EXPECT_EQ(back.sft->rules, pf.sft->rules);
  const auto p = load_problem(data("example21_full.json"));
  EXPECT_EQ(parse_problem(Json{{"presentation", to_json(*p.presentation)}}.dump()).presentation->matrix(),
            p.presentation->matrix());
}

TEST(Json, TwelveDigits) {
  EXPECT_EQ(format12(std::log(2.147899035704787)), "0.76449017168");
  EXPECT_EQ(Json(round12(std::log(2.0))).dump(), "0.69314718056");
}

TEST(Cli, Check) {
  auto r = run("check " + data("example21_full.json"));
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("S_R={3}, finite: yes, xi=[1,2,1]"), std::string::npos) << r.out;
  r = run("check " + data("two_cycle.json") + " --json");
  EXPECT_EQ(r.code, 0);
  const auto j = Json::parse(r.out);
  EXPECT_FALSE(j["finite"].get<bool>());
  EXPECT_TRUE(j.contains("warning"));
  EXPECT_EQ(run("check " + data("malformed.json")).code, 2);
  EXPECT_EQ(run("check /nonexistent/file.json").code, 2);
  EXPECT_EQ(run("check").code, 2);
}

TEST(Cli, Degree) {
  auto r = run("degree " + data("example21_full.json") + " --json");
  ASSERT_EQ(r.code, 0);
  const auto j = Json::parse(r.out);
  EXPECT_NEAR(j["degree"].get<double>(), 0.764490171681, 1e-11);
  EXPECT_NEAR(j["lambda"].get<double>(), 2.14789903570, 1e-10);
  EXPECT_EQ(j["essential"], Json::array({1, 2}));
  EXPECT_TRUE(j["full_degree"].get<bool>());
  EXPECT_EQ(j["witness"].size(), 6u);
  // same answer through the automaton
  const auto a = Json::parse(run("degree --automaton " + data("example21_full.json") + " --json").out);
  EXPECT_NEAR(a["degree"].get<double>(), j["degree"].get<double>(), 1e-11);
  const auto e = Json::parse(run("degree " + data("even_full.json") + " --json").out);
  EXPECT_NEAR(e["degree"].get<double>(), 0.481211825060, 1e-11);
  // problem without an sft section
  EXPECT_EQ(run("degree " + data("free3.json")).code, 2);
  // infinite representation needs the automaton route
  EXPECT_EQ(run("degree " + data("two_cycle_full.json")).code, 2);
  EXPECT_EQ(run("degree --automaton " + data("two_cycle_full.json")).code, 0);
}

TEST(Cli, DegreeHumanOutput) {
  const auto r = run("degree " + data("example21_full.json"));
  EXPECT_EQ(r.code, 0);
  for (const char* s : {"essential={1,2}", "lags=3, xi=[1,2,1]", "subsystems=144", "degree=0.76449017168",
                        "lambda=2.1478990357", "full degree: yes"})
    EXPECT_NE(r.out.find(s), std::string::npos) << s;
}

TEST(Cli, Spectrum) {
  const auto r = run("spectrum " + data("free3.json") + " --json");
  ASSERT_EQ(r.code, 0);
  const auto j = Json::parse(r.out);
  ASSERT_EQ(j.size(), 3u);
  EXPECT_EQ(j[0]["degree"].get<double>(), 0.0);
  EXPECT_NEAR(j[1]["degree"].get<double>(), std::log(2.0), 1e-11);
  EXPECT_NEAR(j[2]["degree"].get<double>(), std::log(3.0), 1e-11);
  EXPECT_EQ(run("spectrum " + data("example21_full.json") + " --general --k 3 --cap 100").code, 3);
  EXPECT_EQ(run("spectrum " + data("example21_full.json") + " --general --k 2").code, 0);
}

TEST(Cli, CountOracle) {
  auto r = run("count " + data("example21_full.json") + " --n 2 --oracle");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("counts [512,512]"), std::string::npos);
  EXPECT_NE(r.out.find("MATCH"), std::string::npos);
  const auto j = Json::parse(run("count " + data("example21_full.json") + " --n 2 --oracle --json").out);
  EXPECT_EQ(j["verdict"], "MATCH");
  EXPECT_EQ(j["oracle"], Json::array({512, 512}));
  EXPECT_EQ(run("count " + data("example21_full.json") + " --n 3 --oracle --cap 10").code, 3);
  // large counts come back as strings
  const auto big = Json::parse(run("count " + data("example21_full.json") + " --n 6 --json").out);
  EXPECT_TRUE(big["counts"][0].is_string());
}

TEST(Cli, ThreadsDoNotChangeOutput) {
  const auto a = run("count " + data("example21_full.json") + " --n 3 --oracle --json --threads 1");
  const auto b = run("count " + data("example21_full.json") + " --n 3 --oracle --json --threads 2");
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, CharpolyPartitionEssential) {
  auto r = run("charpoly " + data("example21_full.json"));
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("VERIFIED"), std::string::npos);
  r = run("partition " + data("example21_full.json") + " --n 3 --enumerate --json");
  EXPECT_EQ(r.code, 0);
  const auto j = Json::parse(r.out);
  EXPECT_TRUE(j["sets_ok"].get<bool>());
  EXPECT_EQ(j["P_n"], 10);
  r = run("essential " + data("fibonacci_golden.json") + " --json");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(Json::parse(r.out)["essential"], Json::array({1, 2}));
  EXPECT_EQ(run("charpoly " + data("two_cycle.json")).code, 2);
}

TEST(Cli, DotExport) {
  const std::string path = std::string(MONOSHIFT_TMP) + "/rep.dot";
  std::remove(path.c_str());
  EXPECT_EQ(run("check " + data("example21_full.json") + " --dot " + path).code, 0);
  std::ifstream in(path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  EXPECT_NE(text.find("digraph representation"), std::string::npos);
}

TEST(Cli, GoldenOutputIsStable) {
  const auto a = run("degree " + data("example21_full.json") + " --json");
  const auto b = run("degree " + data("example21_full.json") + " --json");
  EXPECT_EQ(a.out, b.out);
  std::ifstream in(data("example21_degree.golden.json"));
  std::string golden((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  EXPECT_EQ(Json::parse(a.out), Json::parse(golden));
}
