#pragma once

// Problem files and machine-readable reports. Generators, labels and states
// are 1-based on the wire.

#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "monoshift/cayley.hpp"
#include "monoshift/degree.hpp"
#include "monoshift/errors.hpp"
#include "monoshift/followers.hpp"
#include "monoshift/presentation.hpp"
#include "monoshift/sft.hpp"
#include "monoshift/spectrum.hpp"

namespace monoshift {

using Json = nlohmann::json;

struct ProblemFile {
  std::optional<Presentation> presentation;
  std::optional<FollowerAutomaton> automaton;
  std::optional<SftRules> sft;

  std::size_t generators() const { return presentation ? presentation->generators() : automaton->generators; }
  FollowerAutomaton follower_automaton() const {
    return presentation ? to_follower_automaton(*presentation) : *automaton;
  }
  const SftRules& rules() const {
    if (!sft) throw InvalidInput("this command needs an \"sft\" section");
    return *sft;
  }
};

namespace detail {

[[noreturn]] inline void field_error(const std::string& path, const std::string& msg) {
  throw InvalidInput("field " + path + ": " + msg);
}

inline std::uint64_t read_count(const Json& j, const std::string& path) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0))
    field_error(path, "expected a nonnegative integer");
  return j.get<std::uint64_t>();
}

inline BinaryMatrix read_binary(const Json& j, const std::string& path) {
  if (!j.is_array()) field_error(path, "expected an array of rows");
  BinaryMatrix m;
  for (std::size_t r = 0; r < j.size(); ++r) {
    const auto rp = path + "/" + std::to_string(r);
    if (!j[r].is_array()) field_error(rp, "expected a row array");
    std::vector<std::uint8_t> row;
    for (std::size_t c = 0; c < j[r].size(); ++c) {
      const auto& x = j[r][c];
      if (!x.is_number_integer() || (x.get<std::int64_t>() != 0 && x.get<std::int64_t>() != 1))
        field_error(rp + "/" + std::to_string(c), "expected 0 or 1");
      row.push_back(static_cast<std::uint8_t>(x.get<std::int64_t>()));
    }
    m.push_back(std::move(row));
  }
  return m;
}

inline void check_square(const BinaryMatrix& m, std::size_t n, const std::string& path) {
  if (m.size() != n) field_error(path, "expected " + std::to_string(n) + " rows, got " + std::to_string(m.size()));
  for (std::size_t r = 0; r < n; ++r)
    if (m[r].size() != n)
      field_error(path + "/" + std::to_string(r),
                  "expected " + std::to_string(n) + " entries, got " + std::to_string(m[r].size()));
}

inline Presentation read_presentation(const Json& j) {
  if (!j.is_object()) field_error("/presentation", "expected an object");
  if (!j.contains("A")) field_error("/presentation/A", "missing");
  auto a = read_binary(j["A"], "/presentation/A");
  if (j.contains("d")) {
    const auto d = read_count(j["d"], "/presentation/d");
    if (d == 0) field_error("/presentation/d", "need at least one generator");
    check_square(a, d, "/presentation/A");
  } else if (a.empty()) {
    field_error("/presentation/A", "empty matrix");
  } else {
    check_square(a, a.size(), "/presentation/A");
  }
  return Presentation(std::move(a));
}

inline FollowerAutomaton read_automaton(const Json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "even") return even_monoid();
    field_error("/automaton", "unknown named automaton \"" + j.get<std::string>() + "\"");
  }
  if (!j.is_object()) field_error("/automaton", "expected an object or a name");
  for (const char* key : {"states", "initial", "transitions"})
    if (!j.contains(key)) field_error(std::string("/automaton/") + key, "missing");
  if (!j["states"].is_array() || j["states"].empty()) field_error("/automaton/states", "expected a nonempty array");
  FollowerAutomaton a;
  std::map<std::string, std::size_t> id;
  for (std::size_t q = 0; q < j["states"].size(); ++q) {
    if (!j["states"][q].is_string()) field_error("/automaton/states/" + std::to_string(q), "expected a string");
    const auto name = j["states"][q].get<std::string>();
    if (!id.emplace(name, q).second) field_error("/automaton/states/" + std::to_string(q), "duplicate state " + name);
    a.names.push_back(name);
  }
  auto state = [&](const Json& x, const std::string& path) {
    if (!x.is_string() || !id.count(x.get<std::string>())) field_error(path, "unknown state");
    return id.at(x.get<std::string>());
  };
  a.initial = state(j["initial"], "/automaton/initial");
  const auto& tr = j["transitions"];
  if (!tr.is_object()) field_error("/automaton/transitions", "expected an object");
  std::size_t generators = j.contains("generators") ? read_count(j["generators"], "/automaton/generators") : 0;
  std::vector<std::map<std::size_t, std::size_t>> edges(a.names.size());
  for (const auto& [from, moves] : tr.items()) {
    const auto fp = "/automaton/transitions/" + from;
    const auto q = state(Json(from), fp);
    if (!moves.is_object()) field_error(fp, "expected an object");
    for (const auto& [gen, to] : moves.items()) {
      std::size_t g = 0;
      try {
        std::size_t used = 0;
        g = std::stoul(gen, &used);
        if (used != gen.size() || g == 0) throw std::invalid_argument(gen);
      } catch (const std::exception&) {
        field_error(fp + "/" + gen, "generator keys are 1-based integers");
      }
      edges[q][g - 1] = state(to, fp + "/" + gen);
      generators = std::max(generators, g);
    }
  }
  a.generators = generators;
  a.step.assign(a.names.size(), std::vector<std::optional<std::size_t>>(generators));
  for (std::size_t q = 0; q < edges.size(); ++q)
    for (const auto& [g, t] : edges[q]) a.step[q][g] = t;
  a.validate();
  return a;
}

inline SftRules read_sft(const Json& j, std::size_t generators) {
  if (!j.is_object()) field_error("/sft", "expected an object");
  if (!j.contains("k")) field_error("/sft/k", "missing");
  SftRules r;
  r.k = read_count(j["k"], "/sft/k");
  if (r.k == 0) field_error("/sft/k", "alphabet needs at least one symbol");
  if (j.contains("rules") == j.contains("hom")) field_error("/sft", "give exactly one of \"rules\" and \"hom\"");
  if (j.contains("hom")) {
    auto t = read_binary(j["hom"], "/sft/hom");
    check_square(t, r.k, "/sft/hom");
    r.rules.assign(generators, t);
  } else {
    const auto& rs = j["rules"];
    if (!rs.is_array()) field_error("/sft/rules", "expected one matrix per generator");
    if (rs.size() != generators)
      field_error("/sft/rules", "expected " + std::to_string(generators) + " matrices, got " + std::to_string(rs.size()));
    for (std::size_t s = 0; s < rs.size(); ++s) {
      const auto path = "/sft/rules/" + std::to_string(s);
      auto m = read_binary(rs[s], path);
      check_square(m, r.k, path);
      r.rules.push_back(std::move(m));
    }
  }
  return r;
}

inline std::size_t line_of(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

}  // namespace detail

inline ProblemFile parse_problem(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InvalidInput("JSON syntax error at line " + std::to_string(detail::line_of(text, e.byte)) + ": " + e.what());
  }
  if (!j.is_object()) throw InvalidInput("problem file must be a JSON object");
  for (const auto& [key, _] : j.items())
    if (key != "presentation" && key != "automaton" && key != "sft") detail::field_error("/" + key, "unknown key");
  if (j.contains("presentation") == j.contains("automaton"))
    throw InvalidInput("problem file needs exactly one of \"presentation\" and \"automaton\"");
  ProblemFile pf;
  if (j.contains("presentation")) pf.presentation = detail::read_presentation(j["presentation"]);
  else pf.automaton = detail::read_automaton(j["automaton"]);
  if (j.contains("sft")) pf.sft = detail::read_sft(j["sft"], pf.generators());
  return pf;
}

inline ProblemFile load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_problem(ss.str());
}

/// A double that prints with at most 12 significant digits.
inline double round12(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

inline std::string format12(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

/// Integers that fit stay numbers, larger ones become decimal strings.
inline Json big_json(const BigInt& x) {
  if (x >= std::numeric_limits<std::int64_t>::min() && x <= std::numeric_limits<std::int64_t>::max())
    return static_cast<std::int64_t>(x);
  return x.str();
}

inline Json one_based(const std::vector<std::size_t>& v) {
  Json a = Json::array();
  for (auto x : v) a.push_back(x + 1);
  return a;
}

inline Json to_json(const Presentation& p) { return Json{{"d", p.generators()}, {"A", p.matrix()}}; }

inline Json to_json(const FollowerAutomaton& a) {
  Json tr = Json::object();
  for (std::size_t q = 0; q < a.states(); ++q) {
    Json moves = Json::object();
    for (std::size_t s = 0; s < a.generators; ++s)
      if (a.step[q][s]) moves[std::to_string(s + 1)] = a.names[*a.step[q][s]];
    tr[a.names[q]] = moves;
  }
  return Json{{"states", a.names}, {"initial", a.names[a.initial]}, {"transitions", tr}, {"generators", a.generators}};
}

inline Json to_json(const SftRules& r) { return Json{{"k", r.k}, {"rules", r.rules}}; }

inline Json to_json(const DegreeResult& d) {
  Json xi = Json::array();
  for (std::size_t m = 1; m <= d.xi.last_nonzero(); ++m) xi.push_back(d.xi(m));
  return Json{{"degree", round12(d.degree)},
              {"lambda", round12(d.spectral_radius)},
              {"essential", one_based(d.essential)},
              {"full_degree", d.full_degree},
              {"witness", d.witness_matrix.entries},
              {"witness_labels", d.witness_matrix.labels},
              {"witness_choice", d.witness.choice},
              {"subsystems", big_json(d.subsystem_count)},
              {"lags", d.lags},
              {"xi", xi}};
}

inline Json to_json(const SpectrumSet& s) {
  Json out = Json::array();
  for (const auto& e : s.entries) {
    Json w = e.matrix.empty() ? Json(e.alpha) : Json(e.matrix);
    out.push_back(Json{{"degree", round12(e.degree)}, {"lambda", round12(e.lambda)}, {"witness", w}});
  }
  return out;
}

}  // namespace monoshift
