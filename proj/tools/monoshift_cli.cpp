// monoshift: command line front end over JSON problem files.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "monoshift/monoshift.hpp"

using namespace monoshift;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 2;
constexpr int kExitLimit = 3;
constexpr int kExitNumeric = 4;

struct Common {
  std::string file;
  bool json = false;
  std::string dot;
  unsigned threads = 1;
  std::uint64_t cap = 0;

  Limits limits() const {
    Limits l;
    l.threads = std::max(1u, threads);
    if (cap) l.ball_nodes = l.labelings = l.periodic_words = l.matrices = cap;
    return l;
  }
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("file", c.file, "problem file (JSON)")->required();
  sub->add_flag("--json", c.json, "machine-readable output");
  sub->add_option("--dot", c.dot, "write a Graphviz rendering to PATH");
  sub->add_option("--threads", c.threads, "worker threads for enumeration")->check(CLI::PositiveNumber);
  sub->add_option("--cap", c.cap, "override every enumeration cap");
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write " + path);
  out << text;
}

std::string join(const std::vector<std::string>& parts, const char* sep) {
  std::string s;
  for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? sep : "") + parts[i];
  return s;
}

template <class T>
std::string list(const std::vector<T>& v, bool one_based = false) {
  std::vector<std::string> parts;
  for (const auto& x : v) {
    std::ostringstream os;
    os << (one_based ? x + 1 : x);
    parts.push_back(os.str());
  }
  return join(parts, ",");
}

std::vector<std::uint64_t> xi_list(const XiSequence& xi) {
  return {xi.xi.begin(), xi.xi.begin() + static_cast<std::ptrdiff_t>(xi.last_nonzero())};
}

void print(const Json& j) { std::cout << j.dump(2) << "\n"; }

const Presentation& need_presentation(const ProblemFile& pf, const char* cmd) {
  if (!pf.presentation) throw InvalidInput(std::string(cmd) + " needs a \"presentation\" section");
  return *pf.presentation;
}

std::string matrix_text(const IntMatrix& m) {
  std::string s;
  for (const auto& row : m) s += "  [" + list(row) + "]\n";
  return s;
}

int cmd_check(const Common& c) {
  const auto pf = load_problem(c.file);
  if (pf.automaton) {
    const auto& a = *pf.automaton;
    const auto classes = minimize(a);
    if (!c.dot.empty()) write_file(c.dot, export_dot(build_ball(a, 3, nullptr, c.limits().ball_nodes)));
    if (c.json) {
      print(Json{{"automaton", to_json(a)}, {"states", a.states()}, {"classes", classes.states()}});
    } else {
      std::cout << "automaton: " << a.states() << " states, " << a.generators << " generators, initial "
                << a.names[a.initial] << "\nfollower classes: " << classes.states() << "\n";
    }
    return kExitOk;
  }
  const auto& p = *pf.presentation;
  const auto sr = right_free_generators(p);
  const bool finite = is_finite_representation(p);
  Json j{{"d", p.generators()}, {"S_R", one_based(sr)}, {"finite", finite}};
  std::string tail;
  if (finite) {
    const auto f = finite_representation(p);
    const auto xi = xi_list(xi_sequence(p));
    j["xi"] = xi;
    j["V_F"] = f.vertices.size();
    tail = ", xi=[" + list(xi) + "]\n|V_F|=" + std::to_string(f.vertices.size()) + "\n";
    if (!c.dot.empty()) write_file(c.dot, export_dot(f));
  } else {
    j["warning"] = "non-free generators form a cycle; counting and the automaton route still apply";
    tail = "\nwarning: " + j["warning"].get<std::string>() + "\n";
    if (!c.dot.empty()) write_file(c.dot, export_dot(build_ball(p, 3, c.limits().ball_nodes)));
  }
  if (c.json)
    print(j);
  else
    std::cout << "d=" << p.generators() << "\nS_R={" << list(sr, true) << "}, finite: " << (finite ? "yes" : "no")
              << tail;
  return kExitOk;
}

int cmd_charpoly(const Common& c) {
  const auto pf = load_problem(c.file);
  const auto& p = need_presentation(pf, "charpoly");
  if (!is_finite_representation(p)) throw InfiniteRepresentation("charpoly needs a finite representation");
  const auto xi = xi_sequence(p);
  const auto a = char_poly_from_xi(xi);
  const auto b = char_poly_trace_recursion(p.matrix());
  const bool ok = a.coeffs == b.coeffs;
  if (c.json) {
    Json ca = Json::array(), cb = Json::array();
    for (const auto& x : a.coeffs) ca.push_back(big_json(x));
    for (const auto& x : b.coeffs) cb.push_back(big_json(x));
    print(Json{{"xi", xi_list(xi)}, {"from_xi", ca}, {"trace_recursion", cb}, {"verdict", ok ? "VERIFIED" : "FAILED"}});
  } else {
    std::cout << "xi=[" << list(xi_list(xi)) << "]\nfrom xi:          " << to_string(a)
              << "\ntrace recursion:  " << to_string(b) << "\n" << (ok ? "VERIFIED" : "FAILED") << "\n";
  }
  return ok ? kExitOk : 1;
}

std::string family_text(const PeriodicFamily& f) {
  std::vector<std::string> words;
  for (const auto& w : f.words) words.push_back(to_string(Word{w, false}));
  return "{" + join(words, ", ") + "}";
}

int cmd_partition(const Common& c, std::size_t n, bool enumerate) {
  const auto pf = load_problem(c.file);
  const auto& p = need_presentation(pf, "partition");
  const auto rep = partition_check(p, n, enumerate, c.limits().periodic_words);
  if (c.json) {
    Json tr = Json::array(), terms = Json::array();
    for (const auto& x : rep.traces) tr.push_back(big_json(x));
    for (const auto& x : rep.identity_terms) terms.push_back(big_json(x));
    Json j{{"n", n}, {"traces", tr}, {"identity_terms", terms}, {"numeric_ok", rep.numeric_ok}, {"ok", rep.ok()}};
    if (rep.sets_checked) {
      j["sets_ok"] = rep.sets_ok;
      j["P_n"] = rep.periodic.words.size();
      j["T"] = rep.translated.words.size();
      Json ins = Json::array();
      for (const auto& f : rep.inserted) ins.push_back(f.words.size());
      j["L"] = ins;
    }
    print(j);
  } else {
    std::cout << "tr(A^" << n << ") = " << rep.traces.back() << "; identity " << (rep.numeric_ok ? "holds" : "FAILS")
              << "\n";
    if (rep.sets_checked) {
      std::cout << "P_" << n << " (" << rep.periodic.words.size() << "): " << family_text(rep.periodic) << "\n"
                << "T(Xi_" << n << ") (" << rep.translated.words.size() << "): " << family_text(rep.translated) << "\n";
      for (std::size_t i = 0; i < rep.inserted.size(); ++i)
        std::cout << "L(P_" << n - 1 - i << ",Xi_" << i + 1 << ") (" << rep.inserted[i].words.size()
                  << "): " << family_text(rep.inserted[i]) << "\n";
      std::cout << "partition " << (rep.sets_ok ? "holds" : "FAILS") << "\n";
    }
  }
  return rep.ok() ? kExitOk : 1;
}

int cmd_count(const Common& c, std::size_t n, bool oracle) {
  const auto pf = load_problem(c.file);
  const auto& r = pf.rules();
  const auto aut = pf.follower_automaton();
  const auto rec = count_blocks_recurrence(aut, r, n);
  std::optional<BlockCountVector> orc;
  if (oracle) orc = pf.presentation ? count_blocks_oracle(*pf.presentation, r, n, c.limits())
                                    : count_blocks_oracle(aut, r, n, c.limits());
  if (!c.dot.empty())
    write_file(c.dot, export_dot(pf.presentation ? build_ball(*pf.presentation, n, c.limits().ball_nodes)
                                                 : build_ball(aut, n, nullptr, c.limits().ball_nodes)));
  const bool match = !orc || *orc == rec;
  auto strs = [](const BlockCountVector& v) {
    std::vector<std::string> s;
    for (const auto& x : v.counts) s.push_back(x.str());
    return s;
  };
  if (c.json) {
    Json j{{"n", n}, {"counts", Json::array()}};
    for (const auto& x : rec.counts) j["counts"].push_back(big_json(x));
    if (orc) {
      j["oracle"] = Json::array();
      for (const auto& x : orc->counts) j["oracle"].push_back(big_json(x));
      j["verdict"] = match ? "MATCH" : "MISMATCH";
    }
    print(j);
  } else {
    std::cout << "counts [" << join(strs(rec), ",") << "]\n";
    if (orc) std::cout << "oracle [" << join(strs(*orc), ",") << "]\n" << (match ? "MATCH" : "MISMATCH") << "\n";
  }
  return match ? kExitOk : 1;
}

int cmd_essential(const Common& c) {
  const auto pf = load_problem(c.file);
  const auto aut = pf.follower_automaton();
  const auto ess = essential_symbols(aut, pf.rules());
  std::vector<std::size_t> live, active;
  for (Symbol i = 0; i < pf.rules().k; ++i) {
    if (ess.live[ess.initial][i]) live.push_back(i);
    if (ess.active(ess.initial, i)) active.push_back(i);
  }
  if (c.json) {
    print(Json{{"essential", one_based(ess.symbols())}, {"live", one_based(live)}, {"active", one_based(active)},
               {"transient", ess.transient}, {"period", ess.period}});
  } else {
    std::cout << "essential={" << list(ess.symbols(), true) << "}\nlive={" << list(live, true) << "}\nactive={"
              << list(active, true) << "}\n";
  }
  return kExitOk;
}

int cmd_degree(const Common& c, bool automaton) {
  const auto pf = load_problem(c.file);
  const auto& r = pf.rules();
  DegreeResult d;
  if (automaton || pf.automaton) {
    d = degree_on_automaton(pf.follower_automaton(), r);
  } else {
    d = degree(*pf.presentation, r, c.limits());
  }
  if (c.json) {
    print(to_json(d));
    return kExitOk;
  }
  std::cout << "essential={" << list(d.essential, true) << "}\n";
  if (d.xi.xi.empty())
    std::cout << "lags=" << d.lags << "\n";
  else
    std::cout << "lags=" << d.lags << ", xi=[" << list(xi_list(d.xi)) << "]\n";
  std::cout << "subsystems=" << d.subsystem_count << "\n"
            << "degree=" << format12(d.degree) << "\nlambda=" << format12(d.spectral_radius) << "\n"
            << "witness:\n" << matrix_text(d.witness_matrix.entries)
            << "full degree: " << (d.full_degree ? "yes" : "no") << "\n";
  return kExitOk;
}

int cmd_spectrum(const Common& c, std::size_t k, bool general) {
  const auto pf = load_problem(c.file);
  const auto& p = need_presentation(pf, "spectrum");
  const auto s = general ? spectrum_general(p, k, 1e-9, c.limits()) : spectrum_k2(p);
  if (c.json) {
    print(to_json(s));
    return kExitOk;
  }
  for (const auto& e : s.entries) {
    std::cout << format12(e.degree) << "  lambda=" << format12(e.lambda);
    if (e.matrix.empty())
      std::cout << "  alpha=(" << list(e.alpha) << ")\n";
    else
      std::cout << "  l=" << e.block << "\n" << matrix_text(e.matrix);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shifts of finite type on monoids: counting, degree and spectrum"};
  app.require_subcommand(1);
  Common c;
  std::size_t n = 1, k = 2;
  bool enumerate = false, oracle = false, automaton = false, general = false;

  auto* check = app.add_subcommand("check", "presentation summary");
  add_common(check, c);
  auto* charpoly = app.add_subcommand("charpoly", "characteristic polynomial two ways");
  add_common(charpoly, c);
  auto* partition = app.add_subcommand("partition", "periodic-word partition identity");
  add_common(partition, c);
  partition->add_option("--n", n, "period")->required()->check(CLI::PositiveNumber);
  partition->add_flag("--enumerate", enumerate, "also check the word sets");
  auto* count = app.add_subcommand("count", "block counts by root label");
  add_common(count, c);
  count->add_option("--n", n, "ball radius")->required();
  count->add_flag("--oracle", oracle, "cross-check by enumeration");
  auto* essential = app.add_subcommand("essential", "essential labels");
  add_common(essential, c);
  auto* deg = app.add_subcommand("degree", "topological degree");
  add_common(deg, c);
  deg->add_flag("--automaton", automaton, "use the follower automaton");
  auto* spectrum_cmd = app.add_subcommand("spectrum", "attainable degrees");
  add_common(spectrum_cmd, c);
  spectrum_cmd->add_option("--k", k, "alphabet bound for --general")->check(CLI::PositiveNumber);
  spectrum_cmd->add_flag("--general", general, "block-matrix family");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (*check) return cmd_check(c);
    if (*charpoly) return cmd_charpoly(c);
    if (*partition) return cmd_partition(c, n, enumerate);
    if (*count) return cmd_count(c, n, oracle);
    if (*essential) return cmd_essential(c);
    if (*deg) return cmd_degree(c, automaton);
    if (*spectrum_cmd) return cmd_spectrum(c, k, general);
  } catch (const ResourceLimit& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitLimit;
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const InfiniteRepresentation& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitInvalid;
}
