#pragma once

// Topological degree of one-step G-SFTs on monoids with a finite
// representation: the recurrence system, its simple subsystems and their
// block-companion adjacency matrices, and the maximal Perron root.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "monoshift/bigint.hpp"
#include "monoshift/cayley.hpp"
#include "monoshift/combinatorics.hpp"
#include "monoshift/errors.hpp"
#include "monoshift/perron.hpp"
#include "monoshift/presentation.hpp"
#include "monoshift/sft.hpp"

namespace monoshift {

/// One linear factor sum_j c_j gamma^{[successor]}_{j,n-1}.
struct StateFactor {
  std::size_t successor = 0;
  Generator generator = 0;
  std::vector<std::uint8_t> coefficients;
};

/// gamma^{[q]}_{i,n} = prod over factors[q][i] of the factor sums.
struct StateSnre {
  std::size_t k = 0;
  std::size_t initial = 0;
  std::vector<std::string> state_names;
  std::vector<std::vector<std::vector<StateFactor>>> factors;
};

/// A leaf of F ending in a free generator, seen from the root: the factor
/// contributes one gamma_{j,n-lag}. coefficients[j] = 1 when some rule path
/// along `leaf` leads from the root label to j.
struct LagFactor {
  std::size_t lag = 0;
  Word leaf;
  std::vector<std::uint8_t> coefficients;
};

/// Exponent vector of a monomial over gamma_{j,n-m}; index (m-1)*k + j.
using Exponents = std::vector<std::uint32_t>;

/// Root equations with inner states eliminated:
/// gamma_{i,n} = sum over monomials[i] (times constants).
struct LagSnre {
  std::size_t k = 0;
  std::size_t lags = 0;
  XiSequence xi;
  std::vector<bool> active;
  std::vector<std::vector<LagFactor>> factors;
  std::vector<std::vector<Exponents>> monomials;

  std::uint32_t exponent(const Exponents& e, std::size_t lag, Symbol j) const { return e[(lag - 1) * k + j]; }
};

struct Snre {
  StateSnre state;
  std::optional<LagSnre> lag;
};

/// Choice of one monomial per active root label (indices into the deduplicated
/// alternative lists of the subsystem family).
struct SimpleSubsystem {
  std::vector<std::size_t> choice;
  friend auto operator<=>(const SimpleSubsystem&, const SimpleSubsystem&) = default;
};

struct AdjacencyMatrix {
  IntMatrix entries;
  std::size_t lags = 1;
  std::vector<std::string> labels;
  std::size_t dim() const noexcept { return entries.size(); }
};

struct DegreeResult {
  double degree = 0.0;
  double spectral_radius = 0.0;
  bool full_degree = false;
  std::vector<Symbol> essential;
  std::size_t lags = 0;
  XiSequence xi;
  BigInt subsystem_count = 0;
  SimpleSubsystem witness;
  AdjacencyMatrix witness_matrix;
};

/// ln' convention: radii at most 1 give degree 0.
inline double log_prime(double lambda) { return lambda > 1.0 ? std::log(lambda) : 0.0; }

inline StateSnre build_state_snre(const FollowerAutomaton& aut, const SftRules& r) {
  aut.validate();
  r.validate(aut.generators);
  StateSnre out;
  out.k = r.k;
  out.initial = aut.initial;
  out.state_names = aut.names;
  out.factors.assign(aut.states(), std::vector<std::vector<StateFactor>>(r.k));
  for (std::size_t q = 0; q < aut.states(); ++q)
    for (Symbol i = 0; i < r.k; ++i)
      for (Generator s = 0; s < aut.generators; ++s) {
        if (!aut.step[q][s]) continue;
        StateFactor f{*aut.step[q][s], s, std::vector<std::uint8_t>(r.rules[s][i].begin(), r.rules[s][i].end())};
        out.factors[q][i].push_back(std::move(f));
      }
  return out;
}

namespace detail {

class MonomialBuilder {
 public:
  MonomialBuilder(const Presentation& p, const SftRules& r, const EssentialSet& ess, std::size_t lags,
                  std::uint64_t cap)
      : p_(p), r_(r), ess_(ess), lags_(lags), cap_(cap) {}

  std::set<Exponents> root(Symbol i) { return node(0, std::nullopt, i); }

 private:
  // State index in to_follower_automaton: 0 = e, g + 1 = words ending in g.
  static std::size_t state_of(Generator g) { return g + 1; }

  std::set<Exponents> node(std::size_t depth, std::optional<Generator> last, Symbol label) {
    const auto key = std::make_tuple(depth, last ? *last + 1 : 0, label);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    std::set<Exponents> acc{Exponents(lags_ * r_.k, 0)};
    for (Generator m = 0; m < p_.generators(); ++m) {
      if (last && !p_.allows(*last, m)) continue;
      std::set<Exponents> options;
      const bool leaf = p_.is_right_free(m);
      for (Symbol j = 0; j < r_.k; ++j) {
        if (!r_.allows(m, label, j)) continue;
        if (leaf) {
          if (!ess_.live[ess_.initial][j]) continue;
          Exponents e(lags_ * r_.k, 0);
          e[depth * r_.k + j] = 1;
          options.insert(std::move(e));
        } else {
          if (!ess_.live[state_of(m)][j]) continue;
          auto sub = node(depth + 1, m, j);
          options.insert(sub.begin(), sub.end());
        }
      }
      if (options.empty()) {
        acc.clear();
        break;
      }
      std::set<Exponents> next;
      for (const auto& a : acc)
        for (const auto& b : options) {
          Exponents sum = a;
          for (std::size_t t = 0; t < sum.size(); ++t) sum[t] += b[t];
          next.insert(std::move(sum));
          if (next.size() > cap_)
            throw ResourceLimit("monomial set exceeds the cap of " + std::to_string(cap_), cap_);
        }
      acc = std::move(next);
    }
    memo_.emplace(key, acc);
    return acc;
  }

  const Presentation& p_;
  const SftRules& r_;
  const EssentialSet& ess_;
  std::size_t lags_;
  std::uint64_t cap_;
  std::map<std::tuple<std::size_t, std::size_t, Symbol>, std::set<Exponents>> memo_;
};

}  // namespace detail

/// Root equations of an R_A presentation with F finite, inner states eliminated.
/// `ess` must come from essential_symbols on to_follower_automaton(p).
inline LagSnre build_lag_snre(const Presentation& p, const SftRules& r, const EssentialSet& ess,
                              const Limits& limits = {}) {
  if (!is_finite_representation(p))
    throw InfiniteRepresentation("lag-form recurrences need a finite representation; use the automaton route");
  r.validate(p.generators());
  LagSnre out;
  out.k = r.k;
  out.xi = xi_sequence(p);
  out.lags = out.xi.last_nonzero();
  out.active.resize(r.k);
  for (Symbol i = 0; i < r.k; ++i) out.active[i] = ess.active(ess.initial, i);

  // Informational factor view: one factor per F-leaf ending in a free generator.
  const auto f = finite_representation(p);
  std::vector<Word> leaves;
  for (const auto& w : f.vertices)
    if (!w.empty() && p.is_right_free(w.symbols.back())) leaves.push_back(w);
  std::sort(leaves.begin(), leaves.end(), [](const Word& a, const Word& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  out.factors.resize(r.k);
  for (Symbol i = 0; i < r.k; ++i) {
    for (const auto& w : leaves) {
      std::vector<std::uint8_t> reach(r.k, 0);
      reach[i] = 1;
      for (Generator g : w.symbols) {
        std::vector<std::uint8_t> next(r.k, 0);
        for (Symbol a = 0; a < r.k; ++a)
          if (reach[a])
            for (Symbol b = 0; b < r.k; ++b)
              if (r.allows(g, a, b)) next[b] = 1;
        reach = std::move(next);
      }
      out.factors[i].push_back(LagFactor{w.size(), w, std::move(reach)});
    }
  }

  detail::MonomialBuilder builder(p, r, ess, out.lags, limits.matrices);
  out.monomials.resize(r.k);
  for (Symbol i = 0; i < r.k; ++i) {
    if (!ess.live[ess.initial][i]) continue;
    auto set = builder.root(i);
    out.monomials[i].assign(set.begin(), set.end());
  }
  return out;
}

inline Snre build_snre(const Presentation& p, const SftRules& r, const EssentialSet& ess,
                       const Limits& limits = {}) {
  Snre s;
  s.state = build_state_snre(to_follower_automaton(p), r);
  if (is_finite_representation(p)) s.lag = build_lag_snre(p, r, ess, limits);
  return s;
}

/// The simple-subsystem family of a lag system over its active labels.
struct LagFamily {
  std::vector<Symbol> active;
  std::size_t lags = 0;
  /// Per active label: distinct monomials restricted to active columns, sorted.
  std::vector<std::vector<SparseRow>> alternatives;
  MaxRowFamily family;

  std::size_t block() const noexcept { return active.size(); }
  std::size_t index(std::size_t lag, std::size_t a) const { return (lag - 1) * block() + a; }
};

inline LagFamily make_lag_family(const LagSnre& s) {
  LagFamily lf;
  for (Symbol i = 0; i < s.k; ++i)
    if (s.active[i]) lf.active.push_back(i);
  lf.lags = s.lags;
  const std::size_t e = lf.block();
  lf.alternatives.resize(e);
  for (std::size_t a = 0; a < e; ++a) {
    std::set<SparseRow> distinct;
    for (const auto& mono : s.monomials[lf.active[a]]) {
      SparseRow row;
      for (std::size_t m = 1; m <= s.lags; ++m)
        for (std::size_t b = 0; b < e; ++b) {
          auto x = s.exponent(mono, m, lf.active[b]);
          if (x != 0) row.emplace_back(lf.index(m, b), x);
        }
      distinct.insert(std::move(row));
    }
    lf.alternatives[a].assign(distinct.begin(), distinct.end());
  }
  lf.family.dim = e * s.lags;
  lf.family.rows.resize(lf.family.dim);
  if (s.lags == 0) return lf;
  for (std::size_t a = 0; a < e; ++a) {
    if (!lf.alternatives[a].empty()) lf.family.rows[lf.index(1, a)].push_back(RowGroup{1, lf.alternatives[a]});
    for (std::size_t m = 2; m <= s.lags; ++m)
      lf.family.rows[lf.index(m, a)].push_back(RowGroup{1, {SparseRow{{lf.index(m - 1, a), 1}}}});
  }
  return lf;
}

inline AdjacencyMatrix subsystem_matrix(const LagFamily& lf, const SimpleSubsystem& sub) {
  AdjacencyMatrix m;
  m.lags = lf.lags;
  const std::size_t dim = lf.family.dim;
  m.entries.assign(dim, std::vector<std::int64_t>(dim, 0));
  for (std::size_t a = 0; a < lf.block() && lf.lags > 0; ++a) {
    if (!lf.alternatives[a].empty())
      for (const auto& [c, w] : lf.alternatives[a][sub.choice[a]]) m.entries[lf.index(1, a)][c] += w;
    for (std::size_t lag = 2; lag <= lf.lags; ++lag) m.entries[lf.index(lag, a)][lf.index(lag - 1, a)] = 1;
  }
  for (std::size_t lag = 1; lag <= lf.lags; ++lag)
    for (auto sym : lf.active) m.labels.push_back("gamma_" + std::to_string(sym + 1) + "(n-" + std::to_string(lag) + ")");
  return m;
}

inline BigInt subsystem_count(const LagFamily& lf) {
  BigInt n = 1;
  for (const auto& alts : lf.alternatives) n *= std::max<std::size_t>(alts.size(), 1);
  return lf.block() == 0 ? BigInt(0) : n;
}

/// Every simple subsystem (one distinct monomial per active label) with its
/// adjacency matrix; distinct choices give distinct matrices.
inline std::vector<std::pair<SimpleSubsystem, AdjacencyMatrix>> enumerate_simple_subsystems(
    const LagSnre& s, const Limits& limits = {}) {
  const auto lf = make_lag_family(s);
  std::vector<std::pair<SimpleSubsystem, AdjacencyMatrix>> out;
  if (lf.block() == 0) return out;
  const BigInt total = subsystem_count(lf);
  if (total > limits.matrices)
    throw ResourceLimit("simple subsystem enumeration would produce " + total.str() + " matrices (cap " +
                            std::to_string(limits.matrices) + ")",
                        total > std::numeric_limits<std::uint64_t>::max() ? std::numeric_limits<std::uint64_t>::max()
                                                                          : static_cast<std::uint64_t>(total));
  SimpleSubsystem sub;
  sub.choice.assign(lf.block(), 0);
  while (true) {
    out.emplace_back(sub, subsystem_matrix(lf, sub));
    std::size_t a = lf.block();
    while (a > 0) {
      --a;
      const std::size_t size = std::max<std::size_t>(lf.alternatives[a].size(), 1);
      if (++sub.choice[a] < size) break;
      sub.choice[a] = 0;
      if (a == 0) return out;
    }
  }
}

/// Degree of a lag-form system: ln' of the largest Perron root over all
/// simple subsystems, with a witness subsystem.
inline DegreeResult degree_of(const LagSnre& s, double tol = 1e-12) {
  DegreeResult res;
  res.xi = s.xi;
  res.lags = s.lags;
  const auto lf = make_lag_family(s);
  res.essential = lf.active;
  res.subsystem_count = subsystem_count(lf);
  res.witness.choice.assign(lf.block(), 0);
  res.witness_matrix = subsystem_matrix(lf, res.witness);
  if (lf.family.dim == 0) return res;

  const auto cone = max_cone_radius(lf.family, {}, tol);
  res.spectral_radius = cone.radius;
  res.degree = log_prime(cone.radius);
  for (std::size_t a = 0; a < lf.block(); ++a) {
    const auto& pol = cone.policy[lf.index(1, a)];
    if (!pol.empty()) res.witness.choice[a] = pol[0];
  }
  res.witness_matrix = subsystem_matrix(lf, res.witness);
  return res;
}

/// Largest S within the active labels such that every label in S has a
/// monomial using only S-labels at every leaf; nonempty iff the degree is full.
inline std::vector<Symbol> full_degree_core(const LagSnre& s) {
  std::vector<bool> in(s.active);
  bool changed = true;
  while (changed) {
    changed = false;
    for (Symbol p = 0; p < s.k; ++p) {
      if (!in[p]) continue;
      bool ok = std::any_of(s.monomials[p].begin(), s.monomials[p].end(), [&](const Exponents& mono) {
        for (std::size_t m = 1; m <= s.lags; ++m) {
          std::uint64_t inside = 0;
          for (Symbol q = 0; q < s.k; ++q)
            if (in[q]) inside += s.exponent(mono, m, q);
          if (inside != s.xi(m)) return false;
        }
        return true;
      });
      if (!ok) {
        in[p] = false;
        changed = true;
      }
    }
  }
  std::vector<Symbol> core;
  for (Symbol p = 0; p < s.k; ++p)
    if (in[p]) core.push_back(p);
  return core;
}

inline double spectral_radius_of(const Presentation& p) {
  return spectral_radius(to_int_matrix(p.matrix()));
}

/// Full degree (deg = ln' rho_A) iff some set of essential labels is closed
/// under the rules at every leaf that ends in a right free generator.
inline bool full_degree_check(const Presentation& p, const SftRules& r, const Limits& limits = {}) {
  if (spectral_radius_of(p) <= 1.0) return true;
  const auto ess = essential_symbols(p, r);
  return !full_degree_core(build_lag_snre(p, r, ess, limits)).empty();
}

inline DegreeResult degree(const Presentation& p, const SftRules& r, const Limits& limits = {},
                           double tol = 1e-12) {
  r.validate(p.generators());
  if (!is_finite_representation(p))
    throw InfiniteRepresentation("degree() needs a finite representation; use degree_on_automaton");
  const auto ess = essential_symbols(p, r);
  const auto lag = build_lag_snre(p, r, ess, limits);
  auto res = degree_of(lag, tol);
  res.full_degree = spectral_radius_of(p) <= 1.0 || !full_degree_core(lag).empty();
  return res;
}

}  // namespace monoshift
