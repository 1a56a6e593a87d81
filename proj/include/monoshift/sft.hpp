#pragma once

// One-step G-SFTs: exact n-block counts by brute force and by the
// state-indexed recurrence, and the essential-symbol decision.
//
// Constraints apply only along length-additive edges g -> g s. An absorbed
// product g s = g imposes nothing.

#include <cmath>
#include <cstdint>
#include <future>
#include <map>
#include <string>
#include <vector>

#include "monoshift/bigint.hpp"
#include "monoshift/cayley.hpp"
#include "monoshift/errors.hpp"
#include "monoshift/presentation.hpp"

namespace monoshift {

using Symbol = std::size_t;

/// rules[s](i, j) = 1 iff label j may follow label i across an edge labelled s.
struct SftRules {
  std::size_t k = 1;
  std::vector<BinaryMatrix> rules;

  static SftRules full_shift(std::size_t k, std::size_t generators) {
    return hom_shift(BinaryMatrix(k, std::vector<std::uint8_t>(k, 1)), generators);
  }
  /// The same transition matrix along every generator.
  static SftRules hom_shift(const BinaryMatrix& t, std::size_t generators) {
    SftRules r;
    r.k = t.size();
    r.rules.assign(generators, t);
    r.validate(generators);
    return r;
  }

  bool allows(Generator s, Symbol i, Symbol j) const { return rules[s][i][j] != 0; }

  void validate(std::size_t generators) const {
    if (k == 0) throw InvalidInput("alphabet size k must be at least 1");
    if (rules.size() != generators) {
      throw InvalidInput("SFT has " + std::to_string(rules.size()) + " rule matrices but the monoid has " +
                         std::to_string(generators) + " generators");
    }
    for (std::size_t s = 0; s < rules.size(); ++s)
      check_square_binary(rules[s], k, ("rule matrix for s" + std::to_string(s + 1)).c_str());
  }
};

/// counts[i] = gamma_{i,n}, the number of n-blocks with root label i.
struct BlockCountVector {
  std::size_t radius = 0;
  std::vector<BigInt> counts;
  friend bool operator==(const BlockCountVector&, const BlockCountVector&) = default;
};

/// Enumerates every labelling of the ball interior Delta_{n-1} that respects
/// the rules along tree edges; the outermost layer is counted in closed form
/// (its labels are independent given their parents).
inline BlockCountVector count_blocks_on_ball(const BallGraph& ball, const SftRules& r, const Limits& limits = {}) {
  const std::size_t k = r.k;
  const std::size_t n = ball.radius;
  BlockCountVector out;
  out.radius = n;
  if (n == 0) {
    out.counts.assign(k, 1);
    return out;
  }
  if (static_cast<double>(ball.size()) * std::log2(static_cast<double>(k)) > 126.0)
    throw ResourceLimit("block counts exceed the 128-bit brute-force accumulator");

  std::size_t interior = 0;
  while (interior < ball.size() && ball.depth[interior] < n) ++interior;

  // weight[v][t]: labellings of v's leaf children when v carries label t.
  std::vector<std::vector<unsigned __int128>> weight(interior, std::vector<unsigned __int128>(k, 1));
  for (std::size_t v = interior; v < ball.size(); ++v) {
    const auto& rule = r.rules[ball.edge_label[v]];
    for (Symbol t = 0; t < k; ++t) {
      unsigned __int128 choices = 0;
      for (Symbol u = 0; u < k; ++u) choices += rule[t][u];
      weight[ball.parent[v]][t] *= choices;
    }
  }

  auto count_root = [&](Symbol root) -> std::pair<unsigned __int128, std::uint64_t> {
    std::vector<Symbol> label(interior, 0);
    std::vector<unsigned __int128> prod(interior, 0);
    label[0] = root;
    prod[0] = weight[0][root];
    unsigned __int128 total = 0;
    std::uint64_t visits = 0;
    if (interior == 1) return {prod[0], 1};
    // Depth-first over positions 1..interior-1 in BFS order; parents precede children.
    std::size_t pos = 1;
    label[1] = 0;
    bool fresh = true;
    while (pos >= 1) {
      if (!fresh) {
        if (++label[pos] >= k) {
          --pos;
          continue;
        }
      }
      fresh = false;
      if (++visits > limits.labelings)
        throw ResourceLimit("brute-force enumeration exceeds the cap of " + std::to_string(limits.labelings) +
                                " labelings",
                            limits.labelings);
      const std::size_t par = ball.parent[pos];
      if (!r.allows(ball.edge_label[pos], label[par], label[pos])) continue;
      prod[pos] = prod[pos - 1] * weight[pos][label[pos]];
      if (prod[pos] == 0) continue;
      if (pos + 1 == interior) {
        total += prod[pos];
        continue;
      }
      ++pos;
      label[pos] = 0;
      fresh = true;
    }
    return {total, visits};
  };

  out.counts.resize(k);
  if (limits.threads > 1 && k > 1) {
    std::vector<std::future<std::pair<unsigned __int128, std::uint64_t>>> jobs;
    for (Symbol root = 0; root < k; ++root) jobs.push_back(std::async(std::launch::async, count_root, root));
    for (Symbol root = 0; root < k; ++root) {
      auto [total, visits] = jobs[root].get();
      (void)visits;
      out.counts[root] = BigInt(static_cast<std::uint64_t>(total >> 64)) << 64;
      out.counts[root] += static_cast<std::uint64_t>(total);
    }
  } else {
    for (Symbol root = 0; root < k; ++root) {
      auto [total, visits] = count_root(root);
      (void)visits;
      out.counts[root] = BigInt(static_cast<std::uint64_t>(total >> 64)) << 64;
      out.counts[root] += static_cast<std::uint64_t>(total);
    }
  }
  return out;
}

inline BlockCountVector count_blocks_oracle(const Presentation& p, const SftRules& r, std::size_t n,
                                            const Limits& limits = {}) {
  r.validate(p.generators());
  return count_blocks_on_ball(build_ball(p, n, limits.ball_nodes), r, limits);
}

inline BlockCountVector count_blocks_oracle(const FollowerAutomaton& aut, const SftRules& r, std::size_t n,
                                            const Limits& limits = {}) {
  aut.validate();
  r.validate(aut.generators);
  return count_blocks_on_ball(build_ball(aut, n, nullptr, limits.ball_nodes), r, limits);
}

/// gamma^{[q]}_{i,m} for every state q and label i, m = 0..n.
/// table[q][i] holds the value at m = n.
inline std::vector<std::vector<BigInt>> count_blocks_by_state(const FollowerAutomaton& aut, const SftRules& r,
                                                              std::size_t n) {
  aut.validate();
  r.validate(aut.generators);
  const std::size_t k = r.k;
  std::vector<std::vector<BigInt>> cur(aut.states(), std::vector<BigInt>(k, 1));
  for (std::size_t m = 1; m <= n; ++m) {
    std::vector<std::vector<BigInt>> next(aut.states(), std::vector<BigInt>(k, 1));
    for (std::size_t q = 0; q < aut.states(); ++q) {
      for (Symbol i = 0; i < k; ++i) {
        BigInt prod = 1;
        for (Generator s = 0; s < aut.generators && prod != 0; ++s) {
          const auto& succ = aut.step[q][s];
          if (!succ) continue;
          BigInt sum = 0;
          for (Symbol j = 0; j < k; ++j)
            if (r.allows(s, i, j)) sum += cur[*succ][j];
          prod *= sum;
        }
        next[q][i] = std::move(prod);
      }
    }
    cur = std::move(next);
  }
  return cur;
}

inline BlockCountVector count_blocks_recurrence(const FollowerAutomaton& aut, const SftRules& r, std::size_t n) {
  auto table = count_blocks_by_state(aut, r, n);
  return BlockCountVector{n, std::move(table[aut.initial])};
}

inline BlockCountVector count_blocks_recurrence(const Presentation& p, const SftRules& r, std::size_t n) {
  return count_blocks_recurrence(to_follower_automaton(p), r, n);
}

/// Essential and live labels, per automaton state.
struct EssentialSet {
  /// essential[q][i]: gamma^{[q]}_{i,n} >= 2 for some n.
  std::vector<std::vector<bool>> essential;
  /// live[q][i]: gamma^{[q]}_{i,n} >= 1 for every n.
  std::vector<std::vector<bool>> live;
  std::size_t initial = 0;
  /// Iterations before the clamped state repeats, and the cycle length.
  std::size_t transient = 0;
  std::size_t period = 0;

  /// Essential labels at the root (the identity).
  std::vector<Symbol> symbols() const {
    std::vector<Symbol> out;
    for (Symbol i = 0; i < essential[initial].size(); ++i)
      if (essential[initial][i]) out.push_back(i);
    return out;
  }
  bool is_essential(Symbol i) const { return essential[initial][i]; }
  /// Essential and never extinct; the labels that carry degree.
  bool active(std::size_t q, Symbol i) const { return essential[q][i] && live[q][i]; }
};

/// Runs the block recurrence with every value clamped into {0, 1, 2}. The
/// clamped system is finite-state, so iterating until its state repeats
/// decides "ever >= 2" and "ever 0" exactly.
inline EssentialSet essential_symbols(const FollowerAutomaton& aut, const SftRules& r) {
  aut.validate();
  r.validate(aut.generators);
  const std::size_t k = r.k, states = aut.states();
  using State = std::vector<std::uint8_t>;
  State cur(states * k, 1);
  EssentialSet out;
  out.initial = aut.initial;
  out.essential.assign(states, std::vector<bool>(k, false));
  out.live.assign(states, std::vector<bool>(k, true));
  std::map<State, std::size_t> seen;
  for (std::size_t m = 0;; ++m) {
    auto [it, inserted] = seen.emplace(cur, m);
    if (!inserted) {
      out.transient = it->second;
      out.period = m - it->second;
      break;
    }
    for (std::size_t q = 0; q < states; ++q)
      for (Symbol i = 0; i < k; ++i) {
        const auto v = cur[q * k + i];
        if (v == 2) out.essential[q][i] = true;
        if (v == 0) out.live[q][i] = false;
      }
    State next(states * k, 1);
    for (std::size_t q = 0; q < states; ++q)
      for (Symbol i = 0; i < k; ++i) {
        unsigned prod = 1;
        for (Generator s = 0; s < aut.generators && prod != 0; ++s) {
          const auto& succ = aut.step[q][s];
          if (!succ) continue;
          unsigned sum = 0;
          for (Symbol j = 0; j < k; ++j)
            if (r.allows(s, i, j)) sum = std::min(2u, sum + cur[*succ * k + j]);
          prod = std::min(2u, prod * sum);
        }
        next[q * k + i] = static_cast<std::uint8_t>(prod);
      }
    cur = std::move(next);
  }
  return out;
}

inline EssentialSet essential_symbols(const Presentation& p, const SftRules& r) {
  return essential_symbols(to_follower_automaton(p), r);
}

/// Natural log of a positive big integer.
inline double log_big(const BigInt& x) {
  if (x <= 0) throw InvalidInput("logarithm of a non-positive count");
  const std::size_t bits = boost::multiprecision::msb(x) + 1;
  if (bits <= 60) return std::log(static_cast<double>(static_cast<std::uint64_t>(x)));
  const std::size_t shift = bits - 60;
  BigInt top = x >> shift;
  return std::log(static_cast<double>(static_cast<std::uint64_t>(top))) + static_cast<double>(shift) * std::log(2.0);
}

/// ln(sum_i ln gamma_{i,n}) / n for each supplied count vector. Labels with
/// gamma <= 1 contribute nothing; an all-trivial vector is an error.
inline std::vector<double> estimate_degree_empirical(const std::vector<BlockCountVector>& counts) {
  std::vector<double> out;
  for (const auto& c : counts) {
    double sum = 0;
    for (const auto& g : c.counts)
      if (g >= 2) sum += log_big(g);
    if (!(sum > 0) || c.radius == 0)
      throw InvalidInput("empirical degree undefined at n = " + std::to_string(c.radius) +
                         ": every block count is at most 1");
    out.push_back(std::log(sum) / static_cast<double>(c.radius));
  }
  return out;
}

}  // namespace monoshift
