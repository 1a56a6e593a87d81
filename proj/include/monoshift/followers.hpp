#pragma once

// Follower automata beyond R_A presentations, and degree over (state, label) pairs.

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "monoshift/bigint.hpp"
#include "monoshift/cayley.hpp"
#include "monoshift/degree.hpp"
#include "monoshift/errors.hpp"
#include "monoshift/perron.hpp"
#include "monoshift/sft.hpp"

namespace monoshift {

/// The monoid with relations s2 s1^{2i+1} s2 = s2.
inline FollowerAutomaton even_monoid() {
  FollowerAutomaton a;
  a.generators = 2;
  a.initial = 0;
  a.names = {"qG", "qE", "qO"};
  a.step = {{0, 1}, {2, 1}, {1, std::nullopt}};
  return a;
}

/// Quotient by the coarsest partition respecting defined steps (Moore).
/// Unreachable states are dropped first.
inline FollowerAutomaton minimize(const FollowerAutomaton& aut) {
  aut.validate();
  const std::size_t n = aut.states();
  std::vector<std::size_t> cls(n, 0);
  std::size_t classes = 1;
  while (true) {
    std::map<std::vector<long>, std::size_t> ids;
    std::vector<std::size_t> next(n);
    for (std::size_t q = 0; q < n; ++q) {
      std::vector<long> sig{static_cast<long>(cls[q])};
      for (Generator s = 0; s < aut.generators; ++s)
        sig.push_back(aut.step[q][s] ? static_cast<long>(cls[*aut.step[q][s]]) : -1L);
      next[q] = ids.emplace(sig, ids.size()).first->second;
    }
    cls = std::move(next);
    if (ids.size() == classes) break;
    classes = ids.size();
  }
  // Renumber by first appearance in breadth-first order from the initial state.
  std::vector<long> order(classes, -1);
  std::vector<std::size_t> rep;
  std::vector<std::size_t> queue{aut.initial};
  std::vector<bool> seen(n, false);
  seen[aut.initial] = true;
  for (std::size_t h = 0; h < queue.size(); ++h) {
    const auto q = queue[h];
    if (order[cls[q]] < 0) {
      order[cls[q]] = static_cast<long>(rep.size());
      rep.push_back(q);
    }
    for (const auto& t : aut.step[q])
      if (t && !seen[*t]) {
        seen[*t] = true;
        queue.push_back(*t);
      }
  }
  FollowerAutomaton out;
  out.generators = aut.generators;
  out.initial = 0;
  for (auto q : rep) {
    out.names.push_back(aut.names.empty() ? std::to_string(q) : aut.names[q]);
    std::vector<std::optional<std::size_t>> row;
    for (const auto& t : aut.step[q])
      row.push_back(t ? std::optional<std::size_t>(static_cast<std::size_t>(order[cls[*t]])) : std::nullopt);
    out.step.push_back(std::move(row));
  }
  return out;
}

/// Follower classes of an R_A monoid as a minimal automaton.
inline FollowerAutomaton follower_classes(const Presentation& p) { return minimize(to_follower_automaton(p)); }

/// B(q, q') = #{s : step(q, s) = q'}.
inline IntMatrix state_adjacency(const FollowerAutomaton& aut) {
  IntMatrix b(aut.states(), std::vector<std::int64_t>(aut.states(), 0));
  for (std::size_t q = 0; q < aut.states(); ++q)
    for (const auto& t : aut.step[q])
      if (t) ++b[q][*t];
  return b;
}

/// Degree with first-order recurrences over active (state, label) pairs.
inline DegreeResult degree_on_automaton(const FollowerAutomaton& aut, const SftRules& r, double tol = 1e-12) {
  aut.validate();
  r.validate(aut.generators);
  const auto ess = essential_symbols(aut, r);
  const std::size_t k = r.k, states = aut.states();
  std::vector<long> index(states * k, -1);
  MaxRowFamily f;
  std::vector<std::string> labels;
  for (std::size_t q = 0; q < states; ++q)
    for (Symbol i = 0; i < k; ++i)
      if (ess.active(q, i)) {
        index[q * k + i] = static_cast<long>(f.dim++);
        labels.push_back("gamma_" + std::to_string(i + 1) + "[" + (aut.names.empty() ? std::to_string(q) : aut.names[q]) + "]");
      }
  f.rows.resize(f.dim);
  BigInt count = f.dim == 0 ? BigInt(0) : BigInt(1);
  for (std::size_t q = 0; q < states; ++q)
    for (Symbol i = 0; i < k; ++i) {
      if (index[q * k + i] < 0) continue;
      auto& row = f.rows[static_cast<std::size_t>(index[q * k + i])];
      for (Generator s = 0; s < aut.generators; ++s) {
        if (!aut.step[q][s]) continue;
        const auto succ = *aut.step[q][s];
        RowGroup g;
        for (Symbol j = 0; j < k; ++j)
          if (r.allows(s, i, j) && index[succ * k + j] >= 0)
            g.alternatives.push_back(SparseRow{{static_cast<std::size_t>(index[succ * k + j]), 1}});
        if (g.alternatives.empty()) continue;
        count *= g.alternatives.size();
        row.push_back(std::move(g));
      }
    }

  DegreeResult res;
  res.lags = 1;
  res.subsystem_count = count;
  for (Symbol i = 0; i < k; ++i)
    if (ess.active(aut.initial, i)) res.essential.push_back(i);
  std::vector<std::size_t> roots;
  for (auto i : res.essential) roots.push_back(static_cast<std::size_t>(index[aut.initial * k + i]));

  std::vector<std::vector<std::size_t>> policy(f.dim);
  if (!roots.empty()) {
    const auto cone = max_cone_radius(f, roots, tol);
    res.spectral_radius = cone.radius;
    res.degree = log_prime(cone.radius);
    policy = cone.policy;
  } else {
    for (std::size_t v = 0; v < f.dim; ++v) policy[v].assign(f.rows[v].size(), 0);
  }
  for (const auto& row : policy) res.witness.choice.insert(res.witness.choice.end(), row.begin(), row.end());
  res.witness_matrix.entries = policy_matrix(f, policy);
  res.witness_matrix.labels = std::move(labels);
  res.witness_matrix.lags = 1;

  const double full = log_prime(spectral_radius(state_adjacency(aut)));
  res.full_degree = std::abs(res.degree - full) <= 1e-9;
  return res;
}

}  // namespace monoshift
