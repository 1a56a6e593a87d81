#pragma once

// Cayley-graph balls, the finite representation F, and follower automata.

#include <algorithm>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "monoshift/errors.hpp"
#include "monoshift/presentation.hpp"

namespace monoshift {

inline constexpr std::size_t kNoParent = std::numeric_limits<std::size_t>::max();

/// Breadth-first tree of all reduced words of length <= radius. Node 0 is e.
struct BallGraph {
  std::size_t radius = 0;
  std::vector<Word> nodes;
  std::vector<std::size_t> parent;
  std::vector<Generator> edge_label;  // generator on the edge from the parent
  std::vector<std::size_t> depth;

  std::size_t size() const noexcept { return nodes.size(); }
};

struct FiniteRepresentation {
  struct Edge {
    Word from;
    Generator label;
    Word to;
  };
  std::vector<Word> vertices;  // depth-first order, e first
  std::vector<Edge> edges;
};

/// Finite deterministic automaton whose walks from `initial` are exactly the
/// length-additive extensions of the monoid. step[q][s] is empty when
/// appending s from class q is not length-additive.
struct FollowerAutomaton {
  std::size_t generators = 0;
  std::size_t initial = 0;
  std::vector<std::string> names;
  std::vector<std::vector<std::optional<std::size_t>>> step;

  std::size_t states() const noexcept { return step.size(); }

  /// Checks shape, totality at the initial state and reachability.
  void validate() const {
    if (generators == 0) throw InvalidInput("automaton needs at least one generator");
    if (step.empty()) throw InvalidInput("automaton needs at least one state");
    if (initial >= step.size()) throw InvalidInput("automaton initial state out of range");
    if (names.size() != step.size()) throw InvalidInput("automaton state names do not match states");
    for (std::size_t q = 0; q < step.size(); ++q) {
      if (step[q].size() != generators)
        throw InvalidInput("automaton state '" + names[q] + "' has the wrong number of generators");
      for (const auto& t : step[q])
        if (t && *t >= step.size()) throw InvalidInput("automaton transition target out of range");
    }
    for (std::size_t s = 0; s < generators; ++s) {
      if (!step[initial][s]) {
        throw InvalidInput("every generator must extend the identity; s" + std::to_string(s + 1) +
                           " is missing at the initial state");
      }
    }
    std::vector<bool> seen(step.size(), false);
    std::vector<std::size_t> stack{initial};
    seen[initial] = true;
    while (!stack.empty()) {
      auto q = stack.back();
      stack.pop_back();
      for (const auto& t : step[q]) {
        if (t && !seen[*t]) {
          seen[*t] = true;
          stack.push_back(*t);
        }
      }
    }
    for (std::size_t q = 0; q < seen.size(); ++q)
      if (!seen[q]) throw InvalidInput("automaton state '" + names[q] + "' is unreachable");
  }
};

inline BallGraph build_ball(const Presentation& p, std::size_t radius,
                            std::uint64_t node_cap = Limits{}.ball_nodes) {
  BallGraph ball;
  ball.radius = radius;
  ball.nodes.push_back(Word{{}, true});
  ball.parent.push_back(kNoParent);
  ball.edge_label.push_back(0);
  ball.depth.push_back(0);
  std::size_t level_begin = 0;
  for (std::size_t m = 0; m < radius; ++m) {
    const std::size_t level_end = ball.size();
    for (std::size_t v = level_begin; v < level_end; ++v) {
      for (Generator s = 0; s < p.generators(); ++s) {
        if (!is_length_additive(p, ball.nodes[v], s)) continue;
        if (ball.size() >= node_cap)
          throw ResourceLimit("ball of radius " + std::to_string(radius) + " exceeds the node cap of " +
                                  std::to_string(node_cap),
                              node_cap);
        Word child = ball.nodes[v];
        child.symbols.push_back(s);
        ball.nodes.push_back(std::move(child));
        ball.parent.push_back(v);
        ball.edge_label.push_back(s);
        ball.depth.push_back(m + 1);
      }
    }
    level_begin = level_end;
  }
  return ball;
}

/// Ball built by walking an automaton; node words are the walk labels.
/// `states` receives the automaton state reached at each node.
inline BallGraph build_ball(const FollowerAutomaton& aut, std::size_t radius,
                            std::vector<std::size_t>* states = nullptr,
                            std::uint64_t node_cap = Limits{}.ball_nodes) {
  BallGraph ball;
  ball.radius = radius;
  std::vector<std::size_t> st{aut.initial};
  ball.nodes.push_back(Word{{}, true});
  ball.parent.push_back(kNoParent);
  ball.edge_label.push_back(0);
  ball.depth.push_back(0);
  std::size_t level_begin = 0;
  for (std::size_t m = 0; m < radius; ++m) {
    const std::size_t level_end = ball.size();
    for (std::size_t v = level_begin; v < level_end; ++v) {
      for (Generator s = 0; s < aut.generators; ++s) {
        const auto& next = aut.step[st[v]][s];
        if (!next) continue;
        if (ball.size() >= node_cap)
          throw ResourceLimit("ball of radius " + std::to_string(radius) + " exceeds the node cap of " +
                                  std::to_string(node_cap),
                              node_cap);
        Word child = ball.nodes[v];
        child.symbols.push_back(s);
        ball.nodes.push_back(std::move(child));
        ball.parent.push_back(v);
        ball.edge_label.push_back(s);
        ball.depth.push_back(m + 1);
        st.push_back(*next);
      }
    }
    level_begin = level_end;
  }
  if (states) *states = std::move(st);
  return ball;
}

/// F is finite iff the digraph of A restricted to non-free generators is
/// acyclic (self-loops included), i.e. that submatrix is nilpotent.
inline bool is_finite_representation(const Presentation& p) {
  const std::size_t d = p.generators();
  enum Color : std::uint8_t { kWhite, kGrey, kBlack };
  std::vector<Color> color(d, kWhite);
  std::vector<bool> free(d);
  for (Generator i = 0; i < d; ++i) free[i] = p.is_right_free(i);

  // Iterative DFS; a grey-to-grey edge closes a cycle.
  for (Generator root = 0; root < d; ++root) {
    if (free[root] || color[root] != kWhite) continue;
    std::vector<std::pair<Generator, Generator>> stack{{root, 0}};
    color[root] = kGrey;
    while (!stack.empty()) {
      auto& [v, next] = stack.back();
      if (next == d) {
        color[v] = kBlack;
        stack.pop_back();
        continue;
      }
      Generator w = next++;
      if (free[w] || !p.allows(v, w)) continue;
      if (color[w] == kGrey) return false;
      if (color[w] == kWhite) {
        color[w] = kGrey;
        stack.emplace_back(w, 0);
      }
    }
  }
  return true;
}

/// Reduced words whose symbols are non-free except possibly a trailing free
/// generator, with e included (prefix-closed).
inline FiniteRepresentation finite_representation(const Presentation& p) {
  if (!is_finite_representation(p))
    throw InfiniteRepresentation("presentation has no finite representation (non-free generators form a cycle)");
  FiniteRepresentation f;
  std::vector<Word> stack{Word{{}, true}};
  while (!stack.empty()) {
    Word g = std::move(stack.back());
    stack.pop_back();
    f.vertices.push_back(g);
    const bool closed = !g.empty() && p.is_right_free(g.symbols.back());
    if (closed) continue;
    // Push in reverse so children come out in generator order.
    for (Generator s = p.generators(); s-- > 0;) {
      if (!is_length_additive(p, g, s)) continue;
      Word child = g;
      child.symbols.push_back(s);
      f.edges.push_back({g, s, child});
      stack.push_back(std::move(child));
    }
  }
  std::sort(f.edges.begin(), f.edges.end(), [](const auto& a, const auto& b) {
    return std::tie(a.from, a.label) < std::tie(b.from, b.label);
  });
  return f;
}

/// States q0 (identity) and q_i (words ending in s_i); q_i steps by s_j iff A(i,j) = 1.
inline FollowerAutomaton to_follower_automaton(const Presentation& p) {
  const std::size_t d = p.generators();
  FollowerAutomaton aut;
  aut.generators = d;
  aut.initial = 0;
  aut.names.push_back("e");
  aut.step.emplace_back(d);
  for (Generator j = 0; j < d; ++j) aut.step[0][j] = j + 1;
  for (Generator i = 0; i < d; ++i) {
    aut.names.push_back("s" + std::to_string(i + 1));
    aut.step.emplace_back(d);
    for (Generator j = 0; j < d; ++j)
      if (p.allows(i, j)) aut.step.back()[j] = j + 1;
  }
  return aut;
}

namespace detail {

inline std::string dot_quote(const std::string& s) { return "\"" + s + "\""; }

template <typename NodeRange, typename EdgeFn>
std::string dot_digraph(const std::string& name, const NodeRange& labels, EdgeFn&& emit_edges) {
  std::ostringstream out;
  out << "digraph " << name << " {\n";
  out << "  node [shape=circle];\n";
  for (std::size_t i = 0; i < labels.size(); ++i)
    out << "  n" << i << " [label=" << dot_quote(labels[i]) << "];\n";
  emit_edges(out);
  out << "}\n";
  return out.str();
}

}  // namespace detail

inline std::string export_dot(const BallGraph& ball) {
  std::vector<std::string> labels;
  labels.reserve(ball.size());
  for (const auto& w : ball.nodes) labels.push_back(to_string(w));
  return detail::dot_digraph("ball", labels, [&](std::ostringstream& out) {
    for (std::size_t v = 1; v < ball.size(); ++v) {
      out << "  n" << ball.parent[v] << " -> n" << v << " [label="
          << detail::dot_quote("s" + std::to_string(ball.edge_label[v] + 1)) << "];\n";
    }
  });
}

inline std::string export_dot(const FiniteRepresentation& f) {
  std::vector<Word> order = f.vertices;
  std::sort(order.begin(), order.end(), [](const Word& a, const Word& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  std::map<Word, std::size_t> index;
  std::vector<std::string> labels;
  for (const auto& w : order) {
    index.emplace(w, labels.size());
    labels.push_back(to_string(w));
  }
  return detail::dot_digraph("representation", labels, [&](std::ostringstream& out) {
    for (const auto& e : f.edges) {
      out << "  n" << index.at(e.from) << " -> n" << index.at(e.to)
          << " [label=" << detail::dot_quote("s" + std::to_string(e.label + 1)) << "];\n";
    }
  });
}

}  // namespace monoshift
