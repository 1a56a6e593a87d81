#pragma once

// Perron roots of nonnegative integer matrices and of max-row families.
//
// A MaxRowFamily describes the log-linearised dynamics of a recurrence system:
// row r evaluates to  sum over groups g of  weight_g * max_{alt in g} <alt, x>.
// A fixed matrix is the special case of one group holding one alternative per
// row. The cone spectral radius of such a map equals the largest spectral
// radius over all matrices obtained by fixing one alternative per group.
//
// Each strongly connected component of the union graph is solved with the
// shifted nonlinear power iteration x <- (T + I) x, bracketing the radius by
// the Collatz-Wielandt bounds min_i T(x)_i / x_i <= r <= max_i T(x)_i / x_i.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "monoshift/bigint.hpp"
#include "monoshift/errors.hpp"

namespace monoshift {

using SparseRow = std::vector<std::pair<std::size_t, std::int64_t>>;

struct RowGroup {
  std::int64_t weight = 1;
  std::vector<SparseRow> alternatives;
};

struct MaxRowFamily {
  std::size_t dim = 0;
  std::vector<std::vector<RowGroup>> rows;

  static MaxRowFamily from_matrix(const IntMatrix& m) {
    MaxRowFamily f;
    f.dim = m.size();
    f.rows.resize(f.dim);
    for (std::size_t i = 0; i < f.dim; ++i) {
      SparseRow row;
      for (std::size_t j = 0; j < m[i].size(); ++j) {
        if (m[i][j] < 0) throw InvalidInput("spectral radius needs a nonnegative matrix");
        if (m[i][j] != 0) row.emplace_back(j, m[i][j]);
      }
      if (!row.empty()) f.rows[i].push_back(RowGroup{1, {std::move(row)}});
    }
    return f;
  }
};

/// Strongly connected components (Tarjan, iterative). Components are listed
/// in reverse topological order of the condensation.
inline std::vector<std::vector<std::size_t>> strongly_connected_components(
    const std::vector<std::vector<std::size_t>>& adj) {
  const std::size_t n = adj.size();
  constexpr std::size_t kUnset = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> index(n, kUnset), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::vector<std::vector<std::size_t>> out;
  std::size_t counter = 0;
  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != kUnset) continue;
    std::vector<std::pair<std::size_t, std::size_t>> work{{root, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!work.empty()) {
      auto [v, next] = work.back();
      if (next < adj[v].size()) {
        work.back().second++;
        std::size_t w = adj[v][next];
        if (index[w] == kUnset) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          work.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      work.pop_back();
      if (!work.empty()) low[work.back().first] = std::min(low[work.back().first], low[v]);
      if (low[v] == index[v]) {
        std::vector<std::size_t> comp;
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp.push_back(w);
        } while (w != v);
        std::sort(comp.begin(), comp.end());
        out.push_back(std::move(comp));
      }
    }
  }
  return out;
}

struct ConeRadius {
  double radius = 0.0;
  /// Component achieving the radius (empty when radius is 0).
  std::vector<std::size_t> component;
  /// Approximate eigenvector on `component`, max-normalised.
  std::vector<long double> eigenvector;
  /// For every row of the family: chosen alternative per group at the eigenvector.
  std::vector<std::vector<std::size_t>> policy;
  std::size_t iterations = 0;
};

namespace detail {

inline std::vector<std::vector<std::size_t>> union_graph(const MaxRowFamily& f) {
  std::vector<std::vector<std::size_t>> adj(f.dim);
  for (std::size_t r = 0; r < f.dim; ++r) {
    for (const auto& g : f.rows[r])
      for (const auto& alt : g.alternatives)
        for (const auto& [c, w] : alt)
          if (w > 0) adj[r].push_back(c);
    std::sort(adj[r].begin(), adj[r].end());
    adj[r].erase(std::unique(adj[r].begin(), adj[r].end()), adj[r].end());
  }
  return adj;
}

inline long double alt_value(const SparseRow& alt, const std::vector<long double>& x) {
  long double v = 0;
  for (const auto& [c, w] : alt) v += static_cast<long double>(w) * x[c];
  return v;
}

/// Index of the best alternative; near-ties resolve to the lowest index.
inline std::size_t best_alternative(const RowGroup& g, const std::vector<long double>& x) {
  long double best = -1;
  for (const auto& alt : g.alternatives) best = std::max(best, alt_value(alt, x));
  const long double slack = 1e-12L * std::max(1.0L, best);
  for (std::size_t a = 0; a < g.alternatives.size(); ++a)
    if (alt_value(g.alternatives[a], x) >= best - slack) return a;
  return 0;
}

// x is indexed by the full family dimension; entries outside the component are 0.
inline long double row_value(const std::vector<RowGroup>& row, const std::vector<long double>& x) {
  long double v = 0;
  for (const auto& g : row) {
    long double best = 0;
    for (const auto& alt : g.alternatives) best = std::max(best, alt_value(alt, x));
    v += static_cast<long double>(g.weight) * best;
  }
  return v;
}

}  // namespace detail

/// Radius of the family restricted to one strongly connected component.
inline std::pair<long double, std::vector<long double>> component_radius(
    const MaxRowFamily& f, const std::vector<std::size_t>& comp, long double tol, std::size_t* iterations,
    std::size_t max_iterations = 1'000'000) {
  std::vector<long double> x(f.dim, 0.0L);
  for (auto v : comp) x[v] = 1.0L;
  std::vector<long double> t(comp.size());
  for (std::size_t it = 1; it <= max_iterations; ++it) {
    long double lo = std::numeric_limits<long double>::infinity(), hi = 0;
    for (std::size_t i = 0; i < comp.size(); ++i) {
      t[i] = detail::row_value(f.rows[comp[i]], x);
      const long double ratio = t[i] / x[comp[i]];
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
    if (hi - lo <= tol * std::max(1.0L, hi)) {
      if (iterations) *iterations = it;
      std::vector<long double> vec;
      for (auto v : comp) vec.push_back(x[v]);
      return {(hi + lo) / 2, vec};
    }
    long double norm = 0;
    for (std::size_t i = 0; i < comp.size(); ++i) {
      x[comp[i]] += t[i];
      norm = std::max(norm, x[comp[i]]);
    }
    for (auto v : comp) x[v] /= norm;
  }
  throw NumericalError("power iteration did not converge");
}

/// Largest cone spectral radius over the components reachable from `roots`
/// (all rows when `roots` is empty).
inline ConeRadius max_cone_radius(const MaxRowFamily& f, const std::vector<std::size_t>& roots = {},
                                  double tol = 1e-12) {
  const auto adj = detail::union_graph(f);
  std::vector<bool> reach(f.dim, roots.empty());
  if (!roots.empty()) {
    std::vector<std::size_t> stack(roots.begin(), roots.end());
    for (auto r : roots) reach[r] = true;
    while (!stack.empty()) {
      auto v = stack.back();
      stack.pop_back();
      for (auto w : adj[v])
        if (!reach[w]) {
          reach[w] = true;
          stack.push_back(w);
        }
    }
  }
  ConeRadius best;
  long double best_radius = 0;
  for (const auto& comp : strongly_connected_components(adj)) {
    if (!reach[comp.front()]) continue;
    const bool cyclic = comp.size() > 1 || std::binary_search(adj[comp[0]].begin(), adj[comp[0]].end(), comp[0]);
    if (!cyclic) continue;
    std::size_t its = 0;
    auto [radius, vec] = component_radius(f, comp, static_cast<long double>(tol), &its);
    best.iterations += its;
    // Strictly larger wins; earlier components keep ties.
    if (radius > best_radius + static_cast<long double>(tol) * std::max(1.0L, radius)) {
      best_radius = radius;
      best.component = comp;
      best.eigenvector = std::move(vec);
    }
  }
  best.radius = static_cast<double>(best_radius);

  std::vector<long double> x(f.dim, 0.0L);
  for (std::size_t i = 0; i < best.component.size(); ++i) x[best.component[i]] = best.eigenvector[i];
  best.policy.resize(f.dim);
  for (std::size_t r = 0; r < f.dim; ++r)
    for (const auto& g : f.rows[r]) best.policy[r].push_back(detail::best_alternative(g, x));
  return best;
}

/// Matrix obtained from a family by fixing one alternative per group.
inline IntMatrix policy_matrix(const MaxRowFamily& f, const std::vector<std::vector<std::size_t>>& policy) {
  IntMatrix m(f.dim, std::vector<std::int64_t>(f.dim, 0));
  for (std::size_t r = 0; r < f.dim; ++r)
    for (std::size_t g = 0; g < f.rows[r].size(); ++g) {
      const auto& grp = f.rows[r][g];
      if (grp.alternatives.empty()) continue;
      for (const auto& [c, w] : grp.alternatives[policy[r][g]]) m[r][c] += grp.weight * w;
    }
  return m;
}

/// Spectral radius of a nonnegative integer matrix by shifted power iteration
/// on each irreducible block.
inline double spectral_radius(const IntMatrix& m, double tol = 1e-12) {
  if (!(tol > 0)) throw InvalidInput("tolerance must be positive");
  for (const auto& row : m)
    if (row.size() != m.size()) throw InvalidInput("spectral radius needs a square matrix");
  return max_cone_radius(MaxRowFamily::from_matrix(m), {}, tol).radius;
}

/// Largest real root of a monic integer polynomial whose roots all have real
/// part at most that root (true for characteristic polynomials of
/// nonnegative matrices). lambda exceeds the root iff every derivative is
/// positive at lambda, which makes plain bisection valid even at multiple roots.
inline double largest_real_root(const std::vector<BigInt>& coeffs, double upper) {
  using Real = boost::multiprecision::cpp_bin_float_50;
  std::vector<std::vector<Real>> derivs;
  std::vector<Real> cur;
  for (const auto& c : coeffs) cur.emplace_back(c);
  while (!cur.empty()) {
    derivs.push_back(cur);
    std::vector<Real> next;
    const std::size_t deg = cur.size() - 1;
    for (std::size_t i = 0; i < deg; ++i) next.push_back(cur[i] * Real(deg - i));
    cur = std::move(next);
  }
  auto above = [&](const Real& x) {
    for (const auto& p : derivs) {
      Real v = 0;
      for (const auto& c : p) v = v * x + c;
      if (v <= 0) return false;
    }
    return true;
  };
  Real lo = 0, hi = upper;
  if (above(lo)) return 0.0;
  while (!above(hi)) hi *= 2;
  for (int it = 0; it < 200 && hi - lo > Real(1e-30); ++it) {
    Real mid = (lo + hi) / 2;
    if (above(mid))
      hi = mid;
    else
      lo = mid;
  }
  return static_cast<double>(hi);
}

}  // namespace monoshift
