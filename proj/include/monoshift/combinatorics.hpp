#pragma once

// The xi-sequence, periodic-word families P_n, Xi_n, their translates and
// insertions, and both routes to the characteristic polynomial of A.

#include <algorithm>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "monoshift/bigint.hpp"
#include "monoshift/cayley.hpp"
#include "monoshift/errors.hpp"
#include "monoshift/perron.hpp"
#include "monoshift/presentation.hpp"

namespace monoshift {

/// xi[n-1] = number of n-words whose only right free generator is the last symbol.
struct XiSequence {
  std::vector<std::uint64_t> xi;

  std::size_t size() const noexcept { return xi.size(); }
  /// 1-based access; zero beyond d.
  std::uint64_t operator()(std::size_t n) const { return n >= 1 && n <= xi.size() ? xi[n - 1] : 0; }
  /// Largest n with xi_n != 0 (0 when all vanish).
  std::size_t last_nonzero() const {
    for (std::size_t n = xi.size(); n > 0; --n)
      if (xi[n - 1] != 0) return n;
    return 0;
  }
  friend bool operator==(const XiSequence&, const XiSequence&) = default;
};

/// Monic coefficient vector, leading coefficient (for lambda^d) first.
struct CharPoly {
  std::vector<BigInt> coeffs;
  std::size_t degree() const noexcept { return coeffs.empty() ? 0 : coeffs.size() - 1; }
  friend bool operator==(const CharPoly&, const CharPoly&) = default;
};

inline std::string to_string(const CharPoly& f) {
  std::string out;
  const std::size_t d = f.degree();
  for (std::size_t i = 0; i <= d; ++i) {
    const BigInt& c = f.coeffs[i];
    if (c == 0 && i != 0) continue;
    const std::size_t power = d - i;
    BigInt mag = c < 0 ? BigInt(-c) : c;
    if (out.empty()) {
      if (c < 0) out += "-";
    } else {
      out += c < 0 ? " - " : " + ";
    }
    if (mag != 1 || power == 0) out += mag.str();
    if (power >= 1) out += "λ";
    if (power >= 2) out += "^" + std::to_string(power);
  }
  return out.empty() ? "0" : out;
}

using Sequence = std::vector<Generator>;

/// Symbol sequences of length n+1 with equal first and last symbol.
struct PeriodicFamily {
  std::size_t n = 0;
  std::set<Sequence> words;
  std::size_t size() const noexcept { return words.size(); }
  friend bool operator==(const PeriodicFamily&, const PeriodicFamily&) = default;
};

namespace detail {

inline std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw ResourceLimit("xi count overflows 64 bits");
  return r;
}

inline std::vector<bool> free_mask(const Presentation& p) {
  std::vector<bool> free(p.generators());
  for (Generator i = 0; i < p.generators(); ++i) free[i] = p.is_right_free(i);
  return free;
}

}  // namespace detail

/// Dynamic programme over paths through non-free generators.
inline XiSequence xi_sequence(const Presentation& p) {
  const std::size_t d = p.generators();
  const auto free = detail::free_mask(p);
  XiSequence out;
  out.xi.assign(d, 0);
  // paths[g]: number of valid non-free paths of the current length ending at g.
  std::vector<std::uint64_t> paths(d, 0);
  for (Generator g = 0; g < d; ++g) {
    if (free[g])
      ++out.xi[0];
    else
      paths[g] = 1;
  }
  for (std::size_t n = 2; n <= d; ++n) {
    std::vector<std::uint64_t> next(d, 0);
    for (Generator g = 0; g < d; ++g) {
      if (paths[g] == 0) continue;
      for (Generator h = 0; h < d; ++h) {
        if (!p.allows(g, h)) continue;
        if (free[h])
          out.xi[n - 1] = detail::checked_add(out.xi[n - 1], paths[g]);
        else
          next[h] = detail::checked_add(next[h], paths[g]);
      }
    }
    paths = std::move(next);
  }
  return out;
}

/// P_n: all (n+1)-sequences with valid consecutive pairs and first = last.
inline PeriodicFamily enumerate_periodic(const Presentation& p, std::size_t n,
                                         std::uint64_t cap = Limits{}.periodic_words) {
  if (n == 0) throw InvalidInput("periodic families need n >= 1");
  PeriodicFamily fam;
  fam.n = n;
  const std::size_t d = p.generators();
  Sequence cur;
  cur.reserve(n + 1);
  auto extend = [&](auto&& self) -> void {
    if (cur.size() == n) {
      if (p.allows(cur.back(), cur.front())) {
        if (fam.words.size() >= cap)
          throw ResourceLimit("|P_" + std::to_string(n) + "| exceeds the cap of " + std::to_string(cap), cap);
        Sequence w = cur;
        w.push_back(cur.front());
        fam.words.insert(std::move(w));
      }
      return;
    }
    for (Generator g = 0; g < d; ++g) {
      if (!cur.empty() && !p.allows(cur.back(), g)) continue;
      cur.push_back(g);
      self(self);
      cur.pop_back();
    }
  };
  extend(extend);
  return fam;
}

/// Xi_n: periodic (n+1)-sequences whose n-th symbol is the only free one among the first n.
inline PeriodicFamily enumerate_Xi(const Presentation& p, std::size_t n) {
  if (n == 0) throw InvalidInput("Xi_n needs n >= 1");
  PeriodicFamily fam;
  fam.n = n;
  const std::size_t d = p.generators();
  const auto free = detail::free_mask(p);
  Sequence cur;
  auto extend = [&](auto&& self) -> void {
    if (cur.size() + 1 == n) {
      for (Generator f = 0; f < d; ++f) {
        if (!free[f] || (!cur.empty() && !p.allows(cur.back(), f))) continue;
        Sequence w = cur;
        w.push_back(f);
        w.push_back(w.front());
        fam.words.insert(std::move(w));
      }
      return;
    }
    for (Generator g = 0; g < d; ++g) {
      if (free[g] || (!cur.empty() && !p.allows(cur.back(), g))) continue;
      cur.push_back(g);
      self(self);
      cur.pop_back();
    }
  };
  extend(extend);
  return fam;
}

/// T(Xi_n): all cyclic translations u_i..u_n u_1..u_i.
inline PeriodicFamily translates(const PeriodicFamily& fam) {
  PeriodicFamily out;
  out.n = fam.n;
  const std::size_t n = fam.n;
  for (const auto& u : fam.words) {
    for (std::size_t r = 0; r < n; ++r) {
      Sequence w;
      w.reserve(n + 1);
      for (std::size_t t = r; t < n; ++t) w.push_back(u[t]);
      for (std::size_t t = 0; t <= r; ++t) w.push_back(u[t]);
      out.words.insert(std::move(w));
    }
  }
  return out;
}

/// L(P_m, Xi_n): insert v_1..v_n right after the first free generator of u.
inline PeriodicFamily insertions(const Presentation& p, const PeriodicFamily& pm, const PeriodicFamily& xn) {
  PeriodicFamily out;
  out.n = pm.n + xn.n;
  const auto free = detail::free_mask(p);
  for (const auto& u : pm.words) {
    auto first_free = std::find_if(u.begin(), u.end() - 1, [&](Generator g) { return free[g]; });
    if (first_free == u.end() - 1)
      throw InfiniteRepresentation("periodic word without a right free generator");
    const auto split = first_free + 1;
    for (const auto& v : xn.words) {
      Sequence w(u.begin(), split);
      w.insert(w.end(), v.begin(), v.end() - 1);
      w.insert(w.end(), split, u.end());
      out.words.insert(std::move(w));
    }
  }
  return out;
}

inline IntMatrix to_int_matrix(const BinaryMatrix& a) {
  IntMatrix m(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) m[i].assign(a[i].begin(), a[i].end());
  return m;
}

struct PartitionReport {
  std::size_t n = 0;
  std::vector<BigInt> traces;         // tr(A^1) .. tr(A^n)
  std::vector<BigInt> identity_terms; // n*xi_n, then tr(A^i)*xi_{n-i} for i = 1..n-1
  bool numeric_ok = false;
  bool sets_checked = false;
  bool sets_ok = false;
  PeriodicFamily periodic;                // P_n when sets were checked
  PeriodicFamily translated;              // T(Xi_n)
  std::vector<PeriodicFamily> inserted;   // L(P_{n-i}, Xi_i), i = 1..n-1

  bool ok() const noexcept { return numeric_ok && (!sets_checked || sets_ok); }
};

/// Checks tr(A^n) = n xi_n + sum_i tr(A^i) xi_{n-i} and, when `check_sets`,
/// that T(Xi_n) and the insertions L(P_{n-i}, Xi_i) partition P_n.
inline PartitionReport partition_check(const Presentation& p, std::size_t n, bool check_sets = true,
                                       std::uint64_t cap = Limits{}.periodic_words) {
  if (n == 0) throw InvalidInput("partition check needs n >= 1");
  if (!is_finite_representation(p))
    throw InfiniteRepresentation("partition of periodic words requires a finite representation");
  PartitionReport rep;
  rep.n = n;
  const auto xi = xi_sequence(p);
  rep.traces = power_traces(to_int_matrix(p.matrix()), n);
  BigInt rhs = BigInt(n) * xi(n);
  rep.identity_terms.push_back(rhs);
  for (std::size_t i = 1; i < n; ++i) {
    BigInt term = rep.traces[i - 1] * xi(n - i);
    rep.identity_terms.push_back(term);
    rhs += term;
  }
  rep.numeric_ok = rhs == rep.traces[n - 1];
  if (!check_sets) return rep;

  rep.sets_checked = true;
  rep.periodic = enumerate_periodic(p, n, cap);
  rep.translated = translates(enumerate_Xi(p, n));
  std::size_t total = rep.translated.size();
  bool ok = rep.translated.size() == n * xi(n);
  std::set<Sequence> seen = rep.translated.words;
  for (std::size_t i = 1; i < n; ++i) {
    auto part = insertions(p, enumerate_periodic(p, n - i, cap), enumerate_Xi(p, i));
    ok = ok && BigInt(part.size()) == rep.traces[n - i - 1] * xi(i);
    total += part.size();
    seen.insert(part.words.begin(), part.words.end());
    rep.inserted.push_back(std::move(part));
  }
  // Disjoint parts: the union has as many words as the parts together.
  ok = ok && seen.size() == total && seen == rep.periodic.words;
  rep.sets_ok = ok;
  return rep;
}

/// f(lambda) = lambda^d - sum_i xi_i lambda^{d-i}.
inline CharPoly char_poly_from_xi(const XiSequence& xi) {
  CharPoly f;
  f.coeffs.push_back(1);
  for (auto x : xi.xi) f.coeffs.push_back(-BigInt(x));
  return f;
}

/// Characteristic polynomial det(lambda I - M) from power traces via the
/// Newton recursion b_k = -(1/k)(b_{k-1} t_1 + ... + b_1 t_{k-1} + b_0 t_k).
inline CharPoly char_poly_trace_recursion(const IntMatrix& m) {
  const std::size_t n = m.size();
  for (const auto& row : m)
    if (row.size() != n) throw InvalidInput("characteristic polynomial needs a square matrix");
  const auto traces = power_traces(m, n);
  // b_0 = (-1)^n as for det(M - lambda I); sign-normalized at the end.
  const BigInt sign = (n % 2 == 0) ? 1 : -1;
  std::vector<BigInt> b(n + 1);
  b[0] = sign;
  for (std::size_t k = 1; k <= n; ++k) {
    BigInt acc = 0;
    for (std::size_t i = 1; i <= k; ++i) acc += b[k - i] * traces[i - 1];
    if (acc % k != 0) throw NumericalError("inexact division in trace recursion");
    b[k] = -acc / k;
  }
  CharPoly f;
  f.coeffs.reserve(n + 1);
  for (auto& c : b) f.coeffs.push_back(c * sign);
  return f;
}

inline CharPoly char_poly_trace_recursion(const BinaryMatrix& a) {
  return char_poly_trace_recursion(to_int_matrix(a));
}

/// Spectral radius as the largest real root of the exact characteristic
/// polynomial; an independent route to spectral_radius().
inline double spectral_radius_charpoly(const IntMatrix& m) {
  if (m.empty()) return 0.0;
  std::int64_t max_row = 0;
  for (const auto& row : m) {
    std::int64_t s = 0;
    for (auto v : row) {
      if (v < 0) throw InvalidInput("spectral radius needs a nonnegative matrix");
      s += v;
    }
    max_row = std::max(max_row, s);
  }
  return largest_real_root(char_poly_trace_recursion(m).coeffs, static_cast<double>(max_row) + 1.0);
}

}  // namespace monoshift
