#pragma once

// Attainable degrees over a fixed presentation.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "monoshift/combinatorics.hpp"
#include "monoshift/degree.hpp"
#include "monoshift/errors.hpp"
#include "monoshift/perron.hpp"
#include "monoshift/presentation.hpp"

namespace monoshift {

using AlphaVector = std::vector<std::uint64_t>;

/// Largest real root of x^d - sum_i alpha_i x^{d-i}; 0 when alpha = 0.
inline double max_real_root(const AlphaVector& alpha) {
  const long double total = std::accumulate(alpha.begin(), alpha.end(), 0.0L);
  if (total == 0) return 0.0;
  const std::size_t d = alpha.size();
  auto f = [&](long double x) {
    long double v = 1;
    for (std::size_t i = 0; i < d; ++i) v = v * x - static_cast<long double>(alpha[i]);
    return v;
  };
  // f(1) <= 0 and f(1 + sum) > 0; f is increasing past its positive root.
  long double lo = 1, hi = 1 + total;
  for (int it = 0; it < 200 && hi - lo > 1e-18L * hi; ++it) {
    const long double mid = (lo + hi) / 2;
    if (f(mid) > 0)
      hi = mid;
    else
      lo = mid;
  }
  return static_cast<double>((lo + hi) / 2);
}

struct SpectrumEntry {
  double degree = 0.0;
  double lambda = 0.0;
  /// k = 2 witness.
  AlphaVector alpha;
  /// General witness: the companion-block matrix and its block size l.
  IntMatrix matrix;
  std::size_t block = 0;
};

/// Degrees in increasing order, one entry per value within the tolerance.
struct SpectrumSet {
  std::vector<SpectrumEntry> entries;
  std::uint64_t candidates = 0;

  std::vector<double> degrees() const {
    std::vector<double> out;
    for (const auto& e : entries) out.push_back(e.degree);
    return out;
  }
  bool contains(double x, double tol = 1e-9) const {
    return std::any_of(entries.begin(), entries.end(), [&](const auto& e) { return std::abs(e.degree - x) <= tol; });
  }
};

namespace detail {

// Candidates arrive in witness-priority order; the first of each cluster stays.
inline SpectrumSet assemble(std::vector<SpectrumEntry> found, double tol, std::uint64_t candidates) {
  std::stable_sort(found.begin(), found.end(), [](const auto& a, const auto& b) { return a.degree < b.degree; });
  SpectrumSet out;
  out.candidates = candidates;
  for (auto& e : found) {
    if (!out.entries.empty() && e.degree - out.entries.back().degree <= tol) continue;
    out.entries.push_back(std::move(e));
  }
  return out;
}

inline void require_finite(const Presentation& p) {
  if (!is_finite_representation(p))
    throw InfiniteRepresentation("spectrum needs a finite representation");
}

}  // namespace detail

/// H = { ln' lambda(alpha) : 0 <= alpha <= xi }.
inline SpectrumSet spectrum_k2(const Presentation& p, double dedup_tol = 1e-9) {
  detail::require_finite(p);
  const auto xi = xi_sequence(p);
  const std::size_t len = xi.last_nonzero();
  AlphaVector alpha(len, 0);
  std::vector<SpectrumEntry> found;
  std::uint64_t count = 0;
  while (true) {
    const double lambda = max_real_root(alpha);
    found.push_back(SpectrumEntry{log_prime(lambda), lambda, alpha, {}, 1});
    ++count;
    std::size_t i = len;
    while (i > 0) {
      --i;
      if (++alpha[i] <= xi(i + 1)) break;
      alpha[i] = 0;
      if (i == 0) return detail::assemble(std::move(found), dedup_tol, count);
    }
    if (len == 0) return detail::assemble(std::move(found), dedup_tol, count);
  }
}

namespace detail {

// All vectors of length l with entries summing to at most bound, lexicographic.
inline std::vector<std::vector<std::int64_t>> bounded_compositions(std::size_t l, std::uint64_t bound) {
  std::vector<std::vector<std::int64_t>> out;
  std::vector<std::int64_t> v(l, 0);
  std::function<void(std::size_t, std::uint64_t)> rec = [&](std::size_t pos, std::uint64_t left) {
    if (pos == l) {
      out.push_back(v);
      return;
    }
    for (std::uint64_t x = 0; x <= left; ++x) {
      v[pos] = static_cast<std::int64_t>(x);
      rec(pos + 1, left - x);
    }
    v[pos] = 0;
  };
  rec(0, bound);
  return out;
}

inline IntMatrix companion_blocks(const std::vector<IntMatrix>& blocks, std::size_t l) {
  const std::size_t lags = blocks.size(), dim = l * lags;
  IntMatrix m(dim, std::vector<std::int64_t>(dim, 0));
  for (std::size_t i = 0; i < lags; ++i)
    for (std::size_t r = 0; r < l; ++r)
      for (std::size_t c = 0; c < l; ++c) m[r][i * l + c] = blocks[i][r][c];
  for (std::size_t r = l; r < dim; ++r) m[r][r - l] = 1;
  return m;
}

// Flattened blocks under a simultaneous relabelling of the l symbols.
inline std::vector<std::int64_t> permuted_key(const std::vector<IntMatrix>& blocks, const std::vector<std::size_t>& perm) {
  std::vector<std::int64_t> key;
  const std::size_t l = perm.size();
  for (std::size_t r = 0; r < l; ++r)
    for (const auto& b : blocks)
      for (std::size_t c = 0; c < l; ++c) key.push_back(b[perm[r]][perm[c]]);
  return key;
}

}  // namespace detail

/// Degrees of all companion-block matrices with l x l blocks C_1..C_ell
/// (1 <= l <= k) whose rows satisfy sum_q C_i(p, q) <= xi_i.
inline SpectrumSet spectrum_general(const Presentation& p, std::size_t k, double dedup_tol = 1e-9,
                                    const Limits& limits = {}) {
  detail::require_finite(p);
  if (k == 0) throw InvalidInput("spectrum_general needs k >= 1");
  const auto xi = xi_sequence(p);
  const std::size_t lags = xi.last_nonzero();
  std::vector<SpectrumEntry> found;
  std::uint64_t total = 0;
  if (lags == 0) {
    found.push_back(SpectrumEntry{0.0, 0.0, {}, {}, 1});
    return detail::assemble(std::move(found), dedup_tol, 1);
  }

  // Up-front size of the whole family.
  long double attempted = 0;
  for (std::size_t l = 1; l <= k; ++l) {
    long double per_l = 1;
    for (std::size_t i = 1; i <= lags; ++i)
      per_l *= std::pow(static_cast<long double>(detail::bounded_compositions(l, xi(i)).size()), static_cast<long double>(l));
    attempted += per_l;
  }
  if (attempted > static_cast<long double>(limits.matrices)) {
    const auto shown = attempted >= 1.8e19L ? std::numeric_limits<std::uint64_t>::max()
                                            : static_cast<std::uint64_t>(attempted);
    throw ResourceLimit("spectrum_general would enumerate " + std::to_string(shown) + " matrices (cap " +
                            std::to_string(limits.matrices) + ")",
                        shown);
  }

  for (std::size_t l = 1; l <= k; ++l) {
    // One choice list per (lag, row); a row of the top block picks one of each.
    std::vector<std::vector<std::vector<std::int64_t>>> options(lags);
    for (std::size_t i = 0; i < lags; ++i) options[i] = detail::bounded_compositions(l, xi(i + 1));
    const std::size_t slots = lags * l;  // slot (r, i) = r * lags + i
    std::vector<std::size_t> pick(slots, 0);
    std::vector<std::vector<std::size_t>> perms;
    {
      std::vector<std::size_t> perm(l);
      std::iota(perm.begin(), perm.end(), 0);
      do perms.push_back(perm);
      while (std::next_permutation(perm.begin(), perm.end()));
    }
    std::vector<IntMatrix> blocks(lags, IntMatrix(l, std::vector<std::int64_t>(l, 0)));
    while (true) {
      ++total;
      for (std::size_t r = 0; r < l; ++r)
        for (std::size_t i = 0; i < lags; ++i) blocks[i][r] = options[i][pick[r * lags + i]];
      // Keep only the lexicographically smallest member of each relabelling orbit.
      const auto key = detail::permuted_key(blocks, perms.front());
      bool canonical = true;
      for (std::size_t t = 1; t < perms.size() && canonical; ++t)
        if (detail::permuted_key(blocks, perms[t]) < key) canonical = false;
      if (canonical) {
        auto m = detail::companion_blocks(blocks, l);
        const double lambda = spectral_radius(m);
        found.push_back(SpectrumEntry{log_prime(lambda), lambda, {}, std::move(m), l});
      }
      std::size_t s = slots;
      bool done = true;
      while (s > 0) {
        --s;
        if (++pick[s] < options[s % lags].size()) {
          done = false;
          break;
        }
        pick[s] = 0;
      }
      if (done) break;
    }
  }
  return detail::assemble(std::move(found), dedup_tol, total);
}

/// Two-symbol lag system whose degree is ln' lambda(alpha); symbol 2 is inessential.
inline Snre realize_snre(const Presentation& p, const AlphaVector& alpha) {
  detail::require_finite(p);
  const auto xi = xi_sequence(p);
  for (std::size_t m = 1; m <= alpha.size(); ++m)
    if (alpha[m - 1] > xi(m))
      throw InvalidInput("alpha_" + std::to_string(m) + " = " + std::to_string(alpha[m - 1]) + " exceeds xi_" +
                         std::to_string(m) + " = " + std::to_string(xi(m)));
  LagSnre s;
  s.k = 2;
  s.xi = xi;
  s.lags = std::max(xi.last_nonzero(), alpha.size());
  s.active = {true, false};
  s.factors.resize(2);
  s.monomials.assign(2, {Exponents(2 * s.lags, 0)});
  for (std::size_t m = 1; m <= s.lags; ++m) {
    const std::uint64_t a = m <= alpha.size() ? alpha[m - 1] : 0;
    const std::uint64_t x = xi(m);
    s.monomials[0][0][(m - 1) * 2] = static_cast<std::uint32_t>(a);
    s.monomials[0][0][(m - 1) * 2 + 1] = static_cast<std::uint32_t>(x - a);
    s.monomials[1][0][(m - 1) * 2 + 1] = static_cast<std::uint32_t>(x);
    for (std::uint64_t t = 0; t < x; ++t) {
      s.factors[0].push_back(LagFactor{m, {}, t < a ? std::vector<std::uint8_t>{1, 0} : std::vector<std::uint8_t>{0, 1}});
      s.factors[1].push_back(LagFactor{m, {}, {0, 1}});
    }
  }
  Snre out;
  out.lag = std::move(s);
  return out;
}

inline DegreeResult degree(const Snre& s, double tol = 1e-12) {
  if (!s.lag) throw InvalidInput("system has no lag form");
  return degree_of(*s.lag, tol);
}

}  // namespace monoshift
