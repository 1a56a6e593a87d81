#pragma once

#include <cstdint>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace monoshift {

using BigInt = boost::multiprecision::cpp_int;
using IntMatrix = std::vector<std::vector<std::int64_t>>;

inline std::vector<std::vector<BigInt>> to_big(const IntMatrix& m) {
  std::vector<std::vector<BigInt>> out(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) out[i].assign(m[i].begin(), m[i].end());
  return out;
}

/// Exact traces tr(M^1) .. tr(M^count).
inline std::vector<BigInt> power_traces(const IntMatrix& m, std::size_t count) {
  const std::size_t n = m.size();
  const auto base = to_big(m);
  auto power = base;
  std::vector<BigInt> traces;
  traces.reserve(count);
  for (std::size_t e = 1; e <= count; ++e) {
    BigInt t = 0;
    for (std::size_t i = 0; i < n; ++i) t += power[i][i];
    traces.push_back(t);
    if (e == count) break;
    std::vector<std::vector<BigInt>> next(n, std::vector<BigInt>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) {
        if (power[i][k] == 0) continue;
        for (std::size_t j = 0; j < n; ++j)
          if (base[k][j] != 0) next[i][j] += power[i][k] * base[k][j];
      }
    power = std::move(next);
  }
  return traces;
}

}  // namespace monoshift
