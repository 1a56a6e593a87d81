#pragma once

// Monoids G = <s_1..s_d | R_A> where s_i s_j = s_i exactly when A(i,j) = 0.
// Generators are 0-based internally; all text and JSON I/O is 1-based.

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "monoshift/errors.hpp"

namespace monoshift {

using Generator = std::size_t;
using BinaryMatrix = std::vector<std::vector<std::uint8_t>>;

/// A word over the generators; the empty word is the identity e.
struct Word {
  std::vector<Generator> symbols;
  bool reduced = false;

  std::size_t size() const noexcept { return symbols.size(); }
  bool empty() const noexcept { return symbols.empty(); }
  friend bool operator==(const Word& a, const Word& b) { return a.symbols == b.symbols; }
  friend auto operator<=>(const Word& a, const Word& b) { return a.symbols <=> b.symbols; }
};

/// Builds a word from 1-based generator indices, e.g. {2, 1, 3} for s2 s1 s3.
inline Word word_from_one_based(const std::vector<int>& indices) {
  Word w;
  w.symbols.reserve(indices.size());
  for (int i : indices) {
    if (i < 1) throw InvalidInput("generator index must be >= 1, got " + std::to_string(i));
    w.symbols.push_back(static_cast<Generator>(i - 1));
  }
  return w;
}

inline std::vector<int> to_one_based(const Word& w) {
  std::vector<int> out;
  out.reserve(w.size());
  for (Generator g : w.symbols) out.push_back(static_cast<int>(g) + 1);
  return out;
}

/// "e" for the identity, otherwise "s2s1s3".
inline std::string to_string(const Word& w) {
  if (w.empty()) return "e";
  std::string s;
  for (Generator g : w.symbols) s += "s" + std::to_string(g + 1);
  return s;
}

inline void check_square_binary(const BinaryMatrix& m, std::size_t n, const char* what) {
  if (m.size() != n) {
    throw InvalidInput(std::string(what) + ": expected " + std::to_string(n) + " rows, got " +
                       std::to_string(m.size()));
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (m[i].size() != n) {
      throw InvalidInput(std::string(what) + ": row " + std::to_string(i + 1) + " has " +
                         std::to_string(m[i].size()) + " entries, expected " + std::to_string(n));
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (m[i][j] > 1) {
        throw InvalidInput(std::string(what) + ": entry (" + std::to_string(i + 1) + "," +
                           std::to_string(j + 1) + ") is not 0 or 1");
      }
    }
  }
}

class Presentation {
 public:
  explicit Presentation(BinaryMatrix a) : a_(std::move(a)) {
    if (a_.empty()) throw InvalidInput("presentation needs at least one generator");
    check_square_binary(a_, a_.size(), "presentation matrix A");
  }

  /// Free monoid on d generators (all-ones A).
  static Presentation free(std::size_t d) {
    return Presentation(BinaryMatrix(d, std::vector<std::uint8_t>(d, 1)));
  }

  std::size_t generators() const noexcept { return a_.size(); }
  const BinaryMatrix& matrix() const noexcept { return a_; }

  /// True when s_i s_j is a length-2 word (no absorption).
  bool allows(Generator i, Generator j) const { return a_[i][j] != 0; }

  bool is_right_free(Generator i) const {
    for (auto v : a_[i])
      if (v == 0) return false;
    return true;
  }

 private:
  BinaryMatrix a_;
};

inline void check_symbols(const Presentation& p, const Word& w) {
  for (Generator g : w.symbols) {
    if (g >= p.generators()) {
      throw InvalidInput("generator s" + std::to_string(g + 1) + " out of range 1.." +
                         std::to_string(p.generators()));
    }
  }
}

/// Normal form by one left-to-right absorption scan: a symbol survives iff it
/// follows the last survivor along an allowed pair.
inline Word reduce(const Presentation& p, const Word& w) {
  check_symbols(p, w);
  Word out;
  out.reduced = true;
  out.symbols.reserve(w.size());
  for (Generator g : w.symbols) {
    if (out.symbols.empty() || p.allows(out.symbols.back(), g)) out.symbols.push_back(g);
  }
  return out;
}

inline std::size_t length(const Presentation& p, const Word& w) { return reduce(p, w).size(); }

/// S_R: generators whose row of A is all ones.
inline std::vector<Generator> right_free_generators(const Presentation& p) {
  std::vector<Generator> out;
  for (Generator i = 0; i < p.generators(); ++i)
    if (p.is_right_free(i)) out.push_back(i);
  return out;
}

/// |g s| = |g| + 1 for reduced g.
inline bool is_length_additive(const Presentation& p, const Word& g, Generator s) {
  if (s >= p.generators()) throw InvalidInput("generator index out of range");
  return g.empty() || p.allows(g.symbols.back(), s);
}

}  // namespace monoshift
