#pragma once

/* Independent brute-force reference implementations used only by tests. They
   deliberately avoid the library's algorithms (full DDT materialization,
   direct correlation sums, polynomial evaluation) so agreement is meaningful. */

#include <bit>
#include <cstdint>
#include <cstdlib>
#include <vector>

#include "sbn/cryptanalysis.hpp"
#include "sbn/rng.hpp"
#include "sbn/truth_table.hpp"

namespace oracles {

inline std::vector<std::vector<std::uint32_t>> full_ddt(const sbn::TruthTable& t) {
  const std::uint32_t domain = 1u << t.n;
  const std::uint32_t range = 1u << t.m;
  std::vector<std::vector<std::uint32_t>> ddt(domain, std::vector<std::uint32_t>(range, 0));
  for (std::uint32_t alpha = 0; alpha < domain; ++alpha)
    for (std::uint32_t x = 0; x < domain; ++x)
      ++ddt[alpha][t.entries[x] ^ t.entries[x ^ alpha]];
  return ddt;
}

/* 2^n * C_F(a, b) by direct summation. */
inline long long correlation(const sbn::TruthTable& t, std::uint32_t a, std::uint32_t b) {
  long long sum = 0;
  for (std::uint32_t x = 0; x < t.entries.size(); ++x) {
    const int bits = std::popcount(a & x) + std::popcount(b & t.entries[x]);
    sum += (bits & 1) ? -1 : 1;
  }
  return sum;
}

inline double lp_max_naive(const sbn::TruthTable& t) {
  long long best = 0;
  for (std::uint32_t a = 1; a < t.entries.size(); ++a)
    for (std::uint32_t b = 1; b < (1u << t.m); ++b)
      best = std::max(best, std::llabs(correlation(t, a, b)));
  return static_cast<double>(best) / static_cast<double>(t.entries.size());
}

/* Evaluates an ANF polynomial coordinate at x: xor over monomials u contained
   in x. Checking anf() against the table through evaluation is independent of
   the Moebius transform that produced it. */
inline bool eval_anf(const sbn::AnfPolynomial& p, int coordinate, std::uint32_t x) {
  bool value = false;
  for (std::uint32_t u : p.monomials[static_cast<std::size_t>(coordinate)])
    if ((u & x) == u) value = !value;
  return value;
}

inline sbn::TruthTable random_table(int n, int m, sbn::Rng& rng) {
  sbn::TruthTable t;
  t.n = n;
  t.m = m;
  t.entries.resize(std::size_t{1} << n);
  for (auto& w : t.entries) w = static_cast<std::uint32_t>(rng.below(std::uint64_t{1} << m));
  return t;
}

inline sbn::TruthTable random_permutation(int n, sbn::Rng& rng) {
  sbn::TruthTable t;
  t.n = n;
  t.m = n;
  t.entries.resize(std::size_t{1} << n);
  for (std::uint32_t x = 0; x < t.entries.size(); ++x) t.entries[x] = x;
  for (std::size_t i = t.entries.size(); i > 1; --i)
    std::swap(t.entries[i - 1], t.entries[rng.below(i)]);
  return t;
}

inline int rank_gf2_naive(std::vector<std::vector<int>> m) {
  if (m.empty()) return 0;
  const std::size_t cols = m[0].size();
  int rank = 0;
  for (std::size_t c = 0; c < cols; ++c) {
    std::size_t pivot = m.size();
    for (std::size_t r = static_cast<std::size_t>(rank); r < m.size(); ++r)
      if (m[r][c]) {
        pivot = r;
        break;
      }
    if (pivot == m.size()) continue;
    std::swap(m[pivot], m[static_cast<std::size_t>(rank)]);
    for (std::size_t r = 0; r < m.size(); ++r)
      if (r != static_cast<std::size_t>(rank) && m[r][c])
        for (std::size_t k = 0; k < cols; ++k) m[r][k] ^= m[static_cast<std::size_t>(rank)][k];
    ++rank;
  }
  return rank;
}

} // namespace oracles
