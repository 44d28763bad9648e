#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "sbn/network.hpp"

namespace sbn {

/* Exact-mode bound: tables are materialized only up to 16 input bits. */
inline constexpr int kMaxExactBits = 16;

/* Exhaustive input -> output map of a vectorial Boolean function; the unit all
   cryptanalytic kernels consume. entries[x] is the m-bit output word for x. */
struct TruthTable {
  int n = 0;
  int m = 0;
  std::vector<std::uint32_t> entries;

  std::uint32_t operator()(std::uint32_t x) const { return entries[x]; }
  int domain() const { return 1 << n; }

  void validate() const;
};

/* Enumerates f over all 2^n inputs in ascending order. */
TruthTable truth_table(const std::function<std::uint32_t(std::uint32_t)>& f, int n, int m);

/* The io map of a network, tabulated. */
TruthTable truth_table(const SbnNetwork& net);

/* FNV-1a over (n, m, entries); used as the fitness-cache key. */
std::uint64_t table_digest(const TruthTable& t);

/* Raw little-endian word dump with an (n, m) header. */
void save_table(const TruthTable& t, const std::string& path);
TruthTable load_table(const std::string& path);

} // namespace sbn
