#pragma once

#include <cstdint>

#include "sbn/network.hpp"
#include "sbn/truth_table.hpp"

namespace sbn {

/* Balanced Feistel wrapper over an 8-bit core: the induced 16-bit map is a
   bijection for any core. Same core every round, no round keys. */
struct FeistelWrapper {
  int round_count = 2;
  SbnNetwork core; // 8-bit io map
};

/* One input: x = (L << 8) | R; each round (L, R) <- (R, L xor core(R)). */
std::uint32_t feistel_evaluate(const FeistelWrapper& w, std::uint32_t x);

/* The same construction from a tabulated core (no network evaluation). */
std::uint32_t feistel_evaluate(const TruthTable& core, int rounds, std::uint32_t x);

/* Full 16-bit table; tabulates the core once and maps all 2^16 inputs. */
TruthTable feistel_table(const FeistelWrapper& w);
TruthTable feistel_table(const TruthTable& core, int rounds);

} // namespace sbn
