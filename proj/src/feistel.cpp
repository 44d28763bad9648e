#include "sbn/feistel.hpp"

#include "sbn/errors.hpp"

namespace sbn {

namespace {

void check_core_shape(int n_in, int n_out) {
  if (n_in != 8 || n_out != 8)
    throw ShapeError("feistel core must map 8 bits to 8 bits, got " + std::to_string(n_in) + "->" +
                     std::to_string(n_out));
}

void check_rounds(int rounds) {
  if (rounds < 1) throw ShapeError("feistel round count must be >= 1");
}

} // namespace

std::uint32_t feistel_evaluate(const FeistelWrapper& w, std::uint32_t x) {
  check_core_shape(w.core.n_in(), w.core.n_out());
  check_rounds(w.round_count);
  std::uint32_t left = (x >> 8) & 0xFFu;
  std::uint32_t right = x & 0xFFu;
  for (int r = 0; r < w.round_count; ++r) {
    const std::uint32_t next_right = left ^ io_map(w.core, right);
    left = right;
    right = next_right;
  }
  return (left << 8) | right;
}

std::uint32_t feistel_evaluate(const TruthTable& core, int rounds, std::uint32_t x) {
  check_core_shape(core.n, core.m);
  check_rounds(rounds);
  std::uint32_t left = (x >> 8) & 0xFFu;
  std::uint32_t right = x & 0xFFu;
  for (int r = 0; r < rounds; ++r) {
    const std::uint32_t next_right = left ^ core.entries[right];
    left = right;
    right = next_right;
  }
  return (left << 8) | right;
}

TruthTable feistel_table(const TruthTable& core, int rounds) {
  check_core_shape(core.n, core.m);
  check_rounds(rounds);
  TruthTable t;
  t.n = 16;
  t.m = 16;
  t.entries.resize(std::size_t{1} << 16);
  for (std::uint32_t x = 0; x < t.entries.size(); ++x)
    t.entries[x] = feistel_evaluate(core, rounds, x);
  return t;
}

TruthTable feistel_table(const FeistelWrapper& w) {
  return feistel_table(truth_table(w.core), w.round_count);
}

} // namespace sbn
