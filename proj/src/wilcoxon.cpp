#include "sbn/wilcoxon.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>

#include "sbn/errors.hpp"

namespace sbn {

WilcoxonResult wilcoxon_exact(const std::vector<double>& deltas) {
  WilcoxonResult res;
  res.deltas = deltas;

  std::vector<double> magnitudes;
  std::vector<bool> positive;
  for (double d : deltas) {
    if (d == 0.0) continue;
    magnitudes.push_back(std::abs(d));
    positive.push_back(d > 0);
  }
  const int n = static_cast<int>(magnitudes.size());
  res.pairs_used = n;
  if (n == 0) {
    res.all_zero = true;
    res.p_value = 1.0;
    res.locally_neutral = true;
    return res;
  }

  /* Average ranks over tied magnitudes; doubling keeps them integral. */
  std::vector<int> order(magnitudes.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return magnitudes[a] < magnitudes[b]; });
  std::vector<int> rank2(magnitudes.size());
  for (int lo = 0; lo < n;) {
    int hi = lo;
    while (hi + 1 < n && magnitudes[order[hi + 1]] == magnitudes[order[lo]]) ++hi;
    const int doubled = (lo + 1) + (hi + 1); // 2 * average of ranks lo+1 .. hi+1
    for (int k = lo; k <= hi; ++k) rank2[order[k]] = doubled;
    lo = hi + 1;
  }

  int w2 = 0, total2 = 0;
  for (std::size_t k = 0; k < rank2.size(); ++k) {
    total2 += rank2[k];
    if (positive[k]) w2 += rank2[k];
  }
  res.w_plus = w2 / 2.0;

  /* Exact null: count sign assignments by achievable doubled rank sum. */
  std::vector<double> count(static_cast<std::size_t>(total2) + 1, 0.0);
  count[0] = 1.0;
  for (int r : rank2) {
    for (int s = total2; s >= r; --s) count[static_cast<std::size_t>(s)] += count[static_cast<std::size_t>(s - r)];
  }
  const double all = std::ldexp(1.0, n);
  double below = 0, above = 0;
  for (int s = 0; s <= total2; ++s) {
    if (s <= w2) below += count[static_cast<std::size_t>(s)];
    if (s >= w2) above += count[static_cast<std::size_t>(s)];
  }
  res.p_value = std::min(1.0, 2.0 * std::min(below, above) / all);
  res.locally_neutral = res.p_value > 0.05;
  return res;
}

WilcoxonResult wilcoxon_validate(const Landscape& l, std::uint32_t pattern,
                                 int constraint_index) {
  l.validate();
  if (constraint_index < 0 || constraint_index >= kConstraintCount)
    throw ShapeError("constraint index must lie in 0..5");
  if (pattern >= 64u) throw ShapeError("pattern mask must lie in 0..63");
  if (pattern & (1u << constraint_index))
    throw ShapeError("tested constraint must not be part of the fixed pattern");

  int fixed_bits = 0;
  for (int i = 0; i < kConstraintCount; ++i)
    if (pattern & (1u << i)) fixed_bits |= 1 << constraint_bit(i);
  const int toggle_bit = 1 << constraint_bit(constraint_index);

  std::vector<int> free_positions;
  for (int pos = 5; pos >= 0; --pos) {
    const int bit = 1 << pos;
    if (!(fixed_bits & bit) && bit != toggle_bit) free_positions.push_back(pos);
  }
  const int contexts = 1 << free_positions.size();
  if (contexts < 2)
    throw ShapeError("restricted subcube needs at least 2 paired contexts, pattern leaves " +
                     std::to_string(contexts));

  std::vector<double> deltas(static_cast<std::size_t>(contexts));
  for (int c = 0; c < contexts; ++c) {
    int base = fixed_bits;
    for (std::size_t k = 0; k < free_positions.size(); ++k) {
      if (c & (1 << (free_positions.size() - 1 - k))) base |= 1 << free_positions[k];
    }
    deltas[static_cast<std::size_t>(c)] = l.values[static_cast<std::size_t>(base | toggle_bit)] -
                                          l.values[static_cast<std::size_t>(base)];
  }

  WilcoxonResult res = wilcoxon_exact(deltas);
  res.pattern = pattern;
  res.constraint = constraint_index;
  return res;
}

} // namespace sbn
