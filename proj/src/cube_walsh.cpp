#include "sbn/cube_walsh.hpp"

#include <bit>

namespace sbn {

WalshDecomposition walsh_decompose(const Landscape& l) {
  l.validate();
  WalshDecomposition d;
  for (int s = 0; s < 64; ++s) {
    double acc = 0;
    for (int c = 0; c < 64; ++c) {
      /* chi_S(c) = product over i in S of (2*C_i - 1). */
      const int sign = std::popcount(static_cast<unsigned>(s & ~c & 63)) & 1;
      acc += sign ? -l.values[static_cast<std::size_t>(c)] : l.values[static_cast<std::size_t>(c)];
    }
    d.coefficients[static_cast<std::size_t>(s)] = acc / 64.0;
  }

  for (int s = 1; s < 64; ++s) {
    const double sq = d.coefficients[static_cast<std::size_t>(s)] * d.coefficients[static_cast<std::size_t>(s)];
    d.variance_by_order[static_cast<std::size_t>(std::popcount(static_cast<unsigned>(s)))] += sq;
    d.total_variance += sq;
  }

  if (d.total_variance == 0.0) {
    d.degenerate = true;
    return d;
  }
  for (int k = 1; k <= 6; ++k)
    d.eta_by_order[static_cast<std::size_t>(k)] = d.variance_by_order[static_cast<std::size_t>(k)] / d.total_variance;
  for (int s = 1; s < 64; ++s) {
    const double c = d.coefficients[static_cast<std::size_t>(s)];
    d.eta_by_subset[static_cast<std::size_t>(s)] = c * c / d.total_variance;
  }
  return d;
}

} // namespace sbn
