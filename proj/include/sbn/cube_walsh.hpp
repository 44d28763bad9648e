#pragma once

#include <array>

#include "sbn/landscape.hpp"

namespace sbn {

/* Orthogonal expansion of a landscape over products of centered coordinates
   x_i = 2*C_i - 1. Subset masks share the arch_id bit layout (S=32 .. L=1). */
struct WalshDecomposition {
  std::array<double, 64> coefficients{};     // f_hat per subset mask
  std::array<double, 7> variance_by_order{}; // V_k = sum of squares at |S| = k
  std::array<double, 7> eta_by_order{};      // V_k / total, k >= 1; 0 when degenerate
  std::array<double, 64> eta_by_subset{};
  double total_variance = 0; // sum over nonempty subsets; equals Var(f)
  bool degenerate = false;   // constant landscape, shares undefined
};

WalshDecomposition walsh_decompose(const Landscape& l);

} // namespace sbn
