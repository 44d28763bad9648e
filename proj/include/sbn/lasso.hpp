#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sbn/cube_walsh.hpp"
#include "sbn/landscape.hpp"

namespace sbn {

struct ModelTerm {
  enum class Kind { FirstOrder, Pairwise, Indicator };
  Kind kind = Kind::FirstOrder;
  /* FirstOrder/Pairwise: subset mask in the arch_id bit layout.
     Indicator: constraint-index mask (bit i = constraint i held at 1). */
  std::uint32_t mask = 0;
  std::string name;
};

struct PathPoint {
  double penalty = 0;
  double cv_error = 0; // mean held-out squared error
  int nonzero_terms = 0;
};

struct RestrictedModel {
  std::vector<ModelTerm> terms;     // design columns in order
  std::vector<double> coefficients; // original feature scale
  double intercept = 0;
  double penalty = 0; // chosen by cross-validation unless fixed
  double r2 = 0;
  std::array<double, 64> residuals{};
  std::vector<int> selected;         // indices into terms with nonzero coefficient
  std::vector<PathPoint> path;       // full penalty grid, largest first
  std::vector<std::string> dropped;  // constant design columns removed
};

struct LassoOptions {
  int top_pairwise = 9;   // pairwise sign features kept, ranked by |f_hat|
  int folds = 8;
  double tolerance = 1e-8;
  int max_iterations = 100000;
  int grid_size = 50;
  double grid_ratio = 1e-4; // smallest penalty = ratio * largest
  std::optional<double> fixed_penalty;
};

/* Sparse linear read-out of a landscape: six first-order sign features, the
   strongest pairwise sign features, and 0/1 class-membership indicators for
   the given constraint patterns (constraint-index masks). Columns are
   standardized, coefficients fitted by L1-penalized coordinate descent, and
   reported on the original feature scale. */
RestrictedModel fit_restricted_model(const Landscape& l, const WalshDecomposition& d,
                                     const std::vector<std::uint32_t>& fca_patterns,
                                     const LassoOptions& opt = {});

} // namespace sbn
