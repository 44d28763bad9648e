#pragma once

#include <cstdint>
#include <vector>

#include "sbn/landscape.hpp"

namespace sbn {

struct WilcoxonResult {
  std::uint32_t pattern = 0;  // constraint-index mask held at 1
  int constraint = -1;        // toggled constraint index
  std::vector<double> deltas; // paired differences, zeros included
  double w_plus = 0;          // positive-rank sum, average ranks on ties
  double p_value = 1;         // exact two-sided sign-permutation p
  bool locally_neutral = true; // p > 0.05
  bool all_zero = false;
  int pairs_used = 0; // nonzero deltas entering the statistic
};

/* Exact signed-rank test of median zero. Zero deltas are dropped, tied
   magnitudes get average ranks, and the null distribution is enumerated in
   full over sign assignments, never approximated. */
WilcoxonResult wilcoxon_exact(const std::vector<double>& deltas);

/* Paired toggle test of `constraint_index` on the subcube where every
   constraint in `pattern` (constraint-index mask) is held at 1. */
WilcoxonResult wilcoxon_validate(const Landscape& l, std::uint32_t pattern,
                                 int constraint_index);

} // namespace sbn
