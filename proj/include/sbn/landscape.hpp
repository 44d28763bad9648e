#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "sbn/predicates.hpp"

namespace sbn {

/* A scalar fitness on every vertex of the 6-constraint hypercube, indexed by
   arch_id. Bit positions follow ConstraintVector: S=32 ... L=1. */
struct Landscape {
  std::array<double, 64> values{};

  double at(int arch_id) const { return values[static_cast<std::size_t>(arch_id)]; }

  /* All 64 entries finite. Throws ShapeError otherwise. */
  void validate() const;
};

struct DiscretizeScheme {
  enum class Kind { Median, EliteCount, Threshold };
  Kind kind = Kind::Median;
  int k = 10;       // EliteCount
  double t = 0;     // Threshold

  static DiscretizeScheme median() { return {Kind::Median, 0, 0}; }
  static DiscretizeScheme elite_count(int k) { return {Kind::EliteCount, k, 0}; }
  static DiscretizeScheme threshold(double t) { return {Kind::Threshold, 0, t}; }
};

/* Binary label per vertex. Median: value strictly above the midpoint of the
   32nd/33rd order statistics (ties label 0). EliteCount: top k by value, ties
   to the lower arch_id. Threshold: value > t. */
std::array<std::uint8_t, 64> discretize(const Landscape& l, const DiscretizeScheme& scheme);

/* Per-constraint marginal structure: the 32 per-context toggle deltas. */
struct EdgeEffect {
  double mean = 0;
  double variance = 0;        // population variance
  double cv = 0;              // sd / |mean|, +inf when mean == 0 and sd > 0
  double sign_stability = 0;  // fraction of contexts with delta > 0
  int positive = 0;
  int zero = 0;
  int negative = 0;
  std::array<double, 32> deltas{}; // contexts in lexicographic order of the
                                   // remaining constraints, S before L
};

std::array<EdgeEffect, 6> edge_effects(const Landscape& l);

/* Pairwise interaction structure: 16 per-context second differences
   f11 - f10 - f01 + f00. */
struct EpistasisCell {
  double mean = 0;
  double variance = 0; // population variance
  double snr = 0;      // |mean| / sd; +inf when sd == 0 and mean != 0; 0 when both 0
  int synergy = 0;     // contexts with epsilon > 0
  int antagonism = 0;  // contexts with epsilon < 0
  int zero = 0;
  std::array<double, 16> epsilons{};
};

struct EpistasisMatrix {
  /* cells[i][j] defined for i < j over constraint indices 0..5 (S..L). */
  std::array<std::array<EpistasisCell, 6>, 6> cells{};

  const EpistasisCell& at(int i, int j) const;
};

EpistasisMatrix epistasis(const Landscape& l);

/* rate(label=1 | bit=1) / rate(label=1 | bit=0); +inf when only the
   denominator rate vanishes, 1.0 when both do. */
double lift(const std::array<std::uint8_t, 64>& labels, int constraint_index);

/* Constraint index 0..5 (S..L) -> arch_id bit position 5..0. */
inline int constraint_bit(int constraint_index) { return 5 - constraint_index; }

} // namespace sbn
