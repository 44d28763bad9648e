#pragma once

#include <cstdint>
#include <vector>

#include "sbn/network.hpp"
#include "sbn/truth_table.hpp"

namespace sbn {

/* ---- differential ---- */

struct DdtSummary {
  int n = 0;
  int m = 0;
  std::uint32_t max_count = 0;               // max DDT cell over alpha != 0
  std::uint32_t argmax_alpha = 0;
  std::uint32_t argmax_beta = 0;
  std::vector<std::uint32_t> per_alpha_max;  // index alpha - 1, size 2^n - 1

  double dp_max() const { return static_cast<double>(max_count) / static_cast<double>(1u << n); }
};

/* Streams one 2^m-cell histogram per alpha (never the full 2^n x 2^m table);
   alphas are scanned in parallel when threads > 1, result independent of the
   worker count. */
DdtSummary ddt_summary(const TruthTable& t, int threads = 1);

/* -log2(DP_max); 0 exactly for dp_max = 1. */
double fit_diff(const DdtSummary& s);
double fit_diff(const TruthTable& t, int threads = 1);

/* Cross-scale variant: raw / (n - 1) maps the bijective optimum to 1. */
double normalized_score(double raw, int n);

/* ---- linear ---- */

/* Signed spectrum of (-1)^(b . F(x)): entry a equals 2^n * C_F(a, b). */
std::vector<std::int32_t> walsh_spectrum(const TruthTable& t, std::uint32_t b);

enum class LinMode { Full, Component };

/* Full mode: max |C_F(a,b)| over a != 0, b != 0 (every output mask).
   Component mode: b restricted to single-bit masks (tractable at n = 16).
   Full mode projects its runtime after the first transform and raises a budget
   error when the projection exceeds budget_seconds. */
double lp_max(const TruthTable& t, LinMode mode, double budget_seconds = 120.0, int threads = 1);
double fit_lin(const TruthTable& t, LinMode mode, double budget_seconds = 120.0, int threads = 1);

/* ---- algebraic ---- */

struct AnfPolynomial {
  int n = 0;
  int m = 0;
  std::vector<std::vector<std::uint32_t>> monomials; // per coordinate, ascending masks

  int coordinate_degree(int i) const;
  int degree() const;
};

/* Binary Moebius transform per output coordinate. */
AnfPolynomial anf(const TruthTable& t);

/* The transform is an involution; exposed for direct property checks. */
std::vector<std::uint8_t> mobius(std::vector<std::uint8_t> f, int n);

/* Max coordinate ANF degree of the k-fold composition (table lookup, so the
   table must be square for k >= 2). k = 1 is the plain degree. */
int degree_k(const TruthTable& t, int k);

/* ---- reward indicators (local structural signals) ---- */

struct DependencyMatrix {
  int m = 0;                       // rows = output coordinates
  int n = 0;                       // columns = input coordinates
  std::vector<std::uint32_t> rows; // row i: bit j set iff F_i depends on x_j

  int rank_gf2() const;
};

/* Sensitivity scan: M[i][j] = 1 iff some x has F_i(x) != F_i(x xor e_j). */
DependencyMatrix dependency_matrix(const TruthTable& t);

/* Structural indicators the rewards below take deltas of. */
double anf_entropy(const TruthTable& t);      // H_ANF
double walsh_dispersion(const TruthTable& t); // S(F): mean per-coordinate spectrum variance
double ddt_flatness(const TruthTable& t);     // D(F): variance of DDT/2^n cells, n <= 8

int reward_r1(const TruthTable& before, const TruthTable& after, int k = 2);
double reward_r2(const TruthTable& before, const TruthTable& after);
double reward_r3(const TruthTable& before, const TruthTable& after);
double reward_r4(const TruthTable& before, const TruthTable& after);
int reward_r5(const TruthTable& before, const TruthTable& after);
long long reward_r6(const SbnNetwork& before, const SbnNetwork& after);

/* Color-preserving graph automorphisms (color = role + layer + block + gate
   table + in/out degree; positions are not part of the color). <= 64 nodes. */
std::uint64_t automorphism_count(const SbnNetwork& net);

} // namespace sbn
