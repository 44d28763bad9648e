#include "sbn/landscape.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "sbn/errors.hpp"

namespace sbn {

void Landscape::validate() const {
  for (std::size_t id = 0; id < values.size(); ++id) {
    if (!std::isfinite(values[id]))
      throw ShapeError("landscape value at arch_id " + std::to_string(id) + " is not finite");
  }
}

std::array<std::uint8_t, 64> discretize(const Landscape& l, const DiscretizeScheme& scheme) {
  l.validate();
  std::array<std::uint8_t, 64> labels{};
  switch (scheme.kind) {
    case DiscretizeScheme::Kind::Median: {
      std::array<double, 64> sorted = l.values;
      std::sort(sorted.begin(), sorted.end());
      const double median = (sorted[31] + sorted[32]) / 2.0;
      for (int id = 0; id < 64; ++id) labels[id] = l.values[id] > median ? 1 : 0;
      break;
    }
    case DiscretizeScheme::Kind::EliteCount: {
      if (scheme.k < 0 || scheme.k > 64)
        throw ConfigError("elite count must lie in [0, 64], got " + std::to_string(scheme.k));
      std::array<int, 64> order{};
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (l.values[a] != l.values[b]) return l.values[a] > l.values[b];
        return a < b;
      });
      for (int r = 0; r < scheme.k; ++r) labels[order[r]] = 1;
      break;
    }
    case DiscretizeScheme::Kind::Threshold:
      for (int id = 0; id < 64; ++id) labels[id] = l.values[id] > scheme.t ? 1 : 0;
      break;
  }
  return labels;
}

namespace {

/* Spread the low bits of `context` over the arch_id bit positions not in
   `skip_mask`, highest position first. */
int expand_context(int context, int skip_mask, int free_bits) {
  int id = 0;
  int next = free_bits - 1;
  for (int pos = 5; pos >= 0; --pos) {
    if (skip_mask & (1 << pos)) continue;
    if (context & (1 << next)) id |= 1 << pos;
    --next;
  }
  return id;
}

void finish_moments(double sum, double sum_sq, int n, double& mean, double& variance,
                    double& ratio, bool ratio_is_cv) {
  mean = sum / n;
  variance = std::max(0.0, sum_sq / n - mean * mean);
  const double sd = std::sqrt(variance);
  /* cv = sd/|mean|, snr = |mean|/sd; both get an infinity sentinel when the
     denominator vanishes but the numerator does not, and 0 when both do. */
  const double num = ratio_is_cv ? sd : std::abs(mean);
  const double den = ratio_is_cv ? std::abs(mean) : sd;
  if (den == 0.0)
    ratio = num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  else
    ratio = num / den;
}

} // namespace

std::array<EdgeEffect, 6> edge_effects(const Landscape& l) {
  l.validate();
  std::array<EdgeEffect, 6> out{};
  for (int i = 0; i < kConstraintCount; ++i) {
    EdgeEffect& e = out[i];
    const int bit = 1 << constraint_bit(i);
    double sum = 0, sum_sq = 0;
    for (int c = 0; c < 32; ++c) {
      const int base = expand_context(c, bit, 5);
      const double delta = l.values[base | bit] - l.values[base];
      e.deltas[c] = delta;
      sum += delta;
      sum_sq += delta * delta;
      if (delta > 0)
        ++e.positive;
      else if (delta < 0)
        ++e.negative;
      else
        ++e.zero;
    }
    finish_moments(sum, sum_sq, 32, e.mean, e.variance, e.cv, /*ratio_is_cv=*/true);
    e.sign_stability = e.positive / 32.0;
  }
  return out;
}

const EpistasisCell& EpistasisMatrix::at(int i, int j) const {
  if (i == j || i < 0 || j < 0 || i >= kConstraintCount || j >= kConstraintCount)
    throw ShapeError("epistasis cell requires two distinct constraint indices in 0..5");
  return i < j ? cells[i][j] : cells[j][i];
}

EpistasisMatrix epistasis(const Landscape& l) {
  l.validate();
  EpistasisMatrix m;
  for (int i = 0; i < kConstraintCount; ++i) {
    for (int j = i + 1; j < kConstraintCount; ++j) {
      EpistasisCell& cell = m.cells[i][j];
      const int bi = 1 << constraint_bit(i);
      const int bj = 1 << constraint_bit(j);
      double sum = 0, sum_sq = 0;
      for (int c = 0; c < 16; ++c) {
        const int base = expand_context(c, bi | bj, 4);
        const double eps = l.values[base | bi | bj] - l.values[base | bi] -
                           l.values[base | bj] + l.values[base];
        cell.epsilons[c] = eps;
        sum += eps;
        sum_sq += eps * eps;
        if (eps > 0)
          ++cell.synergy;
        else if (eps < 0)
          ++cell.antagonism;
        else
          ++cell.zero;
      }
      finish_moments(sum, sum_sq, 16, cell.mean, cell.variance, cell.snr, /*ratio_is_cv=*/false);
    }
  }
  return m;
}

double lift(const std::array<std::uint8_t, 64>& labels, int constraint_index) {
  if (constraint_index < 0 || constraint_index >= kConstraintCount)
    throw ShapeError("constraint index must lie in 0..5");
  const int bit = 1 << constraint_bit(constraint_index);
  int hits1 = 0, hits0 = 0;
  for (int id = 0; id < 64; ++id) {
    if (!labels[id]) continue;
    if (id & bit)
      ++hits1;
    else
      ++hits0;
  }
  const double rate1 = hits1 / 32.0;
  const double rate0 = hits0 / 32.0;
  if (rate0 == 0.0) return rate1 == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  return rate1 / rate0;
}

} // namespace sbn
