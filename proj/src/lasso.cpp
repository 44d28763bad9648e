#include "sbn/lasso.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "sbn/errors.hpp"

namespace sbn {

namespace {

constexpr int kRows = 64;

double soft_threshold(double value, double penalty) {
  if (value > penalty) return value - penalty;
  if (value < -penalty) return value + penalty;
  return 0.0;
}

/* Coordinate descent for (1/(2N)) * ||y - X b||^2 + penalty * ||b||_1 on
   standardized columns (zero mean, unit population variance on the fit rows).
   `rows` selects the fit subset; b is the warm start and the result. */
void descend(const std::vector<std::vector<double>>& cols, const std::vector<double>& y,
             const std::vector<int>& rows, double penalty, double tolerance,
             int max_iterations, std::vector<double>& b) {
  const std::size_t p = cols.size();
  const double n = static_cast<double>(rows.size());
  std::vector<double> residual(rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    double fit = 0;
    for (std::size_t j = 0; j < p; ++j) fit += b[j] * cols[j][static_cast<std::size_t>(rows[k])];
    residual[k] = y[static_cast<std::size_t>(rows[k])] - fit;
  }
  for (int it = 0; it < max_iterations; ++it) {
    double max_step = 0;
    for (std::size_t j = 0; j < p; ++j) {
      double rho = 0;
      for (std::size_t k = 0; k < rows.size(); ++k)
        rho += cols[j][static_cast<std::size_t>(rows[k])] * residual[k];
      rho = rho / n + b[j];
      const double updated = soft_threshold(rho, penalty);
      const double step = updated - b[j];
      if (step != 0.0) {
        for (std::size_t k = 0; k < rows.size(); ++k)
          residual[k] -= step * cols[j][static_cast<std::size_t>(rows[k])];
        b[j] = updated;
        max_step = std::max(max_step, std::abs(step));
      }
    }
    if (max_step < tolerance) break;
  }
}

struct Standardized {
  std::vector<std::vector<double>> cols;
  std::vector<double> mean;
  std::vector<double> sd;
};

Standardized standardize(const std::vector<std::vector<double>>& raw) {
  Standardized s;
  s.cols = raw;
  for (std::vector<double>& col : s.cols) {
    const double mean = std::accumulate(col.begin(), col.end(), 0.0) / kRows;
    double var = 0;
    for (double v : col) var += (v - mean) * (v - mean);
    var /= kRows;
    const double sd = std::sqrt(var);
    s.mean.push_back(mean);
    s.sd.push_back(sd);
    for (double& v : col) v = (v - mean) / sd;
  }
  return s;
}

} // namespace

RestrictedModel fit_restricted_model(const Landscape& l, const WalshDecomposition& d,
                                     const std::vector<std::uint32_t>& fca_patterns,
                                     const LassoOptions& opt) {
  l.validate();
  if (opt.top_pairwise < 0 || opt.top_pairwise > 15)
    throw ConfigError("pairwise term count must lie in [0, 15]");
  if (opt.folds < 2 || opt.folds > kRows)
    throw ConfigError("cross-validation folds must lie in [2, 64]");
  if (opt.grid_size < 1) throw ConfigError("penalty grid needs at least one point");

  RestrictedModel model;
  std::vector<std::vector<double>> raw;

  for (int i = 0; i < kConstraintCount; ++i) {
    const int bit = 1 << constraint_bit(i);
    std::vector<double> col(kRows);
    for (int c = 0; c < kRows; ++c) col[static_cast<std::size_t>(c)] = (c & bit) ? 1.0 : -1.0;
    raw.push_back(std::move(col));
    model.terms.push_back({ModelTerm::Kind::FirstOrder, static_cast<std::uint32_t>(bit),
                           kConstraintNames[i]});
  }

  std::vector<int> pair_masks;
  for (int s = 1; s < 64; ++s)
    if (std::popcount(static_cast<unsigned>(s)) == 2) pair_masks.push_back(s);
  std::sort(pair_masks.begin(), pair_masks.end(), [&](int a, int b) {
    const double fa = std::abs(d.coefficients[static_cast<std::size_t>(a)]);
    const double fb = std::abs(d.coefficients[static_cast<std::size_t>(b)]);
    if (fa != fb) return fa > fb;
    return a < b;
  });
  pair_masks.resize(static_cast<std::size_t>(std::min<int>(opt.top_pairwise, 15)));
  for (int s : pair_masks) {
    std::vector<double> col(kRows);
    for (int c = 0; c < kRows; ++c)
      col[static_cast<std::size_t>(c)] =
          (std::popcount(static_cast<unsigned>(s & ~c & 63)) & 1) ? -1.0 : 1.0;
    std::string name;
    for (int i = 0; i < kConstraintCount; ++i) {
      if (!(s & (1 << constraint_bit(i)))) continue;
      if (!name.empty()) name += '*';
      name += kConstraintNames[i];
    }
    raw.push_back(std::move(col));
    model.terms.push_back({ModelTerm::Kind::Pairwise, static_cast<std::uint32_t>(s), name});
  }

  std::vector<std::uint32_t> patterns = fca_patterns;
  std::sort(patterns.begin(), patterns.end());
  patterns.erase(std::unique(patterns.begin(), patterns.end()), patterns.end());
  for (std::uint32_t pattern : patterns) {
    if (pattern >= 64u) throw ShapeError("indicator pattern must be a constraint-index mask");
    int arch_bits = 0;
    std::string name = "has(";
    for (int i = 0; i < kConstraintCount; ++i) {
      if (!(pattern & (1u << i))) continue;
      arch_bits |= 1 << constraint_bit(i);
      if (name.size() > 4) name += '+';
      name += kConstraintNames[i];
    }
    name += ')';
    std::vector<double> col(kRows);
    for (int c = 0; c < kRows; ++c)
      col[static_cast<std::size_t>(c)] = (c & arch_bits) == arch_bits ? 1.0 : 0.0;
    raw.push_back(std::move(col));
    model.terms.push_back({ModelTerm::Kind::Indicator, pattern, name});
  }

  /* Constant columns carry no signal and break standardization. */
  for (std::size_t j = raw.size(); j-- > 0;) {
    const bool constant = std::all_of(raw[j].begin(), raw[j].end(),
                                      [&](double v) { return v == raw[j][0]; });
    if (constant) {
      model.dropped.push_back(model.terms[j].name);
      raw.erase(raw.begin() + static_cast<std::ptrdiff_t>(j));
      model.terms.erase(model.terms.begin() + static_cast<std::ptrdiff_t>(j));
    }
  }
  std::reverse(model.dropped.begin(), model.dropped.end());

  const Standardized s = standardize(raw);
  const std::size_t p = s.cols.size();

  const double y_mean = std::accumulate(l.values.begin(), l.values.end(), 0.0) / kRows;
  std::vector<double> y(l.values.begin(), l.values.end());
  for (double& v : y) v -= y_mean;

  std::vector<double> grid;
  if (opt.fixed_penalty) {
    grid.push_back(*opt.fixed_penalty);
  } else {
    double max_corr = 0;
    for (std::size_t j = 0; j < p; ++j) {
      double corr = 0;
      for (int k = 0; k < kRows; ++k) corr += s.cols[j][static_cast<std::size_t>(k)] * y[static_cast<std::size_t>(k)];
      max_corr = std::max(max_corr, std::abs(corr) / kRows);
    }
    if (max_corr == 0.0) max_corr = 1.0;
    for (int g = 0; g < opt.grid_size; ++g) {
      const double frac = opt.grid_size == 1 ? 0.0 : static_cast<double>(g) / (opt.grid_size - 1);
      grid.push_back(max_corr * std::pow(opt.grid_ratio, frac));
    }
  }

  std::vector<int> all_rows(kRows);
  std::iota(all_rows.begin(), all_rows.end(), 0);

  /* Deterministic interleaved folds; warm starts descend the grid. */
  std::vector<std::vector<double>> fold_warm(static_cast<std::size_t>(opt.folds),
                                             std::vector<double>(p, 0.0));
  double best_cv = 0;
  std::size_t best_index = 0;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    double sse = 0;
    for (int f = 0; f < opt.folds; ++f) {
      std::vector<int> train, test;
      for (int k = 0; k < kRows; ++k) (k % opt.folds == f ? test : train).push_back(k);
      std::vector<double>& b = fold_warm[static_cast<std::size_t>(f)];
      descend(s.cols, y, train, grid[g], opt.tolerance, opt.max_iterations, b);
      double train_mean = 0;
      for (int k : train) {
        double fit = 0;
        for (std::size_t j = 0; j < p; ++j) fit += b[j] * s.cols[j][static_cast<std::size_t>(k)];
        train_mean += y[static_cast<std::size_t>(k)] - fit;
      }
      train_mean /= static_cast<double>(train.size());
      for (int k : test) {
        double fit = train_mean;
        for (std::size_t j = 0; j < p; ++j) fit += b[j] * s.cols[j][static_cast<std::size_t>(k)];
        const double err = y[static_cast<std::size_t>(k)] - fit;
        sse += err * err;
      }
    }
    const double cv = sse / kRows;
    if (g == 0 || cv < best_cv - 1e-15) {
      best_cv = cv;
      best_index = g;
    }
    model.path.push_back({grid[g], cv, 0});
  }
  model.penalty = grid[best_index];

  /* Full-data path with warm starts; keep the chosen-penalty solution. */
  std::vector<double> beta(p, 0.0);
  std::vector<double> b(p, 0.0);
  for (std::size_t g = 0; g < grid.size(); ++g) {
    descend(s.cols, y, all_rows, grid[g], opt.tolerance, opt.max_iterations, b);
    model.path[g].nonzero_terms =
        static_cast<int>(std::count_if(b.begin(), b.end(), [](double v) { return v != 0.0; }));
    if (g == best_index) beta = b;
  }

  model.coefficients.assign(p, 0.0);
  model.intercept = y_mean;
  for (std::size_t j = 0; j < p; ++j) {
    model.coefficients[j] = beta[j] / s.sd[j];
    model.intercept -= model.coefficients[j] * s.mean[j];
    if (beta[j] != 0.0) model.selected.push_back(static_cast<int>(j));
  }

  double ss_res = 0, ss_tot = 0;
  for (int k = 0; k < kRows; ++k) {
    double fit = model.intercept;
    for (std::size_t j = 0; j < p; ++j) fit += model.coefficients[j] * raw[j][static_cast<std::size_t>(k)];
    const double res = l.values[static_cast<std::size_t>(k)] - fit;
    model.residuals[static_cast<std::size_t>(k)] = res;
    ss_res += res * res;
    ss_tot += (l.values[static_cast<std::size_t>(k)] - y_mean) * (l.values[static_cast<std::size_t>(k)] - y_mean);
  }
  model.r2 = ss_tot == 0.0 ? 0.0 : std::max(0.0, 1.0 - ss_res / ss_tot);
  return model;
}

} // namespace sbn
