#include "sbn/cryptanalysis.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstring>
#include <map>
#include <mutex>
#include <tuple>

#include "sbn/errors.hpp"
#include "sbn/parallel.hpp"

namespace sbn {

/* ---- differential ---- */

DdtSummary ddt_summary(const TruthTable& t, int threads) {
  t.validate();
  const std::uint32_t domain = 1u << t.n;
  const std::uint32_t range = 1u << t.m;
  DdtSummary s;
  s.n = t.n;
  s.m = t.m;
  s.per_alpha_max.assign(domain - 1, 0);

  const int workers = std::max(1, threads);
  std::vector<std::uint32_t> best_alpha(static_cast<std::size_t>(workers), 0);
  std::vector<std::uint32_t> best_beta(static_cast<std::size_t>(workers), 0);
  std::vector<std::uint32_t> best_count(static_cast<std::size_t>(workers), 0);

  /* One alpha-chunk per worker slot; each slot owns a reusable histogram. */
  parallel_for(static_cast<std::size_t>(workers), workers, [&](std::size_t slot) {
    std::vector<std::uint32_t> hist(range, 0);
    for (std::uint32_t alpha = 1 + static_cast<std::uint32_t>(slot); alpha < domain;
         alpha += static_cast<std::uint32_t>(workers)) {
      std::fill(hist.begin(), hist.end(), 0);
      for (std::uint32_t x = 0; x < domain; ++x) ++hist[t.entries[x] ^ t.entries[x ^ alpha]];
      std::uint32_t row_max = 0, row_arg = 0;
      for (std::uint32_t beta = 0; beta < range; ++beta)
        if (hist[beta] > row_max) {
          row_max = hist[beta];
          row_arg = beta;
        }
      s.per_alpha_max[alpha - 1] = row_max;
      /* deterministic tiebreak: smallest (alpha, beta) wins */
      if (row_max > best_count[slot] ||
          (row_max == best_count[slot] &&
           std::tie(alpha, row_arg) < std::tie(best_alpha[slot], best_beta[slot]))) {
        best_count[slot] = row_max;
        best_alpha[slot] = alpha;
        best_beta[slot] = row_arg;
      }
    }
  });

  for (int slot = 0; slot < workers; ++slot) {
    const auto c = best_count[static_cast<std::size_t>(slot)];
    if (c > s.max_count ||
        (c == s.max_count && c > 0 &&
         std::tie(best_alpha[static_cast<std::size_t>(slot)], best_beta[static_cast<std::size_t>(slot)]) <
             std::tie(s.argmax_alpha, s.argmax_beta))) {
      s.max_count = c;
      s.argmax_alpha = best_alpha[static_cast<std::size_t>(slot)];
      s.argmax_beta = best_beta[static_cast<std::size_t>(slot)];
    }
  }
  return s;
}

double fit_diff(const DdtSummary& s) { return -std::log2(s.dp_max()); }

double fit_diff(const TruthTable& t, int threads) { return fit_diff(ddt_summary(t, threads)); }

double normalized_score(double raw, int n) { return raw / static_cast<double>(n - 1); }

/* ---- linear ---- */

namespace {

void fwht(std::vector<std::int32_t>& w) {
  const std::size_t n = w.size();
  for (std::size_t h = 1; h < n; h <<= 1)
    for (std::size_t i = 0; i < n; i += h << 1)
      for (std::size_t j = i; j < i + h; ++j) {
        const std::int32_t x = w[j];
        const std::int32_t y = w[j + h];
        w[j] = x + y;
        w[j + h] = x - y;
      }
}

std::uint32_t max_abs_nonzero_mask(const std::vector<std::int32_t>& w) {
  std::uint32_t best = 0;
  for (std::size_t a = 1; a < w.size(); ++a)
    best = std::max(best, static_cast<std::uint32_t>(std::abs(w[a])));
  return best;
}

} // namespace

std::vector<std::int32_t> walsh_spectrum(const TruthTable& t, std::uint32_t b) {
  t.validate();
  std::vector<std::int32_t> w(t.entries.size());
  for (std::size_t x = 0; x < t.entries.size(); ++x)
    w[x] = (std::popcount(t.entries[x] & b) & 1) ? -1 : 1;
  fwht(w);
  return w;
}

double lp_max(const TruthTable& t, LinMode mode, double budget_seconds, int threads) {
  t.validate();
  const double scale = static_cast<double>(1u << t.n);
  if (mode == LinMode::Component) {
    std::vector<std::uint32_t> best(static_cast<std::size_t>(t.m), 0);
    parallel_for(static_cast<std::size_t>(t.m), threads, [&](std::size_t i) {
      best[i] = max_abs_nonzero_mask(walsh_spectrum(t, 1u << i));
    });
    return static_cast<double>(*std::max_element(best.begin(), best.end())) / scale;
  }

  const std::uint32_t masks = (1u << t.m) - 1u; // b = 1 .. 2^m - 1
  const auto t0 = std::chrono::steady_clock::now();
  std::uint32_t first = max_abs_nonzero_mask(walsh_spectrum(t, 1));
  const double per_mask =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const double projected = per_mask * static_cast<double>(masks - 1) / std::max(1, threads);
  if (projected > budget_seconds)
    throw BudgetError("full linear scan projected to " + std::to_string(projected) +
                      " s (> budget " + std::to_string(budget_seconds) +
                      " s); use Component mode");

  std::vector<std::uint32_t> best(static_cast<std::size_t>(std::max(1, threads)), first);
  parallel_for(best.size(), threads, [&](std::size_t slot) {
    std::uint32_t local = 0;
    for (std::uint32_t b = 2 + static_cast<std::uint32_t>(slot); b <= masks;
         b += static_cast<std::uint32_t>(best.size()))
      local = std::max(local, max_abs_nonzero_mask(walsh_spectrum(t, b)));
    best[slot] = std::max(best[slot], local);
  });
  return static_cast<double>(*std::max_element(best.begin(), best.end())) / scale;
}

double fit_lin(const TruthTable& t, LinMode mode, double budget_seconds, int threads) {
  return -std::log2(lp_max(t, mode, budget_seconds, threads));
}

/* ---- algebraic ---- */

std::vector<std::uint8_t> mobius(std::vector<std::uint8_t> f, int n) {
  if (static_cast<std::size_t>(1) << n != f.size()) throw ShapeError("mobius input must have 2^n entries");
  for (int j = 0; j < n; ++j) {
    const std::size_t bit = std::size_t{1} << j;
    for (std::size_t x = 0; x < f.size(); ++x)
      if (x & bit) f[x] ^= f[x ^ bit];
  }
  return f;
}

int AnfPolynomial::coordinate_degree(int i) const {
  int deg = 0;
  for (std::uint32_t u : monomials[static_cast<std::size_t>(i)])
    deg = std::max(deg, std::popcount(u));
  return deg;
}

int AnfPolynomial::degree() const {
  int deg = 0;
  for (int i = 0; i < m; ++i) deg = std::max(deg, coordinate_degree(i));
  return deg;
}

AnfPolynomial anf(const TruthTable& t) {
  t.validate();
  AnfPolynomial p;
  p.n = t.n;
  p.m = t.m;
  p.monomials.resize(static_cast<std::size_t>(t.m));
  std::vector<std::uint8_t> f(t.entries.size());
  for (int i = 0; i < t.m; ++i) {
    for (std::size_t x = 0; x < t.entries.size(); ++x) f[x] = (t.entries[x] >> i) & 1u;
    f = mobius(std::move(f), t.n);
    auto& ms = p.monomials[static_cast<std::size_t>(i)];
    ms.clear();
    for (std::size_t u = 0; u < f.size(); ++u)
      if (f[u]) ms.push_back(static_cast<std::uint32_t>(u));
  }
  return p;
}

int degree_k(const TruthTable& t, int k) {
  t.validate();
  if (k < 1) throw ShapeError("composition depth must be >= 1");
  if (k > 1 && t.n != t.m)
    throw ShapeError("k-fold composition requires a square table (n = m)");
  TruthTable composed = t;
  for (int round = 1; round < k; ++round)
    for (auto& w : composed.entries) w = t.entries[w];
  return anf(composed).degree();
}

/* ---- rewards ---- */

double anf_entropy(const TruthTable& t) {
  const AnfPolynomial p = anf(t);
  double sum = 0.0;
  for (int i = 0; i < p.m; ++i)
    sum += std::log2(static_cast<double>(p.monomials[static_cast<std::size_t>(i)].size()) + 1.0) /
           static_cast<double>(p.n);
  return sum / static_cast<double>(p.m);
}

double walsh_dispersion(const TruthTable& t) {
  double total = 0.0;
  for (int i = 0; i < t.m; ++i) {
    const auto w = walsh_spectrum(t, 1u << i);
    /* population variance over nonzero masks */
    const double count = static_cast<double>(w.size() - 1);
    double mean = 0.0;
    for (std::size_t a = 1; a < w.size(); ++a) mean += w[a];
    mean /= count;
    double var = 0.0;
    for (std::size_t a = 1; a < w.size(); ++a) {
      const double d = w[a] - mean;
      var += d * d;
    }
    total += var / count;
  }
  return total / static_cast<double>(t.m);
}

double ddt_flatness(const TruthTable& t) {
  t.validate();
  if (t.n > 8) throw CapacityError("full DDT variance is materialized only up to n = 8");
  const std::uint32_t domain = 1u << t.n;
  const std::uint32_t range = 1u << t.m;
  const double scale = static_cast<double>(domain);
  std::vector<std::uint32_t> hist(range);
  const double cells = static_cast<double>(domain - 1) * static_cast<double>(range);
  double sum = 0.0, sumsq = 0.0;
  for (std::uint32_t alpha = 1; alpha < domain; ++alpha) {
    std::fill(hist.begin(), hist.end(), 0);
    for (std::uint32_t x = 0; x < domain; ++x) ++hist[t.entries[x] ^ t.entries[x ^ alpha]];
    for (std::uint32_t beta = 0; beta < range; ++beta) {
      const double v = static_cast<double>(hist[beta]) / scale;
      sum += v;
      sumsq += v * v;
    }
  }
  const double mean = sum / cells;
  return sumsq / cells - mean * mean; // population variance
}

DependencyMatrix dependency_matrix(const TruthTable& t) {
  t.validate();
  DependencyMatrix d;
  d.m = t.m;
  d.n = t.n;
  d.rows.assign(static_cast<std::size_t>(t.m), 0);
  for (int j = 0; j < t.n; ++j) {
    const std::uint32_t bit = 1u << j;
    std::uint32_t diff = 0;
    for (std::uint32_t x = 0; x < t.entries.size(); ++x)
      if (!(x & bit)) diff |= t.entries[x] ^ t.entries[x | bit];
    for (int i = 0; i < t.m; ++i)
      if ((diff >> i) & 1u) d.rows[static_cast<std::size_t>(i)] |= bit;
  }
  return d;
}

int DependencyMatrix::rank_gf2() const {
  std::vector<std::uint32_t> work(rows);
  int rank = 0;
  for (int col = 0; col < n && rank < static_cast<int>(work.size()); ++col) {
    const std::uint32_t bit = 1u << col;
    int pivot = -1;
    for (int r = rank; r < static_cast<int>(work.size()); ++r)
      if (work[static_cast<std::size_t>(r)] & bit) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    std::swap(work[static_cast<std::size_t>(pivot)], work[static_cast<std::size_t>(rank)]);
    for (int r = 0; r < static_cast<int>(work.size()); ++r)
      if (r != rank && (work[static_cast<std::size_t>(r)] & bit))
        work[static_cast<std::size_t>(r)] ^= work[static_cast<std::size_t>(rank)];
    ++rank;
  }
  return rank;
}

int reward_r1(const TruthTable& before, const TruthTable& after, int k) {
  if (before.n != after.n || before.m != after.m) throw ShapeError("reward tables must share shape");
  return degree_k(after, k) - degree_k(before, k);
}

double reward_r2(const TruthTable& before, const TruthTable& after) {
  return anf_entropy(after) - anf_entropy(before);
}

double reward_r3(const TruthTable& before, const TruthTable& after) {
  return walsh_dispersion(before) - walsh_dispersion(after);
}

double reward_r4(const TruthTable& before, const TruthTable& after) {
  return ddt_flatness(before) - ddt_flatness(after);
}

int reward_r5(const TruthTable& before, const TruthTable& after) {
  return dependency_matrix(after).rank_gf2() - dependency_matrix(before).rank_gf2();
}

/* ---- automorphisms ---- */

namespace {

struct AutContext {
  int n = 0;
  std::vector<std::uint64_t> pred_mask, succ_mask;
  std::vector<int> color;
  std::vector<int> order;   // node visit order
  std::vector<int> image;   // partial bijection, -1 = unassigned
  std::vector<char> used;   // image side
  std::uint64_t count = 0;

  void search(std::size_t depth) {
    if (depth == order.size()) {
      ++count;
      return;
    }
    const int v = order[depth];
    for (int c = 0; c < n; ++c) {
      if (used[static_cast<std::size_t>(c)] || color[static_cast<std::size_t>(c)] != color[static_cast<std::size_t>(v)])
        continue;
      bool ok = true;
      for (std::size_t d = 0; d < depth && ok; ++d) {
        const int u = order[d];
        const int pu = image[static_cast<std::size_t>(u)];
        const bool up_v = (pred_mask[static_cast<std::size_t>(v)] >> u) & 1;
        const bool up_c = (pred_mask[static_cast<std::size_t>(c)] >> pu) & 1;
        const bool vn_u = (succ_mask[static_cast<std::size_t>(v)] >> u) & 1;
        const bool cn_p = (succ_mask[static_cast<std::size_t>(c)] >> pu) & 1;
        ok = up_v == up_c && vn_u == cn_p;
      }
      /* self-loop consistency */
      if (ok && (((pred_mask[static_cast<std::size_t>(v)] >> v) & 1) !=
                 ((pred_mask[static_cast<std::size_t>(c)] >> c) & 1)))
        ok = false;
      if (!ok) continue;
      image[static_cast<std::size_t>(v)] = c;
      used[static_cast<std::size_t>(c)] = 1;
      search(depth + 1);
      used[static_cast<std::size_t>(c)] = 0;
      image[static_cast<std::size_t>(v)] = -1;
    }
  }
};

} // namespace

std::uint64_t automorphism_count(const SbnNetwork& net) {
  const int n = net.node_count();
  if (n > 64) throw CapacityError("automorphism search limited to 64 nodes");
  AutContext ctx;
  ctx.n = n;
  ctx.pred_mask.assign(static_cast<std::size_t>(n), 0);
  ctx.succ_mask.assign(static_cast<std::size_t>(n), 0);
  for (const auto& [u, v] : net.edge_set()) {
    ctx.pred_mask[static_cast<std::size_t>(v)] |= std::uint64_t{1} << u;
    ctx.succ_mask[static_cast<std::size_t>(u)] |= std::uint64_t{1} << v;
  }
  /* color = role + layer + block + gate table + in/out degree */
  using Key = std::tuple<int, int, int, int, int, int, int>;
  std::map<Key, int> palette;
  ctx.color.resize(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) {
    const Node& nd = net.nodes[static_cast<std::size_t>(v)];
    const Key key{static_cast<int>(nd.role),
                  net.layer[static_cast<std::size_t>(v)],
                  net.block[static_cast<std::size_t>(v)],
                  nd.gate ? nd.gate->arity : -1,
                  nd.gate ? static_cast<int>(nd.gate->table) : -1,
                  std::popcount(ctx.pred_mask[static_cast<std::size_t>(v)]),
                  std::popcount(ctx.succ_mask[static_cast<std::size_t>(v)])};
    const auto [it, inserted] = palette.emplace(key, static_cast<int>(palette.size()));
    ctx.color[static_cast<std::size_t>(v)] = it->second;
  }
  /* visit rare colors first to prune early */
  std::vector<int> class_size(palette.size(), 0);
  for (int v = 0; v < n; ++v) ++class_size[static_cast<std::size_t>(ctx.color[static_cast<std::size_t>(v)])];
  ctx.order.resize(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) ctx.order[static_cast<std::size_t>(v)] = v;
  std::sort(ctx.order.begin(), ctx.order.end(), [&](int a, int b) {
    const int ca = class_size[static_cast<std::size_t>(ctx.color[static_cast<std::size_t>(a)])];
    const int cb = class_size[static_cast<std::size_t>(ctx.color[static_cast<std::size_t>(b)])];
    if (ca != cb) return ca < cb;
    return a < b;
  });
  ctx.image.assign(static_cast<std::size_t>(n), -1);
  ctx.used.assign(static_cast<std::size_t>(n), 0);
  ctx.search(0);
  return ctx.count;
}

long long reward_r6(const SbnNetwork& before, const SbnNetwork& after) {
  return static_cast<long long>(automorphism_count(before)) -
         static_cast<long long>(automorphism_count(after));
}

} // namespace sbn
