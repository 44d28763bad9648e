#include "sbn/evolution.hpp"

#include <algorithm>
#include <chrono>
#include <mutex>
#include <numeric>
#include <unordered_map>

#include "sbn/cryptanalysis.hpp"
#include "sbn/errors.hpp"
#include "sbn/feistel.hpp"
#include "sbn/parallel.hpp"

namespace sbn {

std::string to_string(FitnessId id) {
  switch (id) {
    case FitnessId::Diff: return "diff";
    case FitnessId::Lin: return "lin";
    case FitnessId::Alg: return "alg";
  }
  throw ConfigError("unknown fitness id");
}

FitnessId fitness_from_string(const std::string& s) {
  if (s == "diff") return FitnessId::Diff;
  if (s == "lin") return FitnessId::Lin;
  if (s == "alg") return FitnessId::Alg;
  throw ConfigError("unknown fitness id: " + s);
}

TruthTable evaluation_table(const SbnNetwork& core, const GaConfig& cfg) {
  TruthTable t = truth_table(core);
  if (cfg.mode == EvalMode::Exact) return feistel_table(t, cfg.feistel_rounds);
  return t;
}

double fitness_score(const TruthTable& t, const GaConfig& cfg) {
  switch (cfg.fitness_id) {
    case FitnessId::Diff: return fit_diff(t, cfg.threads);
    case FitnessId::Lin: {
      /* The full output-mask sweep is the desk default; wide tables use the
         single-bit component scan. */
      const LinMode mode = t.m > 8 ? LinMode::Component : LinMode::Full;
      return fit_lin(t, mode, cfg.lin_budget_seconds, cfg.threads);
    }
    case FitnessId::Alg: return static_cast<double>(degree_k(t, cfg.alg_depth));
  }
  throw ConfigError("unknown fitness id");
}

namespace {

int elite_count(const GaConfig& cfg) {
  const int count = static_cast<int>(static_cast<double>(cfg.population_size) *
                                     cfg.elite_fraction);
  return count;
}

void check_config(const GaConfig& cfg) {
  if (cfg.population_size < 1 || cfg.generations < 1)
    throw ConfigError("population and generations must be positive");
  if (elite_count(cfg) < 1) throw ConfigError("elite fraction selects no parents");
}

Rng slot_stream(std::uint64_t seed, int generation, std::size_t slot) {
  return Rng(mix64(mix64(seed, static_cast<std::uint64_t>(generation)),
                   static_cast<std::uint64_t>(slot)));
}

/* Score cache shared across generations; elites re-score for free. Keyed by
   the table digest so identical maps coincide regardless of wiring. */
class ScoreCache {
public:
  explicit ScoreCache(const GaConfig& cfg) : cfg_(cfg) {}

  std::vector<double> score(const Population& pop, long long& evaluations) {
    std::vector<double> out(pop.size(), 0.0);
    parallel_for(pop.size(), cfg_.threads, [&](std::size_t i) {
      const TruthTable t = evaluation_table(pop[i], cfg_);
      const std::uint64_t key = table_digest(t);
      {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = cache_.find(key);
        if (it != cache_.end()) {
          out[i] = it->second;
          return;
        }
      }
      const double value = fitness_score(t, cfg_);
      out[i] = value;
      std::lock_guard<std::mutex> lock(mutex_);
      cache_.emplace(key, value);
    });
    evaluations += static_cast<long long>(pop.size());
    return out;
  }

private:
  const GaConfig& cfg_;
  std::mutex mutex_;
  std::unordered_map<std::uint64_t, double> cache_;
};

} // namespace

Population init_population(const ConstraintVector& target, const GaConfig& cfg) {
  check_config(cfg);
  Population pop(static_cast<std::size_t>(cfg.population_size));
  for (std::size_t slot = 0; slot < pop.size(); ++slot) {
    Rng rng = slot_stream(cfg.seed, 0, slot);
    pop[slot] = generate(target, cfg.gen_params, rng);
  }
  return pop;
}

std::vector<std::size_t> select_parents(const std::vector<double>& scores, const GaConfig& cfg) {
  check_config(cfg);
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] > scores[b];
  });
  const std::size_t keep =
      std::min(order.size(), static_cast<std::size_t>(elite_count(cfg)));
  order.resize(keep);
  return order;
}

SbnNetwork reward_biased_accept(const SbnNetwork& parent, const SbnNetwork& offspring,
                                const std::array<double, 6>& weights,
                                const ConstraintVector& target, const MutParams& mut_params,
                                Rng& rng) {
  const TruthTable before = truth_table(parent);
  const TruthTable after = truth_table(offspring);
  double sum = 0;
  if (weights[0] != 0) sum += weights[0] * static_cast<double>(reward_r1(before, after));
  if (weights[1] != 0) sum += weights[1] * reward_r2(before, after);
  if (weights[2] != 0) sum += weights[2] * reward_r3(before, after);
  if (weights[3] != 0) sum += weights[3] * reward_r4(before, after);
  if (weights[4] != 0) sum += weights[4] * static_cast<double>(reward_r5(before, after));
  if (weights[5] != 0) sum += weights[5] * static_cast<double>(reward_r6(parent, offspring));
  if (sum >= 0 || rng.chance(0.5)) return offspring;
  return mutate(parent, target, mut_params, rng);
}

Population next_generation(const Population& parents, const ConstraintVector& target,
                           const GaConfig& cfg, int generation) {
  if (parents.empty()) throw ConfigError("reproduction needs at least one parent");
  Population pop;
  pop.reserve(static_cast<std::size_t>(cfg.population_size));
  for (const SbnNetwork& p : parents) {
    if (static_cast<int>(pop.size()) >= cfg.population_size) break;
    pop.push_back(p);
  }
  for (std::size_t slot = pop.size(); slot < static_cast<std::size_t>(cfg.population_size);
       ++slot) {
    Rng rng = slot_stream(cfg.seed, generation, slot);
    const SbnNetwork& parent = parents[rng.below(parents.size())];
    SbnNetwork offspring = mutate(parent, target, cfg.mut_params, rng);
    if (cfg.reward_bias)
      offspring =
          reward_biased_accept(parent, offspring, cfg.reward_weights, target, cfg.mut_params, rng);
    pop.push_back(std::move(offspring));
  }
  return pop;
}

RunRecord run_ga(const ConstraintVector& target, const GaConfig& cfg, const GaObserver& observer) {
  check_config(cfg);
  const auto t0 = std::chrono::steady_clock::now();
  RunRecord rec;
  rec.arch_id = target.arch_id();
  rec.bits = target;
  rec.seed = cfg.seed;

  ScoreCache cache(cfg);
  Population pop = init_population(target, cfg);
  std::vector<double> scores = cache.score(pop, rec.evaluations);
  if (observer) observer(0, pop, scores);
  rec.best_trace.push_back(*std::max_element(scores.begin(), scores.end()));

  for (int g = 1; g < cfg.generations; ++g) {
    const std::vector<std::size_t> parent_idx = select_parents(scores, cfg);
    Population parents;
    parents.reserve(parent_idx.size());
    for (std::size_t i : parent_idx) parents.push_back(pop[i]);
    pop = next_generation(parents, target, cfg, g);
    scores = cache.score(pop, rec.evaluations);
    if (observer) observer(g, pop, scores);
    rec.best_trace.push_back(*std::max_element(scores.begin(), scores.end()));
  }

  const std::size_t best_idx = static_cast<std::size_t>(
      std::max_element(scores.begin(), scores.end()) - scores.begin());
  rec.best_score = scores[best_idx];
  rec.best_network = pop[best_idx];
  rec.mean_score = std::accumulate(scores.begin(), scores.end(), 0.0) /
                   static_cast<double>(scores.size());
  rec.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rec;
}

} // namespace sbn
