#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "sbn/generate.hpp"
#include "sbn/network.hpp"
#include "sbn/predicates.hpp"
#include "sbn/truth_table.hpp"

namespace sbn {

enum class FitnessId { Diff, Lin, Alg };

std::string to_string(FitnessId id);
FitnessId fitness_from_string(const std::string& s);

/* Desk scores the raw 8-bit core table; Exact scores the 16-bit balanced
   construction built from it. */
enum class EvalMode { Desk, Exact };

struct GaConfig {
  int population_size = 20;
  int generations = 50;
  double elite_fraction = 0.20; // floor(population * fraction) must be >= 1
  FitnessId fitness_id = FitnessId::Diff;
  EvalMode mode = EvalMode::Desk;
  int feistel_rounds = 2;
  int alg_depth = 2;            // composition depth of the algebraic score
  double lin_budget_seconds = 120.0;
  std::uint64_t seed = 1;
  int threads = 1;
  GenParams gen_params;
  MutParams mut_params;
  bool reward_bias = false;                              // default off
  std::array<double, 6> reward_weights{1, 1, 1, 1, 1, 1}; // R1..R6
};

struct RunRecord {
  int arch_id = -1;
  ConstraintVector bits;
  double best_score = 0;
  double mean_score = 0;              // final-generation population mean
  std::vector<double> best_trace;     // per-generation best, entry 0 = initial pop
  long long evaluations = 0;          // scoring requests; cache hits count
  std::uint64_t seed = 0;
  double wall_seconds = 0;
  SbnNetwork best_network;
};

using Population = std::vector<SbnNetwork>;

/* The table a network is scored on under the configured mode. */
TruthTable evaluation_table(const SbnNetwork& core, const GaConfig& cfg);

/* One scalar score of a table under the configured fitness. */
double fitness_score(const TruthTable& t, const GaConfig& cfg);

/* population_size networks, each verified inside `target`. Per-slot RNG
   streams derive from cfg.seed, so the draw is identical at any thread count. */
Population init_population(const ConstraintVector& target, const GaConfig& cfg);

/* Indices of the top floor(population * elite_fraction) individuals by score,
   ties broken by lower index. */
std::vector<std::size_t> select_parents(const std::vector<double>& scores, const GaConfig& cfg);

/* Parents copied unchanged, remaining slots filled by mutating a uniformly
   drawn parent. `generation` tags the RNG streams. No crossover. */
Population next_generation(const Population& parents, const ConstraintVector& target,
                           const GaConfig& cfg, int generation);

/* Keeps the offspring when the weighted reward delta parent->offspring is
   >= 0; otherwise keeps it with probability 1/2, else re-mutates the parent
   once and returns that. Rewards R1-R5 are computed on the 8-bit core tables,
   R6 on the networks. */
SbnNetwork reward_biased_accept(const SbnNetwork& parent, const SbnNetwork& offspring,
                                const std::array<double, 6>& weights,
                                const ConstraintVector& target, const MutParams& mut_params,
                                Rng& rng);

using GaObserver =
    std::function<void(int generation, const Population&, const std::vector<double>& scores)>;

/* Full loop: score, select, reproduce, `generations` times. The observer (when
   given) fires after each generation is scored. */
RunRecord run_ga(const ConstraintVector& target, const GaConfig& cfg,
                 const GaObserver& observer = {});

} // namespace sbn
