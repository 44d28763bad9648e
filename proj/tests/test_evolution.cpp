#include "doctest.h"

#include <algorithm>
#include <optional>

#include "sbn/errors.hpp"
#include "sbn/evolution.hpp"
#include "sbn/gate.hpp"
#include "sbn/network.hpp"
#include "sbn/rng.hpp"

using namespace sbn;

namespace {

GaConfig small_config(std::uint64_t seed) {
  GaConfig cfg;
  cfg.population_size = 8;
  cfg.generations = 6;
  cfg.elite_fraction = 0.25;
  cfg.seed = seed;
  return cfg;
}

int push_node(SbnNetwork& net, NodeRole role, int layer, std::optional<GateFunction> gate,
              std::vector<int> preds) {
  net.nodes.push_back(Node{role, std::move(gate), std::move(preds)});
  net.layer.push_back(layer);
  net.block.push_back(1);
  net.position.push_back(0);
  return static_cast<int>(net.nodes.size()) - 1;
}

SbnNetwork tiny_chain(bool doubled) {
  SbnNetwork net;
  net.depth = 2;
  net.blocks = 1;
  net.delta0 = 1;
  net.horizon = 1;
  net.layer_type = {GateType::P, GateType::P};
  const int count = doubled ? 2 : 1;
  for (int i = 0; i < count; ++i) {
    const int a = push_node(net, NodeRole::Input, 1, std::nullopt, {});
    const int b = push_node(net, NodeRole::Output, 2, make_gate(GateKind::Not, 1), {a});
    net.v_in.push_back(a);
    net.v_out.push_back(b);
  }
  net.validate();
  return net;
}

} // namespace

TEST_CASE("fitness ids round-trip through text") {
  for (FitnessId id : {FitnessId::Diff, FitnessId::Lin, FitnessId::Alg})
    CHECK(fitness_from_string(to_string(id)) == id);
  CHECK_THROWS_AS(fitness_from_string("nope"), ConfigError);
}

TEST_CASE("evaluation table widths per mode") {
  GaConfig cfg = small_config(1);
  Rng rng(5);
  SbnNetwork net = generate(ConstraintVector::from_arch_id(63), cfg.gen_params, rng);
  CHECK(evaluation_table(net, cfg).n == 8);
  cfg.mode = EvalMode::Exact;
  TruthTable wide = evaluation_table(net, cfg);
  CHECK(wide.n == 16);
  CHECK(wide.m == 16);
}

TEST_CASE("parent selection: truncation with stable ties") {
  GaConfig cfg;
  cfg.population_size = 20;
  cfg.elite_fraction = 0.20;
  std::vector<double> scores(20, 1.0);
  CHECK(select_parents(scores, cfg) == std::vector<std::size_t>{0, 1, 2, 3});
  scores[7] = 9;
  scores[3] = 5;
  scores[11] = 5;
  CHECK(select_parents(scores, cfg) == std::vector<std::size_t>{7, 3, 11, 0});
  GaConfig tiny;
  tiny.population_size = 5;
  tiny.elite_fraction = 0.20;
  CHECK(select_parents(std::vector<double>(5, 0.0), tiny) == std::vector<std::size_t>{0});
}

TEST_CASE("configs that select no parents are rejected") {
  GaConfig cfg;
  cfg.population_size = 4;
  cfg.elite_fraction = 0.2; // floor(0.8) = 0
  CHECK_THROWS_AS(select_parents(std::vector<double>(4, 0.0), cfg), ConfigError);
}

TEST_CASE("single-individual evolution runs with full elitism") {
  GaConfig cfg = small_config(2);
  cfg.population_size = 1;
  cfg.elite_fraction = 1.0;
  cfg.generations = 3;
  RunRecord rec = run_ga(ConstraintVector::from_arch_id(63), cfg);
  CHECK(rec.evaluations == 3);
  CHECK(rec.best_trace.size() == 3);
}

TEST_CASE("reproduction copies parents intact and fills with in-class mutants") {
  GaConfig cfg = small_config(3);
  const ConstraintVector target = ConstraintVector::from_arch_id(62);
  Population parents = init_population(target, cfg);
  parents.resize(2);
  Population pop = next_generation(parents, target, cfg, 1);
  REQUIRE(pop.size() == 8);
  CHECK(serialize(pop[0]) == serialize(parents[0]));
  CHECK(serialize(pop[1]) == serialize(parents[1]));
  for (const SbnNetwork& net : pop)
    CHECK(evaluate_predicates(net).arch_id() == target.arch_id());
}

TEST_CASE("ga budget, monotone trace, and class invariance") {
  GaConfig cfg = small_config(4);
  const ConstraintVector target = ConstraintVector::from_arch_id(20);
  int observed_generations = 0;
  RunRecord rec = run_ga(target, cfg, [&](int, const Population& pop,
                                          const std::vector<double>& scores) {
    ++observed_generations;
    REQUIRE(pop.size() == scores.size());
    for (const SbnNetwork& net : pop)
      CHECK(evaluate_predicates(net).arch_id() == target.arch_id());
  });
  CHECK(observed_generations == 6);
  CHECK(rec.evaluations == 48); // population x generations, cache hits included
  REQUIRE(rec.best_trace.size() == 6);
  for (std::size_t g = 1; g < rec.best_trace.size(); ++g)
    CHECK(rec.best_trace[g] >= rec.best_trace[g - 1]);
  CHECK(rec.best_score == rec.best_trace.back());
  CHECK(evaluate_predicates(rec.best_network).arch_id() == target.arch_id());
  CHECK(fitness_score(evaluation_table(rec.best_network, cfg), cfg) ==
        doctest::Approx(rec.best_score));
}

TEST_CASE("ga runs are reproducible and thread-count independent") {
  GaConfig cfg = small_config(5);
  const ConstraintVector target = ConstraintVector::from_arch_id(42);
  RunRecord a = run_ga(target, cfg);
  RunRecord b = run_ga(target, cfg);
  cfg.threads = 4;
  RunRecord c = run_ga(target, cfg);
  CHECK(a.best_score == b.best_score);
  CHECK(a.best_trace == b.best_trace);
  CHECK(serialize(a.best_network) == serialize(b.best_network));
  CHECK(a.best_trace == c.best_trace);
  CHECK(serialize(a.best_network) == serialize(c.best_network));

  GaConfig other = small_config(6);
  RunRecord d = run_ga(target, other);
  CHECK(a.best_trace != d.best_trace); // different seed explores differently
}

TEST_CASE("reward-biased acceptance keeps improving offspring deterministically") {
  const SbnNetwork rigid = tiny_chain(false);
  const SbnNetwork symmetric = tiny_chain(true);
  std::array<double, 6> weights{0, 0, 0, 0, 0, 1};
  MutParams mut;
  Rng rng(7);
  /* Symmetry drops 2 -> 1: weighted sum +1, offspring always kept. */
  const ConstraintVector cls = evaluate_predicates(symmetric);
  SbnNetwork kept = reward_biased_accept(symmetric, rigid, weights, cls, mut, rng);
  CHECK(serialize(kept) == serialize(rigid));
  /* All-zero weights short-circuit to the offspring. */
  kept = reward_biased_accept(rigid, symmetric, {0, 0, 0, 0, 0, 0},
                              evaluate_predicates(rigid), mut, rng);
  CHECK(serialize(kept) == serialize(symmetric));
}

TEST_CASE("reward-biased acceptance coin-flips on worsening offspring") {
  const SbnNetwork parent = tiny_chain(false); // symmetry 1
  const SbnNetwork worse = tiny_chain(true);   // symmetry 2, reward -1
  const ConstraintVector cls = evaluate_predicates(parent);
  std::array<double, 6> weights{0, 0, 0, 0, 0, 1};
  MutParams mut;
  Rng rng(8);
  int kept_worse = 0;
  const int trials = 400;
  for (int i = 0; i < trials; ++i) {
    SbnNetwork out = reward_biased_accept(parent, worse, weights, cls, mut, rng);
    if (serialize(out) == serialize(worse)) {
      ++kept_worse;
    } else {
      CHECK(evaluate_predicates(out).arch_id() == cls.arch_id());
    }
  }
  CHECK(kept_worse > 120);
  CHECK(kept_worse < 280);
}

TEST_CASE("reward bias inside the ga preserves budget and classes") {
  GaConfig cfg = small_config(9);
  cfg.reward_bias = true;
  cfg.reward_weights = {1, 0, 0, 0, 1, 0}; // degree and rank deltas only
  const ConstraintVector target = ConstraintVector::from_arch_id(63);
  RunRecord rec = run_ga(target, cfg);
  CHECK(rec.evaluations == 48);
  CHECK(evaluate_predicates(rec.best_network).arch_id() == 63);
}
