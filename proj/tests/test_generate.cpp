#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <queue>
#include <vector>

#include "sbn/errors.hpp"
#include "sbn/generate.hpp"
#include "sbn/network.hpp"
#include "sbn/predicates.hpp"
#include "sbn/rng.hpp"

using namespace sbn;

TEST_CASE("generator hits every class exactly, across seeds") {
  GenParams params;
  for (int id = 0; id < 64; ++id) {
    const ConstraintVector target = ConstraintVector::from_arch_id(id);
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      Rng rng(mix64(static_cast<std::uint64_t>(id), seed));
      SbnNetwork net = generate(target, params, rng);
      CHECK(evaluate_predicates(net).arch_id() == id);
      CHECK(net.arch_id == id);
    }
  }
}

TEST_CASE("generator default shape") {
  Rng rng(3);
  SbnNetwork net = generate(ConstraintVector::from_arch_id(63), GenParams{}, rng);
  CHECK(net.node_count() == 24);
  CHECK(net.n_in() == 8);
  CHECK(net.n_out() == 8);
  CHECK(net.depth == 4);
  CHECK(net.horizon == 4);
  std::vector<int> per_layer(5, 0);
  for (int v = 0; v < net.node_count(); ++v) ++per_layer[static_cast<std::size_t>(net.layer[static_cast<std::size_t>(v)])];
  CHECK(per_layer == std::vector<int>{0, 8, 4, 4, 8});
  for (const Node& nd : net.nodes) {
    if (!nd.gate) continue;
    CHECK(nd.gate->arity >= 2);
    CHECK(nd.gate->arity <= kMaxFanin);
    CHECK(nd.preds.size() == static_cast<std::size_t>(nd.gate->arity));
  }
}

TEST_CASE("generation is deterministic in the seed") {
  GenParams params;
  const ConstraintVector target = ConstraintVector::from_arch_id(20);
  Rng a(99), b(99), c(100);
  CHECK(serialize(generate(target, params, a)) == serialize(generate(target, params, b)));
  CHECK(serialize(generate(target, params, a)) != serialize(generate(target, params, c)));
}

TEST_CASE("generator rejects malformed shapes") {
  Rng rng(1);
  const ConstraintVector all = ConstraintVector::from_arch_id(63);
  GenParams p;
  p.depth = 2;
  CHECK_THROWS_AS(generate(all, p, rng), ConfigError);
  p = GenParams{};
  p.internal_gates = p.n_out; // no gates left for the middle layers
  CHECK_THROWS_AS(generate(all, p, rng), ConfigError);
  p = GenParams{};
  p.max_fanin = 2;
  CHECK_THROWS_AS(generate(all, p, rng), ConfigError);
  p = GenParams{};
  p.blocks = 1;
  CHECK_THROWS_AS(generate(all, p, rng), ConfigError);
  CHECK_NOTHROW(generate(ConstraintVector::from_arch_id(59), p, rng)); // i = 0 is fine
}

TEST_CASE("generation failure error carries the class id") {
  const GenerationError err("class 42 unreachable", 42);
  CHECK(err.target_arch_id() == 42);
  CHECK(std::string(err.error_class()) == "generation");
}

TEST_CASE("horizon override is honored") {
  GenParams p;
  p.horizon = 7;
  Rng rng(5);
  CHECK(generate(ConstraintVector::from_arch_id(63), p, rng).horizon == 7);
}

namespace {

/* Single-pass evaluation in dependency order; valid for acyclic networks. */
std::uint32_t combinational_map(const SbnNetwork& net, std::uint32_t input) {
  const int n = net.node_count();
  std::vector<int> missing(static_cast<std::size_t>(n), 0);
  std::vector<std::vector<int>> dependents(static_cast<std::size_t>(n));
  for (const auto& [u, v] : net.edge_set()) {
    ++missing[static_cast<std::size_t>(v)];
    dependents[static_cast<std::size_t>(u)].push_back(v);
  }
  std::vector<std::uint8_t> value(static_cast<std::size_t>(n), 0);
  std::vector<std::uint8_t> ready(static_cast<std::size_t>(n), 0);
  std::queue<int> queue;
  for (int v = 0; v < n; ++v)
    if (missing[static_cast<std::size_t>(v)] == 0) queue.push(v);
  for (std::size_t i = 0; i < net.v_in.size(); ++i)
    value[static_cast<std::size_t>(net.v_in[i])] = static_cast<std::uint8_t>((input >> i) & 1u);
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop();
    const Node& nd = net.nodes[static_cast<std::size_t>(v)];
    if (nd.gate) {
      int idx = 0;
      for (std::size_t j = 0; j < nd.preds.size(); ++j)
        idx |= value[static_cast<std::size_t>(nd.preds[j])] << j;
      value[static_cast<std::size_t>(v)] = nd.gate->bit(idx) ? 1 : 0;
    }
    ready[static_cast<std::size_t>(v)] = 1;
    for (int w : dependents[static_cast<std::size_t>(v)])
      if (--missing[static_cast<std::size_t>(w)] == 0) queue.push(w);
  }
  std::uint32_t out = 0;
  for (std::size_t i = 0; i < net.v_out.size(); ++i) {
    REQUIRE(ready[static_cast<std::size_t>(net.v_out[i])] == 1);
    out |= static_cast<std::uint32_t>(value[static_cast<std::size_t>(net.v_out[i])]) << i;
  }
  return out;
}

} // namespace

TEST_CASE("iterated readout equals single-pass evaluation on acyclic networks") {
  GenParams params;
  Rng rng(2026);
  for (int trial = 0; trial < 20; ++trial) {
    /* Any class with the acyclicity bit set; other bits vary freely. */
    const int id = 16 | static_cast<int>(rng.below(64) & ~std::uint64_t{16});
    SbnNetwork net = generate(ConstraintVector::from_arch_id(id), params, rng);
    for (std::uint32_t x = 0; x < 256; ++x) CHECK(io_map(net, x) == combinational_map(net, x));
  }
}

TEST_CASE("mutation keeps the network inside its class") {
  GenParams gen_params;
  MutParams mut_params;
  for (int id : {0, 10, 20, 21, 33, 42, 62, 63}) {
    const ConstraintVector target = ConstraintVector::from_arch_id(id);
    Rng rng(mix64(7, static_cast<std::uint64_t>(id)));
    SbnNetwork net = generate(target, gen_params, rng);
    for (int step = 0; step < 12; ++step) {
      net = mutate(net, target, mut_params, rng);
      CHECK(evaluate_predicates(net).arch_id() == id);
    }
  }
}

TEST_CASE("mutation explores: chains usually change the network") {
  GenParams gen_params;
  MutParams mut_params;
  const ConstraintVector target = ConstraintVector::from_arch_id(63);
  Rng rng(11);
  SbnNetwork net = generate(target, gen_params, rng);
  int changed = 0;
  for (int step = 0; step < 30; ++step) {
    SbnNetwork next = mutate(net, target, mut_params, rng);
    if (serialize(next) != serialize(net)) ++changed;
    net = std::move(next);
  }
  CHECK(changed >= 20);
}

TEST_CASE("mutation falls back to the flagged parent when no chain fits") {
  GenParams gen_params;
  Rng rng(13);
  SbnNetwork net = generate(ConstraintVector::from_arch_id(63), gen_params, rng);
  MutParams mut_params;
  mut_params.retry_budget = 3;
  bool exhausted = false;
  /* An unreachable target: every chain fails verification. */
  SbnNetwork out = mutate(net, ConstraintVector::from_arch_id(0), mut_params, rng, &exhausted);
  CHECK(exhausted);
  CHECK(serialize(out) == serialize(net));
}

TEST_CASE("chain length is a floored Poisson draw") {
  MutParams params;
  Rng rng(17);
  const int trials = 20000;
  double sum = 0;
  int minimum = 1 << 30;
  for (int i = 0; i < trials; ++i) {
    const int k = mutation_chain_length(params, rng);
    sum += k;
    minimum = std::min(minimum, k);
  }
  const double mean = sum / trials;
  CHECK(minimum >= 1);
  /* Analytic mean of max(1, Poisson(3)) is 3 + e^-3. */
  CHECK(mean == doctest::Approx(3.0 + std::exp(-3.0)).epsilon(0.02));

  /* Independent inverse-CDF simulation of the same floored draw. */
  Rng sim(18);
  double sim_sum = 0;
  for (int i = 0; i < trials; ++i) {
    const double u = sim.unit();
    double cumulative = 0, term = std::exp(-3.0);
    int k = 0;
    while (cumulative + term < u && k < 64) {
      cumulative += term;
      ++k;
      term *= 3.0 / k;
    }
    sim_sum += std::max(1, k);
  }
  CHECK(mean == doctest::Approx(sim_sum / trials).epsilon(0.03));
}
