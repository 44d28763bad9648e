#include "sbn/generate.hpp"

#include <algorithm>
#include <optional>
#include <vector>

#include "sbn/errors.hpp"

namespace sbn {

namespace {

/* Same type, same arity, canonically different rule. */
GateKind off_rule(GateKind k) {
  switch (k) {
    case GateKind::And: return GateKind::Or;
    case GateKind::Or: return GateKind::And;
    case GateKind::Nand: return GateKind::Nor;
    case GateKind::Nor: return GateKind::Nand;
    case GateKind::Xor: return GateKind::Xnor;
    case GateKind::Xnor: return GateKind::Xor;
    case GateKind::Copy: return GateKind::Not;
    case GateKind::Not: return GateKind::Copy;
  }
  throw ShapeError("unknown gate kind");
}

const std::vector<GateKind>& kind_pool(GateType type) {
  static const std::vector<GateKind> s_pool{GateKind::And, GateKind::Or, GateKind::Nand,
                                            GateKind::Nor};
  static const std::vector<GateKind> p_pool{GateKind::Xor, GateKind::Xnor};
  return type == GateType::S ? s_pool : p_pool;
}

const std::vector<GateKind>& full_pool() {
  static const std::vector<GateKind> pool{GateKind::And, GateKind::Or,   GateKind::Xor,
                                          GateKind::Nand, GateKind::Nor, GateKind::Xnor};
  return pool;
}

std::vector<int> layer_sizes(const GenParams& p) {
  std::vector<int> sizes(static_cast<std::size_t>(p.depth) + 1, 0); // 1-based
  sizes[1] = p.n_in;
  sizes[static_cast<std::size_t>(p.depth)] = p.n_out;
  const int middle_total = p.internal_gates - p.n_out;
  const int middle_layers = p.depth - 2;
  const int base = middle_total / middle_layers;
  int rem = middle_total % middle_layers;
  for (int k = 2; k < p.depth; ++k) {
    sizes[static_cast<std::size_t>(k)] = base + (rem > 0 ? 1 : 0);
    if (rem > 0) --rem;
  }
  return sizes;
}

SbnNetwork build_candidate(const ConstraintVector& target, const GenParams& p, Rng& rng) {
  const std::vector<int> sizes = layer_sizes(p);
  SbnNetwork net;
  net.depth = p.depth;
  net.blocks = p.blocks;
  net.delta0 = p.delta0;
  net.horizon = p.horizon > 0 ? p.horizon : p.depth;
  net.arch_id = target.arch_id();

  /* Typing: alternating with a nonlinear readout layer, or constant when the
     stratification bit is off (no gate change can restore alternation). */
  net.layer_type.resize(static_cast<std::size_t>(p.depth));
  for (int k = 1; k <= p.depth; ++k) {
    const bool s_layer = !target.s || ((p.depth - k) % 2 == 0);
    net.layer_type[static_cast<std::size_t>(k) - 1] = s_layer ? GateType::S : GateType::P;
  }

  std::vector<std::vector<int>> ids(static_cast<std::size_t>(p.depth) + 1);
  for (int k = 1; k <= p.depth; ++k) {
    for (int j = 0; j < sizes[static_cast<std::size_t>(k)]; ++j) {
      const NodeRole role = k == 1          ? NodeRole::Input
                            : k == p.depth  ? NodeRole::Output
                                            : NodeRole::Internal;
      net.nodes.push_back(Node{role, std::nullopt, {}});
      const int id = static_cast<int>(net.nodes.size()) - 1;
      net.layer.push_back(k);
      /* Half/half block split feeds the interaction bit; single block starves it. */
      const int half = (sizes[static_cast<std::size_t>(k)] + 1) / 2;
      net.block.push_back(target.i && j >= half ? 2 : 1);
      net.position.push_back(0);
      ids[static_cast<std::size_t>(k)].push_back(id);
    }
  }
  net.v_in = ids[1];
  net.v_out = ids[static_cast<std::size_t>(p.depth)];

  /* Layers slated for a violation edge keep one fan-in slot free. */
  const int back_layer = 2;            // gets a readout back-edge when a = 0
  const int short_layer = p.depth;     // gets an input shortcut when r = 0
  std::vector<GateKind> kinds(net.nodes.size(), GateKind::And);

  for (int k = 2; k <= p.depth; ++k) {
    const auto& layer_ids = ids[static_cast<std::size_t>(k)];
    const auto& prev = ids[static_cast<std::size_t>(k) - 1];
    const int prev_n = static_cast<int>(prev.size());
    const int reserved = (!target.a && k == back_layer) || (!target.r && k == short_layer) ? 1 : 0;
    const int arity_hi = std::min(kMaxFanin, p.max_fanin - reserved);
    auto draw_arity = [&] { return 2 + static_cast<int>(rng.below_int(arity_hi - 1)); };
    const std::vector<GateKind>& pool =
        target.s ? kind_pool(net.layer_type[static_cast<std::size_t>(k) - 1]) : full_pool();

    /* Replicated rule and arity when homogeneity is requested. */
    const int shared_arity = draw_arity();
    const GateKind shared_kind = pool[rng.below(pool.size())];

    for (int j = 0; j < static_cast<int>(layer_ids.size()); ++j) {
      const int arity = target.h ? shared_arity : draw_arity();
      const GateKind kind = target.h ? shared_kind : pool[rng.below(pool.size())];
      /* Two pinned operands guarantee full input-to-readout reachability at
         the default shape: middle layers take an antipodal pair, the readout
         layer a consecutive pair; the rest fill in at random. */
      const int off = k == p.depth ? 1 : std::max(1, prev_n / 2);
      std::vector<int> preds{prev[static_cast<std::size_t>(j % prev_n)]};
      const int second = prev[static_cast<std::size_t>((j + off) % prev_n)];
      if (second != preds[0]) preds.push_back(second);
      std::vector<int> rest;
      for (int q : prev)
        if (std::find(preds.begin(), preds.end(), q) == preds.end()) rest.push_back(q);
      while (static_cast<int>(preds.size()) < arity) {
        if (!rest.empty()) {
          const std::size_t pick = rng.below(rest.size());
          preds.push_back(rest[pick]);
          rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(pick));
        } else {
          preds.push_back(prev[rng.below(prev.size())]);
        }
      }
      const int id = layer_ids[static_cast<std::size_t>(j)];
      kinds[static_cast<std::size_t>(id)] = kind;
      net.nodes[static_cast<std::size_t>(id)].gate = make_gate(kind, arity);
      net.nodes[static_cast<std::size_t>(id)].preds = std::move(preds);
    }
  }

  /* Violation injections, one per zero bit with a structural guarantee. */
  if (!target.a) {
    const int source = net.v_out[rng.below(net.v_out.size())];
    for (int id : ids[back_layer]) {
      Node& nd = net.nodes[static_cast<std::size_t>(id)];
      nd.preds.push_back(source);
      nd.gate = make_gate(kinds[static_cast<std::size_t>(id)], nd.gate->arity + 1);
    }
  }
  if (!target.r) {
    const int source = net.v_in[rng.below(net.v_in.size())];
    for (int id : ids[static_cast<std::size_t>(short_layer)]) {
      Node& nd = net.nodes[static_cast<std::size_t>(id)];
      nd.preds.push_back(source);
      nd.gate = make_gate(kinds[static_cast<std::size_t>(id)], nd.gate->arity + 1);
    }
  }
  if (!target.h) {
    for (int k = 2; k <= p.depth; ++k) {
      if (ids[static_cast<std::size_t>(k)].size() < 2) continue;
      const int id = ids[static_cast<std::size_t>(k)].front();
      Node& nd = net.nodes[static_cast<std::size_t>(id)];
      nd.gate = make_gate(off_rule(kinds[static_cast<std::size_t>(id)]), nd.gate->arity);
      break;
    }
  }
  if (!target.l) {
    const int id = ids[2].front();
    net.position[static_cast<std::size_t>(id)] = p.delta0 + 1;
  }

  net.validate();
  return net;
}

} // namespace

SbnNetwork generate(const ConstraintVector& target, const GenParams& p, Rng& rng) {
  if (p.n_in < 1 || p.n_out < 2 || p.depth < 3 || p.delta0 < 1 || p.retry_budget < 1)
    throw ConfigError("generation shape out of range");
  if (p.internal_gates - p.n_out < p.depth - 2)
    throw ConfigError("gate budget too small for the middle layers");
  if (p.max_fanin < 3 || p.max_fanin > kMaxFanin)
    throw ConfigError("max fan-in must lie in [3, " + std::to_string(kMaxFanin) + "]");
  if (target.i && p.blocks < 2) throw ConfigError("interaction bit needs at least two blocks");

  for (int attempt = 0; attempt < p.retry_budget; ++attempt) {
    SbnNetwork net = build_candidate(target, p, rng);
    if (evaluate_predicates(net).arch_id() == target.arch_id()) return net;
  }
  throw GenerationError("class " + std::to_string(target.arch_id()) + " not reached within " +
                            std::to_string(p.retry_budget) + " attempts",
                        target.arch_id());
}

int mutation_chain_length(const MutParams& params, Rng& rng) {
  return std::max(1, rng.poisson(params.lambda));
}

namespace {

void operation_mutation(SbnNetwork& net, int v, const ConstraintVector& target, Rng& rng) {
  const GateFunction current = *net.nodes[static_cast<std::size_t>(v)].gate;
  const GateType layer_type =
      net.layer_type[static_cast<std::size_t>(net.layer[static_cast<std::size_t>(v)]) - 1];
  std::vector<GateFunction> pool =
      target.s ? gate_catalog(current.arity, layer_type) : gate_catalog(current.arity);
  std::erase(pool, current);
  if (pool.empty()) return;
  const GateFunction next = pool[rng.below(pool.size())];
  if (target.h) {
    /* Layer-wide replacement keeps the rule replicated within the layer. */
    const int k = net.layer[static_cast<std::size_t>(v)];
    for (int u = 0; u < net.node_count(); ++u) {
      Node& nd = net.nodes[static_cast<std::size_t>(u)];
      if (net.layer[static_cast<std::size_t>(u)] == k && nd.gate &&
          nd.gate->arity == next.arity)
        nd.gate = next;
    }
  } else {
    net.nodes[static_cast<std::size_t>(v)].gate = next;
  }
}

void wiring_mutation(SbnNetwork& net, int v, const ConstraintVector& target, Rng& rng) {
  Node& nd = net.nodes[static_cast<std::size_t>(v)];
  if (nd.preds.empty()) return;
  const std::size_t slot = rng.below(nd.preds.size());
  const int layer_v = net.layer[static_cast<std::size_t>(v)];
  std::vector<int> candidates;
  for (int u = 0; u < net.node_count(); ++u) {
    if (u == nd.preds[slot]) continue;
    const int layer_u = net.layer[static_cast<std::size_t>(u)];
    if (target.r) {
      if (layer_u != layer_v - 1) continue; // preserves the balanced delays
    } else if (target.a) {
      if (layer_u >= layer_v) continue; // forward edges only
    }
    candidates.push_back(u);
  }
  if (candidates.empty()) return;
  nd.preds[slot] = candidates[rng.below(candidates.size())];
}

} // namespace

SbnNetwork mutate(const SbnNetwork& net, const ConstraintVector& target, const MutParams& params,
                  Rng& rng, bool* exhausted) {
  if (exhausted) *exhausted = false;
  for (int attempt = 0; attempt < params.retry_budget; ++attempt) {
    SbnNetwork cand = net;
    const int chain = mutation_chain_length(params, rng);
    for (int e = 0; e < chain; ++e) {
      for (int v = 0; v < cand.node_count(); ++v) {
        if (!cand.nodes[static_cast<std::size_t>(v)].gate) continue;
        if (rng.chance(params.per_gate)) operation_mutation(cand, v, target, rng);
        if (rng.chance(params.per_gate)) wiring_mutation(cand, v, target, rng);
      }
    }
    if (evaluate_predicates(cand).arch_id() == target.arch_id()) return cand;
  }
  if (exhausted) *exhausted = true;
  return net;
}

} // namespace sbn
