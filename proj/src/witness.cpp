#include "sbn/witness.hpp"

namespace sbn {

namespace {

/* Incremental construction helper for the tiny hand-built witnesses. */
struct Builder {
  SbnNetwork net;

  Builder(int depth, std::vector<GateType> types, int blocks = 1, int delta0 = 2) {
    net.depth = depth;
    net.layer_type = std::move(types);
    net.blocks = blocks;
    net.delta0 = delta0;
    net.horizon = depth;
  }

  int input(int layer, int block = 1, long long pos = 0) {
    return add(Node{NodeRole::Input, std::nullopt, {}}, layer, block, pos);
  }

  int gate(NodeRole role, GateFunction g, std::vector<int> preds, int layer, int block = 1,
           long long pos = 0) {
    return add(Node{role, std::move(g), std::move(preds)}, layer, block, pos);
  }

  SbnNetwork done(std::vector<int> v_in, std::vector<int> v_out) {
    net.v_in = std::move(v_in);
    net.v_out = std::move(v_out);
    net.validate();
    return net;
  }

private:
  int add(Node nd, int layer, int block, long long pos) {
    net.nodes.push_back(std::move(nd));
    net.layer.push_back(layer);
    net.block.push_back(block);
    net.position.push_back(pos);
    return net.node_count() - 1;
  }
};

const GateFunction kCopy = make_gate(GateKind::Copy, 1);
const GateFunction kNot = make_gate(GateKind::Not, 1);
const GateFunction kAnd2 = make_gate(GateKind::And, 2);

/* Chain a -> b -> c on singleton layers with alternating typing (S,P,S): b is a
   unary copy (affine), c is a 2-ary AND reading b twice, so its table is
   nonlinear while the edge set stays the plain chain. */
SbnNetwork alternating_chain() {
  Builder b(3, {GateType::S, GateType::P, GateType::S});
  const int a = b.input(1);
  const int m = b.gate(NodeRole::Internal, kCopy, {a}, 2);
  const int c = b.gate(NodeRole::Output, kAnd2, {m, m}, 3);
  return b.done({a}, {c});
}

WitnessPair witness_S() {
  /* Same chain with a non-alternating typing (S,S,P) and rules retyped to
     match it: the alternation test alone flips. */
  Builder b(3, {GateType::S, GateType::S, GateType::P});
  const int a = b.input(1);
  const int m = b.gate(NodeRole::Internal, kAnd2, {a, a}, 2);
  const int c = b.gate(NodeRole::Output, kCopy, {m}, 3);
  return {alternating_chain(), b.done({a}, {c}), 0};
}

WitnessPair witness_A() {
  auto acyclic = [] {
    Builder b(2, {GateType::S, GateType::P});
    const int a = b.input(1);
    const int c = b.gate(NodeRole::Output, kCopy, {a}, 2);
    return b.done({a}, {c});
  };
  /* The back edge targets the input node: inputs may carry structural
     predecessors (they are ignored dynamically), which closes the 2-cycle. */
  SbnNetwork cyclic = acyclic();
  cyclic.nodes[0].preds = {1};
  cyclic.validate();
  return {acyclic(), cyclic, 1};
}

WitnessPair witness_R() {
  auto equal_delays = [] {
    Builder b(3, {GateType::S, GateType::P, GateType::S});
    const int a = b.input(1);
    const int m1 = b.gate(NodeRole::Internal, kCopy, {a}, 2);
    const int m2 = b.gate(NodeRole::Internal, kCopy, {a}, 2);
    const int c = b.gate(NodeRole::Output, kAnd2, {m1, m1}, 3);
    const int e = b.gate(NodeRole::Output, kAnd2, {m2, m2}, 3);
    return b.done({a}, {c, e});
  };
  auto unequal_delays = [] {
    Builder b(3, {GateType::S, GateType::P, GateType::S});
    const int a = b.input(1);
    const int m = b.gate(NodeRole::Internal, kCopy, {a}, 2);
    const int d = b.gate(NodeRole::Output, kCopy, {a}, 2); // read out at depth 1
    const int e = b.gate(NodeRole::Output, kAnd2, {m, m}, 3); // read out at depth 2
    return b.done({a}, {d, e});
  };
  return {equal_delays(), unequal_delays(), 2};
}

WitnessPair witness_I() {
  auto chain_blocks = [](int block_b, int block_c, int blocks) {
    Builder b(3, {GateType::S, GateType::P, GateType::S}, blocks);
    const int a = b.input(1, 1);
    const int m = b.gate(NodeRole::Internal, kCopy, {a}, 2, block_b);
    const int c = b.gate(NodeRole::Output, kAnd2, {m, m}, 3, block_c);
    return b.done({a}, {c});
  };
  return {chain_blocks(2, 2, 2), chain_blocks(1, 1, 1), 3};
}

WitnessPair witness_H() {
  auto diamond = [](const GateFunction& rule_c) {
    Builder b(3, {GateType::S, GateType::P, GateType::S});
    const int a = b.input(1);
    const int m1 = b.gate(NodeRole::Internal, kCopy, {a}, 2);
    const int m2 = b.gate(NodeRole::Internal, rule_c, {a}, 2);
    const int d = b.gate(NodeRole::Output, kAnd2, {m1, m2}, 3);
    return b.done({a}, {d});
  };
  /* Copy vs negation: both affine (S unaffected), never input-permutation
     equivalent (H flips). */
  return {diamond(kCopy), diamond(kNot), 4};
}

WitnessPair witness_L() {
  auto chain_at = [](long long pos_b, long long pos_c) {
    Builder b(3, {GateType::S, GateType::P, GateType::S});
    const int a = b.input(1, 1, 0);
    const int m = b.gate(NodeRole::Internal, kCopy, {a}, 2, 1, pos_b);
    const int c = b.gate(NodeRole::Output, kAnd2, {m, m}, 3, 1, pos_c);
    return b.done({a}, {c});
  };
  /* delta0 = 2: positions (0,1,2) keep both edges local; (0,5,6) stretches only
     the first edge beyond the radius. */
  return {chain_at(1, 2), chain_at(5, 6), 5};
}

} // namespace

std::vector<WitnessPair> witness_suite() {
  return {witness_S(), witness_A(), witness_R(), witness_I(), witness_H(), witness_L()};
}

} // namespace sbn
