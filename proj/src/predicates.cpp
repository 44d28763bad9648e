#include "sbn/predicates.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <set>

#include "sbn/errors.hpp"

namespace sbn {

const char* const kConstraintNames[kConstraintCount] = {"S", "A", "R", "I", "H", "L"};

ConstraintVector ConstraintVector::from_arch_id(int id) {
  if (id < 0 || id > 63) throw ShapeError("arch_id outside [0, 63]");
  ConstraintVector v;
  v.s = (id >> 5) & 1;
  v.a = (id >> 4) & 1;
  v.r = (id >> 3) & 1;
  v.i = (id >> 2) & 1;
  v.h = (id >> 1) & 1;
  v.l = id & 1;
  return v;
}

bool ConstraintVector::bit(int idx) const {
  switch (idx) {
    case 0: return s;
    case 1: return a;
    case 2: return r;
    case 3: return i;
    case 4: return h;
    case 5: return l;
  }
  throw ShapeError("constraint index outside [0, 5]");
}

void ConstraintVector::set_bit(int idx, bool value) {
  switch (idx) {
    case 0: s = value; return;
    case 1: a = value; return;
    case 2: r = value; return;
    case 3: i = value; return;
    case 4: h = value; return;
    case 5: l = value; return;
  }
  throw ShapeError("constraint index outside [0, 5]");
}

std::string ConstraintVector::to_string() const {
  std::string out = "(";
  for (int idx = 0; idx < kConstraintCount; ++idx) {
    if (idx) out += ',';
    out += bit(idx) ? '1' : '0';
  }
  out += ')';
  return out;
}

std::string ConstraintVector::label() const {
  std::string out;
  for (int idx = 0; idx < kConstraintCount; ++idx) {
    if (!bit(idx)) continue;
    if (!out.empty()) out += '+';
    out += kConstraintNames[idx];
  }
  return out.empty() ? "none" : out;
}

bool predicate_S(const SbnNetwork& net) {
  if (net.depth < 2) return false;
  for (int k = 1; k < net.depth; ++k)
    if (net.layer_type[static_cast<std::size_t>(k - 1)] == net.layer_type[static_cast<std::size_t>(k)])
      return false;
  for (int v = 0; v < net.node_count(); ++v) {
    const Node& nd = net.nodes[static_cast<std::size_t>(v)];
    if (nd.role == NodeRole::Input) continue;
    if (classify_gate(*nd.gate) != net.layer_type[static_cast<std::size_t>(net.layer[static_cast<std::size_t>(v)] - 1)])
      return false;
  }
  return true;
}

bool predicate_A(const SbnNetwork& net) {
  const int n = net.node_count();
  std::vector<std::vector<int>> succ(static_cast<std::size_t>(n));
  std::vector<int> indeg(static_cast<std::size_t>(n), 0);
  for (const auto& [u, v] : net.edge_set()) {
    succ[static_cast<std::size_t>(u)].push_back(v);
    ++indeg[static_cast<std::size_t>(v)];
  }
  std::deque<int> ready;
  for (int v = 0; v < n; ++v)
    if (indeg[static_cast<std::size_t>(v)] == 0) ready.push_back(v);
  int done = 0;
  while (!ready.empty()) {
    const int u = ready.front();
    ready.pop_front();
    ++done;
    for (int v : succ[static_cast<std::size_t>(u)])
      if (--indeg[static_cast<std::size_t>(v)] == 0) ready.push_back(v);
  }
  return done == n;
}

bool predicate_R(const SbnNetwork& net) {
  const int n = net.node_count();
  std::vector<std::vector<int>> succ(static_cast<std::size_t>(n));
  for (const auto& [u, v] : net.edge_set()) succ[static_cast<std::size_t>(u)].push_back(v);
  constexpr int kUnreached = -1;
  int common = kUnreached;
  for (int x : net.v_in) {
    std::vector<int> dist(static_cast<std::size_t>(n), kUnreached);
    std::deque<int> queue{x};
    dist[static_cast<std::size_t>(x)] = 0;
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop_front();
      for (int v : succ[static_cast<std::size_t>(u)])
        if (dist[static_cast<std::size_t>(v)] == kUnreached) {
          dist[static_cast<std::size_t>(v)] = dist[static_cast<std::size_t>(u)] + 1;
          queue.push_back(v);
        }
    }
    for (int y : net.v_out) {
      const int d = dist[static_cast<std::size_t>(y)];
      if (d == kUnreached) return false;
      if (common == kUnreached)
        common = d;
      else if (common != d)
        return false;
    }
  }
  return true;
}

bool predicate_I(const SbnNetwork& net) {
  for (const auto& [u, v] : net.edge_set())
    if (net.block[static_cast<std::size_t>(u)] != net.block[static_cast<std::size_t>(v)]) return true;
  return false;
}

bool predicate_H(const SbnNetwork& net) {
  for (int k = 1; k <= net.depth; ++k) {
    int arity = -1;
    std::uint16_t canon = 0;
    int members = 0;
    for (int v = 0; v < net.node_count(); ++v) {
      const Node& nd = net.nodes[static_cast<std::size_t>(v)];
      if (nd.role == NodeRole::Input || net.layer[static_cast<std::size_t>(v)] != k) continue;
      const std::uint16_t c = canonical_table(*nd.gate);
      if (members == 0) {
        arity = nd.gate->arity;
        canon = c;
      } else if (nd.gate->arity != arity || c != canon) {
        return false;
      }
      ++members;
    }
  }
  return true;
}

bool predicate_L(const SbnNetwork& net) {
  for (const auto& [u, v] : net.edge_set())
    if (std::llabs(net.position[static_cast<std::size_t>(u)] - net.position[static_cast<std::size_t>(v)]) >
        net.delta0)
      return false;
  return true;
}

ConstraintVector evaluate_predicates(const SbnNetwork& net) {
  ConstraintVector out;
  out.s = predicate_S(net);
  out.a = predicate_A(net);
  out.r = predicate_R(net);
  out.i = predicate_I(net);
  out.h = predicate_H(net);
  out.l = predicate_L(net);
  return out;
}

} // namespace sbn
