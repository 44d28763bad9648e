#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sbn/gate.hpp"

namespace sbn {

/* Output means "internal node designated as a readout"; it carries a gate like
   any internal node. Input nodes have no gate and hold their injected value. */
enum class NodeRole : std::uint8_t { Input, Internal, Output };

std::string to_string(NodeRole r);
NodeRole role_from_string(const std::string& s);

struct Node {
  NodeRole role = NodeRole::Internal;
  std::optional<GateFunction> gate; // absent iff role == Input
  /* Ordered operand list; may repeat a node (arity = list length). The
     deduplicated pair set is the edge set seen by the structural predicates. */
  std::vector<int> preds;
};

/* Enriched synchronous Boolean network. Node ids are dense indices into
   `nodes`; every map below is indexed by node id. */
struct SbnNetwork {
  std::vector<Node> nodes;
  std::vector<int> layer;             // node -> 1..depth
  std::vector<int> block;             // node -> 1..blocks
  std::vector<long long> position;    // 1-D layout; rho(u,v) = |pos u - pos v|
  std::vector<GateType> layer_type;   // [k-1] = type of layer k
  int depth = 1;
  int blocks = 1;
  int delta0 = 2;
  int horizon = 1;                    // synchronous steps before readout, T >= 1
  std::vector<int> v_in, v_out;       // ordered boundary sets
  int arch_id = -1;                   // class recorded at generation time; -1 = none

  int node_count() const { return static_cast<int>(nodes.size()); }
  int n_in() const { return static_cast<int>(v_in.size()); }
  int n_out() const { return static_cast<int>(v_out.size()); }

  /* Deduplicated directed edges (u, v), u a predecessor of v. */
  std::vector<std::pair<int, int>> edge_set() const;

  /* Structural well-formedness; throws ShapeError with a reason. */
  void validate() const;
};

/* One synchronous update: every gate reads the old state, inputs hold. Pure. */
std::vector<std::uint8_t> step(const SbnNetwork& net, const std::vector<std::uint8_t>& state);

/* F = readout after T steps from the padded injection (inputs onto v_in, zeros
   elsewhere). Bit i of `input` feeds v_in[i]; bit i of the result is v_out[i]. */
std::uint32_t io_map(const SbnNetwork& net, std::uint32_t input);

std::string serialize(const SbnNetwork& net);
SbnNetwork parse_network(const std::string& text);

void save_network(const SbnNetwork& net, const std::string& path);
SbnNetwork load_network(const std::string& path);

} // namespace sbn
