#include "sbn/network.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "sbn/errors.hpp"

namespace sbn {

std::string to_string(NodeRole r) {
  switch (r) {
    case NodeRole::Input: return "input";
    case NodeRole::Internal: return "internal";
    case NodeRole::Output: return "output";
  }
  return "?";
}

NodeRole role_from_string(const std::string& s) {
  if (s == "input") return NodeRole::Input;
  if (s == "internal") return NodeRole::Internal;
  if (s == "output") return NodeRole::Output;
  throw IoError("unknown node role '" + s + "'");
}

std::vector<std::pair<int, int>> SbnNetwork::edge_set() const {
  std::set<std::pair<int, int>> uniq;
  for (int v = 0; v < node_count(); ++v)
    for (int u : nodes[static_cast<std::size_t>(v)].preds) uniq.emplace(u, v);
  return {uniq.begin(), uniq.end()};
}

void SbnNetwork::validate() const {
  const int n = node_count();
  if (n == 0) throw ShapeError("network has no nodes");
  if (depth < 1) throw ShapeError("depth must be >= 1");
  if (blocks < 1) throw ShapeError("block count must be >= 1");
  if (delta0 < 1) throw ShapeError("locality radius must be >= 1");
  if (horizon < 1) throw ShapeError("horizon must be >= 1");
  if (static_cast<int>(layer.size()) != n || static_cast<int>(block.size()) != n ||
      static_cast<int>(position.size()) != n)
    throw ShapeError("layer/block/position maps must cover every node");
  if (static_cast<int>(layer_type.size()) != depth)
    throw ShapeError("layer type map must assign a type to every layer");
  std::vector<char> layer_seen(static_cast<std::size_t>(depth), 0);
  for (int v = 0; v < n; ++v) {
    const Node& nd = nodes[static_cast<std::size_t>(v)];
    if (layer[static_cast<std::size_t>(v)] < 1 || layer[static_cast<std::size_t>(v)] > depth)
      throw ShapeError("node " + std::to_string(v) + " has layer outside 1..depth");
    layer_seen[static_cast<std::size_t>(layer[static_cast<std::size_t>(v)] - 1)] = 1;
    if (block[static_cast<std::size_t>(v)] < 1 || block[static_cast<std::size_t>(v)] > blocks)
      throw ShapeError("node " + std::to_string(v) + " has block outside 1..blocks");
    if (nd.role == NodeRole::Input) {
      if (nd.gate.has_value())
        throw ShapeError("input node " + std::to_string(v) + " must not carry a gate");
    } else {
      if (!nd.gate.has_value())
        throw ShapeError("non-input node " + std::to_string(v) + " must carry a gate");
      if (static_cast<int>(nd.preds.size()) != nd.gate->arity)
        throw ShapeError("node " + std::to_string(v) + " predecessor count != gate arity");
    }
    for (int u : nd.preds)
      if (u < 0 || u >= n)
        throw ShapeError("node " + std::to_string(v) + " references unknown node " + std::to_string(u));
  }
  for (int k = 0; k < depth; ++k)
    if (!layer_seen[static_cast<std::size_t>(k)])
      throw ShapeError("layer " + std::to_string(k + 1) + " is empty (layer map not surjective)");
  if (v_in.empty() || v_out.empty()) throw ShapeError("boundary sets must be nonempty");
  for (int v : v_in) {
    if (v < 0 || v >= n) throw ShapeError("v_in references unknown node");
    if (nodes[static_cast<std::size_t>(v)].role != NodeRole::Input)
      throw ShapeError("v_in node " + std::to_string(v) + " does not have input role");
  }
  for (int v : v_out)
    if (v < 0 || v >= n) throw ShapeError("v_out references unknown node");
}

std::vector<std::uint8_t> step(const SbnNetwork& net, const std::vector<std::uint8_t>& state) {
  if (static_cast<int>(state.size()) != net.node_count())
    throw ShapeError("state length " + std::to_string(state.size()) + " != node count " +
                     std::to_string(net.node_count()));
  std::vector<std::uint8_t> out(state);
  for (int v = 0; v < net.node_count(); ++v) {
    const Node& nd = net.nodes[static_cast<std::size_t>(v)];
    if (nd.role == NodeRole::Input) continue; // inputs hold their injected value
    int idx = 0;
    for (std::size_t j = 0; j < nd.preds.size(); ++j)
      idx |= (state[static_cast<std::size_t>(nd.preds[j])] & 1) << j;
    out[static_cast<std::size_t>(v)] = nd.gate->bit(idx) ? 1 : 0;
  }
  return out;
}

std::uint32_t io_map(const SbnNetwork& net, std::uint32_t input) {
  if (net.horizon < 1) throw ShapeError("evaluation horizon must be >= 1");
  std::vector<std::uint8_t> state(static_cast<std::size_t>(net.node_count()), 0);
  for (int i = 0; i < net.n_in(); ++i)
    state[static_cast<std::size_t>(net.v_in[static_cast<std::size_t>(i)])] =
        static_cast<std::uint8_t>((input >> i) & 1u);
  for (int t = 0; t < net.horizon; ++t) state = step(net, state);
  std::uint32_t out = 0;
  for (int i = 0; i < net.n_out(); ++i)
    out |= static_cast<std::uint32_t>(state[static_cast<std::size_t>(net.v_out[static_cast<std::size_t>(i)])] & 1)
           << i;
  return out;
}

std::string serialize(const SbnNetwork& net) {
  std::ostringstream os;
  os << "sbn 1\n";
  os << "depth " << net.depth << "\n";
  os << "blocks " << net.blocks << "\n";
  os << "delta0 " << net.delta0 << "\n";
  os << "horizon " << net.horizon << "\n";
  os << "types ";
  for (GateType t : net.layer_type) os << to_string(t);
  os << "\n";
  os << "arch " << net.arch_id << "\n";
  os << "inputs";
  for (int v : net.v_in) os << ' ' << v;
  os << "\n";
  os << "outputs";
  for (int v : net.v_out) os << ' ' << v;
  os << "\n";
  os << "nodes " << net.node_count() << "\n";
  for (int v = 0; v < net.node_count(); ++v) {
    const Node& nd = net.nodes[static_cast<std::size_t>(v)];
    os << "n " << v << ' ' << to_string(nd.role) << ' ' << net.layer[static_cast<std::size_t>(v)]
       << ' ' << net.block[static_cast<std::size_t>(v)] << ' '
       << net.position[static_cast<std::size_t>(v)] << ' ';
    if (nd.gate)
      os << nd.gate->arity << ':' << nd.gate->bits();
    else
      os << '-';
    if (nd.preds.empty()) {
      os << " -";
    } else {
      for (int u : nd.preds) os << ' ' << u;
    }
    os << "\n";
  }
  return os.str();
}

namespace {

std::string next_line(std::istringstream& in, int& lineno) {
  std::string line;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) return line;
  }
  throw IoError("unexpected end of network text at line " + std::to_string(lineno));
}

long long expect_key(const std::string& line, const std::string& key, int lineno) {
  std::istringstream ls(line);
  std::string k;
  long long value = 0;
  if (!(ls >> k >> value) || k != key)
    throw IoError("expected '" + key + " <value>' at line " + std::to_string(lineno));
  return value;
}

} // namespace

SbnNetwork parse_network(const std::string& text) {
  std::istringstream in(text);
  int lineno = 0;
  SbnNetwork net;
  {
    std::istringstream ls(next_line(in, lineno));
    std::string magic;
    int version = 0;
    if (!(ls >> magic >> version) || magic != "sbn" || version != 1)
      throw IoError("network text must start with 'sbn 1'");
  }
  net.depth = static_cast<int>(expect_key(next_line(in, lineno), "depth", lineno));
  net.blocks = static_cast<int>(expect_key(next_line(in, lineno), "blocks", lineno));
  net.delta0 = static_cast<int>(expect_key(next_line(in, lineno), "delta0", lineno));
  net.horizon = static_cast<int>(expect_key(next_line(in, lineno), "horizon", lineno));
  {
    std::istringstream ls(next_line(in, lineno));
    std::string k, types;
    if (!(ls >> k >> types) || k != "types")
      throw IoError("expected 'types <SP string>' at line " + std::to_string(lineno));
    for (char c : types) {
      if (c == 'S')
        net.layer_type.push_back(GateType::S);
      else if (c == 'P')
        net.layer_type.push_back(GateType::P);
      else
        throw IoError("layer types must be S or P");
    }
  }
  net.arch_id = static_cast<int>(expect_key(next_line(in, lineno), "arch", lineno));
  auto read_id_list = [&](const std::string& key) {
    std::istringstream ls(next_line(in, lineno));
    std::string k;
    ls >> k;
    if (k != key) throw IoError("expected '" + key + "' list at line " + std::to_string(lineno));
    std::vector<int> ids;
    int v;
    while (ls >> v) ids.push_back(v);
    return ids;
  };
  net.v_in = read_id_list("inputs");
  net.v_out = read_id_list("outputs");
  const int n = static_cast<int>(expect_key(next_line(in, lineno), "nodes", lineno));
  if (n <= 0) throw IoError("node count must be positive");
  net.nodes.resize(static_cast<std::size_t>(n));
  net.layer.assign(static_cast<std::size_t>(n), 1);
  net.block.assign(static_cast<std::size_t>(n), 1);
  net.position.assign(static_cast<std::size_t>(n), 0);
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  for (int row = 0; row < n; ++row) {
    std::istringstream ls(next_line(in, lineno));
    std::string tag, role, gate;
    int id = 0, layer = 0, block = 0;
    long long pos = 0;
    if (!(ls >> tag >> id >> role >> layer >> block >> pos >> gate) || tag != "n")
      throw IoError("malformed node record at line " + std::to_string(lineno));
    if (id < 0 || id >= n || seen[static_cast<std::size_t>(id)])
      throw IoError("node id " + std::to_string(id) + " out of range or repeated at line " +
                    std::to_string(lineno));
    seen[static_cast<std::size_t>(id)] = 1;
    Node nd;
    nd.role = role_from_string(role);
    if (gate != "-") {
      const auto colon = gate.find(':');
      if (colon == std::string::npos)
        throw IoError("gate field must be '<arity>:<bits>' at line " + std::to_string(lineno));
      const int arity = std::stoi(gate.substr(0, colon));
      nd.gate = GateFunction::from_bits(arity, gate.substr(colon + 1));
    }
    std::string tok;
    while (ls >> tok) {
      if (tok == "-") break;
      nd.preds.push_back(std::stoi(tok));
    }
    net.nodes[static_cast<std::size_t>(id)] = std::move(nd);
    net.layer[static_cast<std::size_t>(id)] = layer;
    net.block[static_cast<std::size_t>(id)] = block;
    net.position[static_cast<std::size_t>(id)] = pos;
  }
  net.validate();
  return net;
}

void save_network(const SbnNetwork& net, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << serialize(net);
  if (!out) throw IoError("failed writing '" + path + "'");
}

SbnNetwork load_network(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_network(buf.str());
}

} // namespace sbn
