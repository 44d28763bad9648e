#include "sbn/gate.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <numeric>

#include "sbn/errors.hpp"

namespace sbn {

std::string to_string(GateType t) { return t == GateType::P ? "P" : "S"; }

GateFunction::GateFunction(int arity_, std::uint16_t table_) : arity(arity_), table(table_) {
  if (arity < 1 || arity > kMaxFanin)
    throw ShapeError("gate arity " + std::to_string(arity) + " outside [1, " +
                     std::to_string(kMaxFanin) + "]");
  const std::uint32_t mask = (1u << size()) - 1u;
  if ((table & ~mask) != 0) throw ShapeError("gate table wider than 2^arity bits");
}

std::string GateFunction::bits() const {
  std::string s(static_cast<std::size_t>(size()), '0');
  for (int x = 0; x < size(); ++x)
    if (bit(x)) s[static_cast<std::size_t>(x)] = '1';
  return s;
}

GateFunction GateFunction::from_bits(int arity_, const std::string& bits) {
  if (arity_ < 1 || arity_ > kMaxFanin || bits.size() != (std::size_t{1} << arity_))
    throw ShapeError("gate bit string length does not match arity");
  std::uint16_t t = 0;
  for (std::size_t x = 0; x < bits.size(); ++x) {
    if (bits[x] == '1')
      t |= static_cast<std::uint16_t>(1u << x);
    else if (bits[x] != '0')
      throw ShapeError("gate bit string must be 0/1");
  }
  return GateFunction(arity_, t);
}

int gate_anf_degree(const GateFunction& g) {
  std::array<std::uint8_t, 1 << kMaxFanin> f{};
  const int n = g.size();
  for (int x = 0; x < n; ++x) f[static_cast<std::size_t>(x)] = g.bit(x) ? 1 : 0;
  for (int j = 0; j < g.arity; ++j)
    for (int x = 0; x < n; ++x)
      if (x & (1 << j)) f[static_cast<std::size_t>(x)] ^= f[static_cast<std::size_t>(x ^ (1 << j))];
  int deg = 0;
  for (int u = 0; u < n; ++u)
    if (f[static_cast<std::size_t>(u)]) deg = std::max(deg, std::popcount(static_cast<unsigned>(u)));
  return deg;
}

GateType classify_gate(const GateFunction& g) {
  return gate_anf_degree(g) <= 1 ? GateType::P : GateType::S;
}

std::uint16_t canonical_table(const GateFunction& g) {
  std::array<int, kMaxFanin> perm{};
  std::iota(perm.begin(), perm.begin() + g.arity, 0);
  std::uint16_t best = 0xFFFF;
  do {
    std::uint16_t t = 0;
    for (int x = 0; x < g.size(); ++x) {
      int px = 0;
      for (int j = 0; j < g.arity; ++j)
        if (x & (1 << j)) px |= 1 << perm[static_cast<std::size_t>(j)];
      if (g.bit(px)) t |= static_cast<std::uint16_t>(1u << x);
    }
    best = std::min(best, t);
  } while (std::next_permutation(perm.begin(), perm.begin() + g.arity));
  return best;
}

GateFunction make_gate(GateKind kind, int arity) {
  if (kind == GateKind::Copy || kind == GateKind::Not) {
    if (arity != 1) throw ShapeError("copy/not gates are unary");
    return GateFunction(1, kind == GateKind::Copy ? 0b10 : 0b01);
  }
  if (arity < 2 || arity > kMaxFanin)
    throw ShapeError("k-ary gate arity outside [2, " + std::to_string(kMaxFanin) + "]");
  const int n = 1 << arity;
  const std::uint32_t full = (1u << n) - 1u;
  std::uint32_t t = 0;
  switch (kind) {
    case GateKind::And:
    case GateKind::Nand:
      t = 1u << (n - 1);
      break;
    case GateKind::Or:
    case GateKind::Nor:
      t = full & ~1u;
      break;
    case GateKind::Xor:
    case GateKind::Xnor:
      for (int x = 0; x < n; ++x)
        if (std::popcount(static_cast<unsigned>(x)) & 1) t |= 1u << x;
      break;
    default:
      break;
  }
  if (kind == GateKind::Nand || kind == GateKind::Nor || kind == GateKind::Xnor) t = full & ~t;
  return GateFunction(arity, static_cast<std::uint16_t>(t));
}

std::vector<GateFunction> gate_catalog(int arity) {
  if (arity == 1) return {make_gate(GateKind::Copy, 1), make_gate(GateKind::Not, 1)};
  std::vector<GateFunction> out;
  for (GateKind k : {GateKind::And, GateKind::Or, GateKind::Xor, GateKind::Nand, GateKind::Nor,
                     GateKind::Xnor})
    out.push_back(make_gate(k, arity));
  return out;
}

std::vector<GateFunction> gate_catalog(int arity, GateType type) {
  std::vector<GateFunction> out;
  for (const auto& g : gate_catalog(arity))
    if (classify_gate(g) == type) out.push_back(g);
  return out;
}

} // namespace sbn
