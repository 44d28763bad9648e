#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace sbn {

inline constexpr int kMaxFanin = 4;

/* P = affine over GF(2) (permutation/diffusion layer material),
   S = nonlinear (substitution layer material). */
enum class GateType : std::uint8_t { P, S };

std::string to_string(GateType t);

/* A k-ary Boolean gate stored as its full truth table. Bit x of `table` is the
   output for input index x; bit j of x carries the j-th operand (LSB first). */
struct GateFunction {
  int arity = 1;
  std::uint16_t table = 0;

  GateFunction() = default;
  GateFunction(int arity_, std::uint16_t table_);

  int size() const { return 1 << arity; }
  bool bit(int x) const { return (table >> x) & 1u; }

  bool operator==(const GateFunction&) const = default;

  /* Truth table as text, f(0) first: 2-ary XOR -> "0110". */
  std::string bits() const;
  static GateFunction from_bits(int arity_, const std::string& bits);
};

/* Algebraic degree of the gate's ANF (binary Moebius transform of the table). */
int gate_anf_degree(const GateFunction& g);

/* P-type iff the ANF degree is <= 1, S-type otherwise. */
GateType classify_gate(const GateFunction& g);

/* Minimal table over all arity! permutations of the input coordinates; two
   gates compute the same rule up to input permutation iff these agree. */
std::uint16_t canonical_table(const GateFunction& g);

enum class GateKind : std::uint8_t { Copy, Not, And, Or, Xor, Nand, Nor, Xnor };

/* Copy/Not exist at arity 1 only; the six k-ary families at arity >= 2. */
GateFunction make_gate(GateKind kind, int arity);

/* The admissible gates of one arity, optionally restricted to one type. */
std::vector<GateFunction> gate_catalog(int arity);
std::vector<GateFunction> gate_catalog(int arity, GateType type);

} // namespace sbn
