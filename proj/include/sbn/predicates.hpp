#pragma once

#include <string>

#include "sbn/network.hpp"

namespace sbn {

/* A point of the 6-cube {0,1}^6; one of the 64 architecture classes. Bit order
   (S,A,R,I,H,L) from most to least significant in arch_id. */
struct ConstraintVector {
  bool s = false, a = false, r = false, i = false, h = false, l = false;

  int arch_id() const {
    return (s ? 32 : 0) + (a ? 16 : 0) + (r ? 8 : 0) + (i ? 4 : 0) + (h ? 2 : 0) + (l ? 1 : 0);
  }
  static ConstraintVector from_arch_id(int id);

  /* idx 0..5 = S..L */
  bool bit(int idx) const;
  void set_bit(int idx, bool value);

  bool operator==(const ConstraintVector&) const = default;

  std::string to_string() const; // "(1,1,1,0,1,1)"
  std::string label() const;     // "A+R+L"; "none" when all bits are 0
};

inline constexpr int kConstraintCount = 6;
extern const char* const kConstraintNames[kConstraintCount]; // "S".."L"

bool predicate_S(const SbnNetwork& net);
bool predicate_A(const SbnNetwork& net);
bool predicate_R(const SbnNetwork& net);
bool predicate_I(const SbnNetwork& net);
bool predicate_H(const SbnNetwork& net);
bool predicate_L(const SbnNetwork& net);

/* Joint valuation (S,A,R,I,H,L). */
ConstraintVector evaluate_predicates(const SbnNetwork& net);

} // namespace sbn
