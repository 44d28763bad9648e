#pragma once

#include <vector>

#include "sbn/network.hpp"
#include "sbn/predicates.hpp"

namespace sbn {

/* Two networks whose predicate vectors differ exactly in `axis` (0..5 = S..L):
   with_bit has the coordinate set, without_bit has it clear. */
struct WitnessPair {
  SbnNetwork with_bit;
  SbnNetwork without_bit;
  int axis;
};

/* The six logical-independence witness pairs, in constraint order S,A,R,I,H,L. */
std::vector<WitnessPair> witness_suite();

} // namespace sbn
