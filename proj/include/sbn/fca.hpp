#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace sbn {

/* Binary object-attribute table. Attribute sets are bitmasks (bit k =
   attributes[k]); at most 16 attributes so closure enumeration stays cheap. */
struct FormalContext {
  std::vector<std::string> objects;
  std::vector<std::string> attributes;
  std::vector<std::uint32_t> incidence; // one attribute mask per object

  void validate() const;
};

struct Concept {
  std::vector<int> extent; // object indices, ascending
  std::uint32_t intent = 0;
};

/* Objects carrying every attribute in `attrs`. */
std::vector<int> extent_of(const FormalContext& ctx, std::uint32_t attrs);

/* Attributes shared by every listed object (all attributes when empty). */
std::uint32_t intent_of(const FormalContext& ctx, const std::vector<int>& objs);

std::uint32_t closure(const FormalContext& ctx, std::uint32_t attrs);

/* All closed (extent, intent) pairs via closure enumeration in lectic order.
   Output sorted general-to-specific: extent size descending, then intent
   ascending, a linear extension of extent inclusion. */
std::vector<Concept> concepts(const FormalContext& ctx);

struct ImplicationRule {
  std::uint32_t antecedent = 0;
  std::uint32_t consequent = 0;
  double support = 0;    // |antecedent extent| / |G|
  double confidence = 0; // 1.0 for closure-derived rules
  int coverage = 0;      // objects carrying the antecedent
};

/* Exact rules antecedent => closure-remainder, one per minimal generator (no
   immediate subset of the antecedent has the same closure), filtered by the
   thresholds. Sorted by antecedent size, then mask. */
std::vector<ImplicationRule> implications(const FormalContext& ctx, double min_support,
                                          double min_confidence);

/* Antecedent masks of the exact rules whose closure contains `attribute`. */
std::vector<std::uint32_t> minimal_generators_containing(const FormalContext& ctx, int attribute);

std::string attribute_set_name(const FormalContext& ctx, std::uint32_t attrs); // "A+I", "{}"

} // namespace sbn
