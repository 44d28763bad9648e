#include "sbn/fca.hpp"

#include <algorithm>
#include <bit>

#include "sbn/errors.hpp"

namespace sbn {

void FormalContext::validate() const {
  if (attributes.size() > 16)
    throw CapacityError("closure enumeration supports at most 16 attributes, got " +
                        std::to_string(attributes.size()));
  if (incidence.size() != objects.size())
    throw ShapeError("incidence rows (" + std::to_string(incidence.size()) +
                     ") do not match object count (" + std::to_string(objects.size()) + ")");
  const std::uint32_t all = attributes.empty() ? 0 : (1u << attributes.size()) - 1;
  for (std::uint32_t row : incidence) {
    if (row & ~all) throw ShapeError("incidence row references an attribute out of range");
  }
}

std::vector<int> extent_of(const FormalContext& ctx, std::uint32_t attrs) {
  std::vector<int> out;
  for (std::size_t g = 0; g < ctx.incidence.size(); ++g) {
    if ((ctx.incidence[g] & attrs) == attrs) out.push_back(static_cast<int>(g));
  }
  return out;
}

std::uint32_t intent_of(const FormalContext& ctx, const std::vector<int>& objs) {
  std::uint32_t common = ctx.attributes.empty() ? 0 : (1u << ctx.attributes.size()) - 1;
  for (int g : objs) common &= ctx.incidence[static_cast<std::size_t>(g)];
  return common;
}

std::uint32_t closure(const FormalContext& ctx, std::uint32_t attrs) {
  return intent_of(ctx, extent_of(ctx, attrs));
}

std::vector<Concept> concepts(const FormalContext& ctx) {
  ctx.validate();
  const int m = static_cast<int>(ctx.attributes.size());
  const std::uint32_t all = m == 0 ? 0 : (1u << m) - 1;

  std::vector<Concept> out;
  std::uint32_t current = closure(ctx, 0);
  for (;;) {
    out.push_back({extent_of(ctx, current), current});
    if (current == all) break;
    /* Lectic successor: add the largest absent attribute whose closure only
       introduces attributes at or above it. */
    for (int i = m - 1; i >= 0; --i) {
      const std::uint32_t bit = 1u << i;
      if (current & bit) continue;
      const std::uint32_t below = bit - 1;
      const std::uint32_t next = closure(ctx, (current & below) | bit);
      if ((next & below) == (current & below)) {
        current = next;
        break;
      }
    }
  }

  std::sort(out.begin(), out.end(), [](const Concept& a, const Concept& b) {
    if (a.extent.size() != b.extent.size()) return a.extent.size() > b.extent.size();
    return a.intent < b.intent;
  });
  return out;
}

std::vector<ImplicationRule> implications(const FormalContext& ctx, double min_support,
                                          double min_confidence) {
  ctx.validate();
  const int m = static_cast<int>(ctx.attributes.size());
  const std::size_t n = ctx.incidence.size();
  std::vector<ImplicationRule> out;
  if (n == 0) return out;

  for (std::uint32_t b1 = 0; b1 < (1u << m); ++b1) {
    const auto extent = extent_of(ctx, b1);
    if (extent.empty()) continue;
    const std::uint32_t closed = intent_of(ctx, extent);
    const std::uint32_t b2 = closed & ~b1;
    if (b2 == 0) continue;
    /* Minimal generator: removing any single attribute must shrink the
       closure (monotonicity lifts this to all proper subsets). */
    bool minimal = true;
    for (int a = 0; a < m && minimal; ++a) {
      const std::uint32_t bit = 1u << a;
      if ((b1 & bit) && closure(ctx, b1 & ~bit) == closed) minimal = false;
    }
    if (!minimal) continue;
    const double support = static_cast<double>(extent.size()) / static_cast<double>(n);
    if (support < min_support || 1.0 < min_confidence) continue;
    out.push_back({b1, b2, support, 1.0, static_cast<int>(extent.size())});
  }

  std::sort(out.begin(), out.end(), [](const ImplicationRule& a, const ImplicationRule& b) {
    const int pa = std::popcount(a.antecedent), pb = std::popcount(b.antecedent);
    if (pa != pb) return pa < pb;
    return a.antecedent < b.antecedent;
  });
  return out;
}

std::vector<std::uint32_t> minimal_generators_containing(const FormalContext& ctx, int attribute) {
  if (attribute < 0 || attribute >= static_cast<int>(ctx.attributes.size()))
    throw ShapeError("attribute index out of range");
  const std::uint32_t bit = 1u << attribute;
  std::vector<std::uint32_t> out;
  for (const ImplicationRule& rule : implications(ctx, 0.0, 0.0)) {
    if ((rule.antecedent | rule.consequent) & bit) out.push_back(rule.antecedent);
  }
  return out;
}

std::string attribute_set_name(const FormalContext& ctx, std::uint32_t attrs) {
  if (attrs == 0) return "{}";
  std::string name;
  for (std::size_t k = 0; k < ctx.attributes.size(); ++k) {
    if (!(attrs & (1u << k))) continue;
    if (!name.empty()) name += '+';
    name += ctx.attributes[k];
  }
  return name;
}

} // namespace sbn
