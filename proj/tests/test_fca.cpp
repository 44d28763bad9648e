#include <algorithm>
#include <set>

#include "doctest.h"
#include "sbn/errors.hpp"
#include "sbn/fca.hpp"
#include "sbn/rng.hpp"

using namespace sbn;

namespace {

FormalContext make_context(int n_objects, int n_attributes,
                           const std::vector<std::uint32_t>& incidence) {
  FormalContext ctx;
  for (int g = 0; g < n_objects; ++g) ctx.objects.push_back("g" + std::to_string(g));
  for (int a = 0; a < n_attributes; ++a) ctx.attributes.push_back(std::string(1, char('a' + a)));
  ctx.incidence = incidence;
  return ctx;
}

/* Every distinct closure, found by closing all 2^|M| attribute sets. */
std::set<std::uint32_t> brute_force_intents(const FormalContext& ctx) {
  std::set<std::uint32_t> intents;
  for (std::uint32_t b = 0; b < (1u << ctx.attributes.size()); ++b)
    intents.insert(closure(ctx, b));
  return intents;
}

} // namespace

TEST_CASE("empty incidence yields exactly the two boundary concepts") {
  const auto ctx = make_context(3, 2, {0, 0, 0});
  const auto cs = concepts(ctx);
  REQUIRE(cs.size() == 2);
  CHECK(cs[0].extent == std::vector<int>{0, 1, 2});
  CHECK(cs[0].intent == 0u);
  CHECK(cs[1].extent.empty());
  CHECK(cs[1].intent == 3u);
}

TEST_CASE("full incidence collapses to a single concept") {
  const auto ctx = make_context(3, 3, {7, 7, 7});
  const auto cs = concepts(ctx);
  REQUIRE(cs.size() == 1);
  CHECK(cs[0].extent == std::vector<int>{0, 1, 2});
  CHECK(cs[0].intent == 7u);
}

TEST_CASE("hand-built 3x3 context matches exhaustive closure search") {
  /* g0: a,b; g1: b,c; g2: a,c */
  const auto ctx = make_context(3, 3, {0b011, 0b110, 0b101});
  const auto cs = concepts(ctx);
  const auto expected = brute_force_intents(ctx);
  REQUIRE(cs.size() == expected.size());
  for (const Concept& c : cs) {
    CHECK(expected.count(c.intent) == 1);
    CHECK(extent_of(ctx, c.intent) == c.extent);
    CHECK(intent_of(ctx, c.extent) == c.intent);
  }
}

TEST_CASE("concept enumeration matches brute force on random contexts") {
  Rng rng(314);
  for (int trial = 0; trial < 30; ++trial) {
    const int n_obj = 1 + rng.below_int(12);
    const int n_attr = 1 + rng.below_int(10);
    std::vector<std::uint32_t> rows;
    for (int g = 0; g < n_obj; ++g)
      rows.push_back(static_cast<std::uint32_t>(rng.below(1ull << n_attr)));
    const auto ctx = make_context(n_obj, n_attr, rows);
    const auto cs = concepts(ctx);
    const auto expected = brute_force_intents(ctx);
    REQUIRE(cs.size() == expected.size());
    std::set<std::uint32_t> seen;
    for (const Concept& c : cs) {
      seen.insert(c.intent);
      /* Mutual-derivation fixed point. */
      CHECK(extent_of(ctx, c.intent) == c.extent);
      CHECK(intent_of(ctx, c.extent) == c.intent);
      CHECK(closure(ctx, c.intent) == c.intent);
    }
    CHECK(seen == expected);
    /* General-to-specific order is a linear extension of extent inclusion. */
    for (std::size_t k = 1; k < cs.size(); ++k)
      CHECK(cs[k - 1].extent.size() >= cs[k].extent.size());
  }
}

TEST_CASE("attribute bound is enforced") {
  FormalContext ctx;
  for (int a = 0; a < 17; ++a) ctx.attributes.push_back("m" + std::to_string(a));
  CHECK_THROWS_AS(concepts(ctx), CapacityError);

  auto bad = make_context(2, 2, {0, 0, 0});
  CHECK_THROWS_AS(concepts(bad), ShapeError); // row count mismatch
  auto wide = make_context(1, 2, {0b100});
  CHECK_THROWS_AS(concepts(wide), ShapeError); // attribute out of range
}

TEST_CASE("a universally shared attribute yields the empty-antecedent rule") {
  /* Nine objects, all carrying c; other attributes scattered so nothing else
     is common. */
  std::vector<std::uint32_t> rows;
  const std::uint32_t c_bit = 1u << 2;
  Rng rng(41);
  for (int g = 0; g < 9; ++g) {
    rows.push_back(c_bit | (static_cast<std::uint32_t>(rng.below(64)) & ~c_bit));
  }
  rows[0] = c_bit;         // kills any other shared attribute
  rows[1] = c_bit | 0b111011;
  const auto ctx = make_context(9, 6, rows);
  const auto rules = implications(ctx, 0.0, 1.0);
  REQUIRE(!rules.empty());
  CHECK(rules[0].antecedent == 0u);
  CHECK(rules[0].consequent == c_bit);
  CHECK(rules[0].support == 1.0);
  CHECK(rules[0].confidence == 1.0);
  CHECK(rules[0].coverage == 9);
}

TEST_CASE("single-premise rule carries exact support and coverage") {
  /* 32 objects: 12 carry f and all of those carry c; 20 carry neither f nor
     any common companion. Expect f => c at support 12/32. */
  std::vector<std::uint32_t> rows;
  const std::uint32_t f_bit = 1u << 5;
  const std::uint32_t c_bit = 1u << 2;
  for (int g = 0; g < 12; ++g)
    rows.push_back(f_bit | c_bit | (g % 2 ? 1u : 2u)); // vary a/b so closure({f}) = {f,c}
  for (int g = 0; g < 20; ++g)
    rows.push_back(g % 2 ? c_bit : (g % 4 == 0 ? 1u : 2u)); // some c without f
  const auto ctx = make_context(32, 6, rows);
  const auto rules = implications(ctx, 0.0, 1.0);
  const auto hit = std::find_if(rules.begin(), rules.end(), [&](const ImplicationRule& r) {
    return r.antecedent == f_bit;
  });
  REQUIRE(hit != rules.end());
  CHECK((hit->consequent & c_bit) == c_bit);
  CHECK(hit->support == 0.375);
  CHECK(hit->coverage == 12);
}

TEST_CASE("rules never name an attribute no object carries as consequent") {
  const auto ctx = make_context(4, 4, {0b0011, 0b0001, 0b0111, 0b0101});
  const std::uint32_t dead = 1u << 3;
  for (const auto& r : implications(ctx, 0.25, 1.0)) {
    CHECK((r.consequent & dead) == 0u);
    CHECK((r.antecedent & dead) == 0u);
  }
}

TEST_CASE("every emitted rule is exception-free in its context") {
  Rng rng(2718);
  for (int trial = 0; trial < 20; ++trial) {
    const int n_obj = 2 + rng.below_int(10);
    const int n_attr = 2 + rng.below_int(8);
    std::vector<std::uint32_t> rows;
    for (int g = 0; g < n_obj; ++g)
      rows.push_back(static_cast<std::uint32_t>(rng.below(1ull << n_attr)));
    const auto ctx = make_context(n_obj, n_attr, rows);
    for (const auto& r : implications(ctx, 0.0, 1.0)) {
      CHECK(r.confidence == 1.0);
      CHECK(r.support > 0.0);
      for (std::uint32_t row : rows) {
        if ((row & r.antecedent) == r.antecedent) CHECK((row & r.consequent) == r.consequent);
      }
      /* Minimality: no immediate sub-antecedent closes to the same intent. */
      const std::uint32_t closed = r.antecedent | r.consequent;
      for (int a = 0; a < n_attr; ++a) {
        const std::uint32_t bit = 1u << a;
        if (r.antecedent & bit) CHECK(closure(ctx, r.antecedent & ~bit) != closed);
      }
    }
  }
}

TEST_CASE("non-minimal antecedents are suppressed") {
  /* a and b always co-occur: {a,b} closes like {a}, so only singleton rules
     should be emitted. */
  const auto ctx = make_context(4, 3, {0b011, 0b011, 0b111, 0b100});
  for (const auto& r : implications(ctx, 0.0, 1.0)) CHECK(r.antecedent != 0b011u);
}

TEST_CASE("generators of intents containing a marked attribute are recoverable") {
  /* Attribute 3 plays the role of the marked class label. */
  const auto ctx = make_context(5, 4, {0b1011, 0b1001, 0b1111, 0b0100, 0b0110});
  const auto gens = minimal_generators_containing(ctx, 3);
  CHECK(!gens.empty());
  for (std::uint32_t g : gens) CHECK((closure(ctx, g) & (1u << 3)) != 0u);
  CHECK_THROWS_AS(minimal_generators_containing(ctx, 4), ShapeError);
}

TEST_CASE("attribute set names join member labels") {
  const auto ctx = make_context(1, 3, {0b111});
  CHECK(attribute_set_name(ctx, 0) == "{}");
  CHECK(attribute_set_name(ctx, 0b101) == "a+c");
}
