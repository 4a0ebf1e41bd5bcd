#include <map>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "raven/random.hpp"
#include "raven/rules.hpp"

using namespace raven;

namespace {

const AttributeDomain& grid2_number() { return attribute_domain(Configuration::Grid2x2, 0, Attribute::Number); }
const AttributeDomain& grid2_position() { return attribute_domain(Configuration::Grid2x2, 0, Attribute::Position); }
const AttributeDomain& center(Attribute a) { return attribute_domain(Configuration::Center, 0, a); }

int apply1(const RuleSpec& r, const AttributeDomain& d, int a) { return apply_rule(r, d, std::span(&a, 1), 0); }
int apply2(const RuleSpec& r, const AttributeDomain& d, int a, int b) {
  const std::array<int, 2> p{a, b};
  return apply_rule(r, d, p, 0);
}

/// Small domains where exhaustive checks stay cheap, per rule attribute.
std::vector<std::pair<Attribute, const AttributeDomain*>> small_domains() {
  return {{Attribute::Number, &grid2_number()},
          {Attribute::Position, &grid2_position()},
          {Attribute::Type, &center(Attribute::Type)},
          {Attribute::Size, &center(Attribute::Size)},
          {Attribute::Color, &center(Attribute::Color)}};
}

}  // namespace

TEST_CASE("apply_rule examples") {
  CHECK(apply1(RuleSpec::progression(Attribute::Size, 1), center(Attribute::Size), 2) == 3);
  const auto& n9 = attribute_domain(Configuration::Grid3x3, 0, Attribute::Number);
  CHECK(apply2(RuleSpec::arithmetic(Attribute::Number, ArithmeticSign::Minus), n9, 5, 2) == 3);
  // {0,1} plus {2} -> {0,1,2}
  CHECK(apply2(RuleSpec::arithmetic(Attribute::Position, ArithmeticSign::Plus), grid2_position(), 0b0011, 0b0100) ==
        0b0111);
  CHECK(apply1(RuleSpec::constant(Attribute::Color), center(Attribute::Color), 7) == 7);
}

TEST_CASE("apply_rule signals overflow") {
  CHECK_THROWS_AS(apply1(RuleSpec::progression(Attribute::Size, 2), center(Attribute::Size), 4), DomainOverflow);
  CHECK_THROWS_AS(apply2(RuleSpec::arithmetic(Attribute::Number, ArithmeticSign::Minus), grid2_number(), 2, 2),
                  DomainOverflow);
  // Position minus that empties the set.
  CHECK_THROWS_AS(apply2(RuleSpec::arithmetic(Attribute::Position, ArithmeticSign::Minus), grid2_position(), 0b0011,
                         0b0011),
                  DomainOverflow);
  CHECK_THROWS_AS(apply1(RuleSpec::arithmetic(Attribute::Number, ArithmeticSign::Plus), grid2_number(), 1),
                  std::invalid_argument);
}

TEST_CASE("check_row examples") {
  CHECK(check_row(RuleSpec::constant(Attribute::Color), center(Attribute::Color), {4, 4, 4}));
  CHECK_FALSE(check_row(RuleSpec::progression(Attribute::Color, -1), center(Attribute::Color), {5, 4, 2}));
  const auto d3 = RuleSpec::distribute_three(Attribute::Color, {1, 2, 3}, all_latin_squares()[0]);
  CHECK(check_row(d3, center(Attribute::Color), {2, 3, 1}));
  CHECK_FALSE(check_row(d3, center(Attribute::Color), {2, 3, 3}));
}

TEST_CASE("exactly eight instantiation classes; no Arithmetic on Type") {
  std::set<int> classes;
  for (Attribute a : {Attribute::Number, Attribute::Position, Attribute::Size, Attribute::Color}) {
    const auto rules = enumerate_instantiations(a);
    CHECK(rules.size() == 8);
    for (const auto& r : rules) classes.insert(instantiation_index(r));
  }
  CHECK(classes.size() == kRuleInstantiationCount);
  const auto type_rules = enumerate_instantiations(Attribute::Type);
  CHECK(type_rules.size() == 6);
  for (const auto& r : type_rules) CHECK(r.type != RuleType::Arithmetic);
  CHECK_FALSE(rule_type_allowed(RuleType::Arithmetic, Attribute::Type));
  CHECK(enumerate_instantiations(Attribute::Orientation).empty());
  CHECK(enumerate_instantiations(Attribute::Uniformity).empty());
}

TEST_CASE("twelve Latin squares, each row and column a permutation") {
  const auto& squares = all_latin_squares();
  CHECK(squares.size() == 12);
  std::set<LatinSquare> unique(squares.begin(), squares.end());
  CHECK(unique.size() == 12);
  for (const auto& sq : squares)
    for (int i = 0; i < 3; ++i) {
      std::set<int> row, col;
      for (int j = 0; j < 3; ++j) {
        row.insert(sq[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
        col.insert(sq[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)]);
      }
      CHECK(row == std::set<int>{0, 1, 2});
      CHECK(col == std::set<int>{0, 1, 2});
    }
}

TEST_CASE("check_row agrees with the reference semantics on every row of every small domain") {
  for (const auto& [attr, dom] : small_domains()) {
    CAPTURE(to_string(attr));
    for (const RuleSpec& r : oracle::all_rules(attr, *dom)) {
      for (int a : dom->values)
        for (int b : dom->values)
          for (int c : dom->values) {
            const Row row{a, b, c};
            if (check_row(r, *dom, row) != oracle::row_ok(r, *dom, row)) {
              FAIL_CHECK(describe(r) << " on " << to_string(attr) << " row " << a << "," << b << "," << c);
            }
          }
    }
  }
}

TEST_CASE("apply then check: every completed row is accepted") {
  for (const auto& [attr, dom] : small_domains()) {
    for (const RuleSpec& base : oracle::all_rules(attr, *dom)) {
      std::vector<RuleSpec> variants{base};
      if (base.type == RuleType::DistributeThree) {
        variants.clear();
        for (const auto& sq : all_latin_squares())
          variants.push_back(RuleSpec::distribute_three(attr, base.triple, sq));
      }
      for (const RuleSpec& r : variants) {
        for (int row = 0; row < 3; ++row) {
          if (r.type == RuleType::DistributeThree) {
            Row vals{};
            for (std::size_t col = 0; col < 3; ++col)
              vals[col] = apply_rule(r, *dom, std::span(vals.data(), col), row);
            CHECK(check_row(r, *dom, vals));
            continue;
          }
          for (int a : dom->values) {
            if (r.type == RuleType::Arithmetic) {
              for (int b : dom->values) {
                const std::array<int, 2> p{a, b};
                if (auto c = try_apply_rule(r, *dom, p, row)) CHECK(check_row(r, *dom, {a, b, *c}));
              }
            } else if (auto b = try_apply_rule(r, *dom, std::span(&a, 1), row)) {
              const int bb = *b;
              if (auto c = try_apply_rule(r, *dom, std::span(&bb, 1), row)) CHECK(check_row(r, *dom, {a, bb, *c}));
            }
          }
        }
      }
    }
  }
}

TEST_CASE("DistributeThree canonicalizes and reads its Latin cell") {
  const auto& sq = all_latin_squares()[5];
  const auto r = RuleSpec::distribute_three(Attribute::Size, {4, 0, 2}, sq);
  CHECK(r.triple == std::array<int, 3>{0, 2, 4});
  // Same arrangement of concrete values as the unsorted input.
  const std::array<int, 3> input{4, 0, 2};
  for (int row = 0; row < 3; ++row)
    for (std::size_t col = 0; col < 3; ++col) {
      Row prefix{};
      const int v = apply_rule(r, center(Attribute::Size), std::span(prefix.data(), col), row);
      CHECK(v == input[sq[static_cast<std::size_t>(row)][col]]);
    }
  RuleGroup g{0,
              {RuleSpec::constant(Attribute::Number), RuleSpec::constant(Attribute::Type),
               RuleSpec::distribute_three(Attribute::Size, {1, 1, 2}, sq), RuleSpec::constant(Attribute::Color)}};
  CHECK_THROWS_AS(validate_rule_group(g), DomainError);
}

TEST_CASE("infer_rules examples") {
  const auto& n9 = attribute_domain(Configuration::Grid3x3, 0, Attribute::Number);
  auto prog = infer_rules(Attribute::Number, n9, {1, 2, 3}, {2, 3, 4});
  REQUIRE(prog.size() == 1);
  CHECK(prog[0] == RuleSpec::progression(Attribute::Number, 1));

  auto constant = infer_rules(Attribute::Color, center(Attribute::Color), {7, 7, 7}, {7, 7, 7});
  CHECK(std::any_of(constant.begin(), constant.end(), [](const RuleSpec& r) { return r.type == RuleType::Constant; }));

  auto d3 = infer_rules(Attribute::Number, n9, {1, 2, 3}, {3, 1, 2});
  REQUIRE(d3.size() == 1);
  CHECK(d3[0].type == RuleType::DistributeThree);
  CHECK(d3[0].triple == std::array<int, 3>{1, 2, 3});
  // Row 3 is the Latin completion: (2, 3, 1).
  CHECK(check_row(d3[0], n9, {2, 3, 1}));

  CHECK(infer_rules(Attribute::Number, n9, {1, 5, 2}, {7, 7, 3}).empty());
  // Different triples in the two rows are not DistributeThree.
  CHECK(infer_rules(Attribute::Number, n9, {1, 2, 4}, {3, 5, 6}).empty());
}

TEST_CASE("infer_rules returns exactly the instantiations that pass both rows") {
  for (const auto& [attr, dom] : small_domains()) {
    if (attr == Attribute::Position) continue;  // 15^6 row pairs; sampled below
    for (int a : dom->values)
      for (int b : dom->values)
        for (int c : dom->values) {
          const Row r1{a, b, c};
          for (int d = 0; d < static_cast<int>(dom->values.size()); d += 2)
            for (int e = 0; e < static_cast<int>(dom->values.size()); e += 2)
              for (int f = 0; f < static_cast<int>(dom->values.size()); ++f) {
                const Row r2{dom->values[static_cast<std::size_t>(d)], dom->values[static_cast<std::size_t>(e)],
                             dom->values[static_cast<std::size_t>(f)]};
                std::set<int> expected;
                for (const RuleSpec& r : oracle::all_rules(attr, *dom)) {
                  if (r.type == RuleType::DistributeThree) continue;
                  if (oracle::row_ok(r, *dom, r1) && oracle::row_ok(r, *dom, r2)) expected.insert(instantiation_index(r));
                }
                auto s1 = r1, s2 = r2;
                std::sort(s1.begin(), s1.end());
                std::sort(s2.begin(), s2.end());
                const bool d3 = s1 == s2 && s1[0] != s1[1] && s1[1] != s1[2];
                if (d3) expected.insert(7);
                std::set<int> got;
                for (const auto& r : infer_rules(attr, *dom, r1, r2)) got.insert(instantiation_index(r));
                if (got != expected) FAIL_CHECK(to_string(attr) << " rows " << a << b << c << " / " << r2[0] << r2[1] << r2[2]);
              }
        }
  }
}

TEST_CASE("infer/apply round trip: the generating rule is always inferred") {
  Rng rng(99);
  for (const auto& [attr, dom] : small_domains()) {
    for (const RuleSpec& base : oracle::all_rules(attr, *dom)) {
      const auto rows = oracle::accepted_rows(base, *dom);
      if (rows.empty()) continue;
      for (int trial = 0; trial < 20; ++trial) {
        RuleSpec r = base;
        Row r1{}, r2{};
        if (r.type == RuleType::DistributeThree) {
          r = RuleSpec::distribute_three(attr, base.triple, pick<LatinSquare>(rng, all_latin_squares()));
          for (std::size_t col = 0; col < 3; ++col) {
            r1[col] = apply_rule(r, *dom, std::span(r1.data(), col), 0);
            r2[col] = apply_rule(r, *dom, std::span(r2.data(), col), 1);
          }
        } else {
          r1 = pick<std::array<int, 3>>(rng, rows);
          r2 = pick<std::array<int, 3>>(rng, rows);
        }
        const auto inferred = infer_rules(attr, *dom, r1, r2);
        const bool found = std::any_of(inferred.begin(), inferred.end(), [&](const RuleSpec& x) {
          return instantiation_index(x) == instantiation_index(r) &&
                 (r.type != RuleType::DistributeThree || (x.triple == r.triple && x.assignment[0] == r.assignment[0] &&
                                                          x.assignment[1] == r.assignment[1]));
        });
        CHECK_MESSAGE(found, describe(r) << " on " << to_string(attr));
      }
    }
  }
}

TEST_CASE("Position progression is a cyclic shift") {
  const auto& d = grid2_position();
  for (int delta : {-2, -1, 1, 2})
    for (int m : d.values)
      CHECK(apply1(RuleSpec::progression(Attribute::Position, delta), d, m) == oracle::shift_slots(m, delta, 4));
}

TEST_CASE("validate_rule_group") {
  RuleGroup g{0,
              {RuleSpec::constant(Attribute::Number), RuleSpec::progression(Attribute::Type, 1),
               RuleSpec::constant(Attribute::Size), RuleSpec::constant(Attribute::Color)}};
  CHECK_NOTHROW(validate_rule_group(g));
  auto arith_type = g;
  arith_type.slots[1] = RuleSpec::arithmetic(Attribute::Type, ArithmeticSign::Plus);
  CHECK_THROWS_AS(validate_rule_group(arith_type), DomainError);
  auto noise = g;
  noise.slots[0] = RuleSpec::constant(Attribute::Orientation);
  CHECK_THROWS_AS(validate_rule_group(noise), DomainError);
  auto swapped = g;
  std::swap(swapped.slots[2], swapped.slots[3]);
  CHECK_THROWS_AS(validate_rule_group(swapped), DomainError);
  auto bad_delta = g;
  bad_delta.slots[1].delta = 3;
  CHECK_THROWS_AS(validate_rule_group(bad_delta), DomainError);
}

TEST_CASE("rule names round trip") {
  for (auto t : {RuleType::Constant, RuleType::Progression, RuleType::Arithmetic, RuleType::DistributeThree})
    CHECK(parse_rule_type(to_string(t)) == t);
  CHECK(describe(RuleSpec::progression(Attribute::Size, 1)) == "Progression(+1)");
  CHECK(describe(RuleSpec::arithmetic(Attribute::Size, ArithmeticSign::Minus)) == "Arithmetic(minus)");
}
