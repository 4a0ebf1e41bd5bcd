#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "raven/grammar.hpp"

namespace raven {

enum class RuleType : std::uint8_t { Constant, Progression, Arithmetic, DistributeThree };
inline constexpr std::size_t kRuleTypeCount = 4;

enum class ArithmeticSign : std::uint8_t { Plus, Minus };

/// 3x3 arrangement of triple indices; every row and column is a permutation of {0,1,2}.
using LatinSquare = std::array<std::array<std::uint8_t, 3>, 3>;

/// All twelve 3x3 Latin squares over {0,1,2}, in lexicographic order.
const std::vector<LatinSquare>& all_latin_squares();

struct RuleSpec {
  RuleType type = RuleType::Constant;
  Attribute target = Attribute::Number;
  int delta = 0;                          // Progression: -2, -1, +1, +2
  ArithmeticSign sign = ArithmeticSign::Plus;  // Arithmetic
  std::array<int, 3> triple{};            // DistributeThree: pairwise distinct value codes
  LatinSquare assignment{};               // DistributeThree: row/column -> triple index

  bool operator==(const RuleSpec&) const = default;

  static RuleSpec constant(Attribute target);
  static RuleSpec progression(Attribute target, int delta);
  static RuleSpec arithmetic(Attribute target, ArithmeticSign sign);
  static RuleSpec distribute_three(Attribute target, std::array<int, 3> triple,
                                   const LatinSquare& assignment);
};

/// The eight instantiation classes: Constant, Progression(-2,-1,+1,+2), Arithmetic(+,-), DistributeThree.
inline constexpr int kRuleInstantiationCount = 8;
int instantiation_index(const RuleSpec& rule);

/// Four rule slots of one component: [Number|Position, Type, Size, Color].
struct RuleGroup {
  int component = 0;
  std::array<RuleSpec, 4> slots{};

  bool operator==(const RuleGroup&) const = default;
};

/// Slot attributes after slot 0.
inline constexpr std::array<Attribute, 3> kEntitySlotAttributes = {Attribute::Type, Attribute::Size,
                                                                   Attribute::Color};

bool rule_type_allowed(RuleType type, Attribute target);

/// Throws DomainError if the group is malformed (wrong slot targets, noise targets,
/// Arithmetic on Type, bad parameters).
void validate_rule_group(const RuleGroup& group);

/// Next value of a row. `prefix` holds the 1 or 2 preceding values of the row.
/// Throws DomainOverflow when the result leaves `domain`.
int apply_rule(const RuleSpec& rule, const AttributeDomain& domain, std::span<const int> prefix,
               int row_index);

/// Non-throwing form of apply_rule; nullopt on overflow.
std::optional<int> try_apply_rule(const RuleSpec& rule, const AttributeDomain& domain,
                                  std::span<const int> prefix, int row_index);

using Row = std::array<int, 3>;

/// True iff `row` is producible by `rule`. DistributeThree accepts any permutation of its triple.
bool check_row(const RuleSpec& rule, const AttributeDomain& domain, const Row& row);

/// Every admissible instantiation consistent with both rows.
std::vector<RuleSpec> infer_rules(Attribute attribute, const AttributeDomain& domain, const Row& row1,
                                  const Row& row2);

/// Parameter classes applicable to `attribute` (DistributeThree without a bound triple).
std::vector<RuleSpec> enumerate_instantiations(Attribute attribute);

std::string_view to_string(RuleType t);
RuleType parse_rule_type(std::string_view text);
/// Human-readable rule label, e.g. "Progression(+1)" or "Arithmetic(minus)".
std::string describe(const RuleSpec& rule);

}  // namespace raven
