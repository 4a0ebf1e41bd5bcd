#include "raven/rules.hpp"

#include <algorithm>
#include <stdexcept>

namespace raven {

namespace {

PositionMask rotate_slots(int mask, int delta, int slot_count) {
  const int n = slot_count;
  const int full = (1 << n) - 1;
  const int d = ((delta % n) + n) % n;
  if (d == 0) return static_cast<PositionMask>(mask);
  return static_cast<PositionMask>(((mask << d) | (mask >> (n - d))) & full);
}

bool is_permutation_of(const Row& row, const std::array<int, 3>& triple) {
  auto a = row;
  auto b = triple;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

bool pairwise_distinct(const std::array<int, 3>& v) {
  return v[0] != v[1] && v[0] != v[2] && v[1] != v[2];
}

bool is_latin(const LatinSquare& sq) {
  for (int i = 0; i < 3; ++i) {
    int row_seen = 0, col_seen = 0;
    for (int j = 0; j < 3; ++j) {
      if (sq[i][j] > 2 || sq[j][i] > 2) return false;
      row_seen |= 1 << sq[i][j];
      col_seen |= 1 << sq[j][i];
    }
    if (row_seen != 7 || col_seen != 7) return false;
  }
  return true;
}

}  // namespace

const std::vector<LatinSquare>& all_latin_squares() {
  static const std::vector<LatinSquare> squares = [] {
    std::vector<std::array<std::uint8_t, 3>> perms;
    std::array<std::uint8_t, 3> p{0, 1, 2};
    do {
      perms.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    std::vector<LatinSquare> out;
    for (const auto& a : perms)
      for (const auto& b : perms)
        for (const auto& c : perms) {
          LatinSquare sq{a, b, c};
          if (is_latin(sq)) out.push_back(sq);
        }
    return out;
  }();
  return squares;
}

RuleSpec RuleSpec::constant(Attribute target) { return RuleSpec{RuleType::Constant, target}; }

RuleSpec RuleSpec::progression(Attribute target, int delta) {
  RuleSpec r{RuleType::Progression, target};
  r.delta = delta;
  return r;
}

RuleSpec RuleSpec::arithmetic(Attribute target, ArithmeticSign sign) {
  RuleSpec r{RuleType::Arithmetic, target};
  r.sign = sign;
  return r;
}

RuleSpec RuleSpec::distribute_three(Attribute target, std::array<int, 3> triple,
                                    const LatinSquare& assignment) {
  RuleSpec r{RuleType::DistributeThree, target};
  // Canonical form: ascending triple, arrangement remapped to match.
  std::array<std::uint8_t, 3> order{0, 1, 2};
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return triple[a] < triple[b]; });
  std::array<std::uint8_t, 3> rank{};
  for (std::uint8_t i = 0; i < 3; ++i) {
    r.triple[i] = triple[order[i]];
    rank[order[i]] = i;
  }
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      r.assignment[i][j] = assignment[i][j] < 3 ? rank[assignment[i][j]] : assignment[i][j];
  return r;
}

int instantiation_index(const RuleSpec& rule) {
  switch (rule.type) {
    case RuleType::Constant:
      return 0;
    case RuleType::Progression:
      switch (rule.delta) {
        case -2: return 1;
        case -1: return 2;
        case 1: return 3;
        case 2: return 4;
        default: throw DomainError("invalid Progression delta");
      }
    case RuleType::Arithmetic:
      return rule.sign == ArithmeticSign::Plus ? 5 : 6;
    case RuleType::DistributeThree:
      return 7;
  }
  throw DomainError("unknown rule type");
}

bool rule_type_allowed(RuleType type, Attribute target) {
  if (!is_rule_attribute(target)) return false;
  // Shape identity has no additive semantics.
  return !(type == RuleType::Arithmetic && target == Attribute::Type);
}

void validate_rule_group(const RuleGroup& group) {
  const auto& first = group.slots[0];
  if (first.target != Attribute::Number && first.target != Attribute::Position)
    throw DomainError("slot 0 must target Number or Position");
  for (std::size_t i = 0; i < kEntitySlotAttributes.size(); ++i) {
    if (group.slots[i + 1].target != kEntitySlotAttributes[i])
      throw DomainError("slot " + std::to_string(i + 1) + " must target " +
                        std::string(to_string(kEntitySlotAttributes[i])));
  }
  for (const auto& r : group.slots) {
    if (!rule_type_allowed(r.type, r.target))
      throw DomainError(std::string(to_string(r.type)) + " not allowed on " +
                        std::string(to_string(r.target)));
    if (r.type == RuleType::Progression) (void)instantiation_index(r);
    if (r.type == RuleType::DistributeThree &&
        (!pairwise_distinct(r.triple) || !is_latin(r.assignment)))
      throw DomainError("DistributeThree needs distinct values and a Latin arrangement");
  }
}

std::optional<int> try_apply_rule(const RuleSpec& rule, const AttributeDomain& domain,
                                  std::span<const int> prefix, int row_index) {
  if (prefix.size() > 2 || row_index < 0 || row_index > 2)
    throw std::invalid_argument("apply_rule: prefix must hold at most 2 values, row in 0..2");
  if (rule.type != RuleType::DistributeThree && prefix.empty())
    throw std::invalid_argument("apply_rule: empty prefix");
  const bool position = rule.target == Attribute::Position;

  int result = 0;
  switch (rule.type) {
    case RuleType::Constant:
      result = prefix.back();
      break;
    case RuleType::Progression:
      result = position ? rotate_slots(prefix.back(), rule.delta, domain.slot_count)
                        : prefix.back() + rule.delta;
      break;
    case RuleType::Arithmetic: {
      if (prefix.size() != 2) throw std::invalid_argument("Arithmetic needs a 2-value prefix");
      const int a = prefix[0], b = prefix[1];
      if (position)
        result = rule.sign == ArithmeticSign::Plus ? (a | b) : (a & ~b);
      else
        result = rule.sign == ArithmeticSign::Plus ? a + b : a - b;
      break;
    }
    case RuleType::DistributeThree:
      result = rule.triple[rule.assignment[static_cast<std::size_t>(row_index)][prefix.size()]];
      break;
  }
  if (!domain.contains(result)) return std::nullopt;
  return result;
}

int apply_rule(const RuleSpec& rule, const AttributeDomain& domain, std::span<const int> prefix,
               int row_index) {
  auto v = try_apply_rule(rule, domain, prefix, row_index);
  if (!v) {
    throw DomainOverflow(describe(rule) + " on " + std::string(to_string(rule.target)) +
                         " left the domain");
  }
  return *v;
}

bool check_row(const RuleSpec& rule, const AttributeDomain& domain, const Row& row) {
  for (int v : row)
    if (!domain.contains(v)) return false;
  switch (rule.type) {
    case RuleType::Constant:
      return row[0] == row[1] && row[1] == row[2];
    case RuleType::Progression: {
      const auto second = try_apply_rule(rule, domain, std::span(row.data(), 1), 0);
      const auto third = try_apply_rule(rule, domain, std::span(row.data() + 1, 1), 0);
      return second == row[1] && third == row[2];
    }
    case RuleType::Arithmetic:
      return try_apply_rule(rule, domain, std::span(row.data(), 2), 0) == row[2];
    case RuleType::DistributeThree:
      return pairwise_distinct(rule.triple) && is_permutation_of(row, rule.triple);
  }
  return false;
}

std::vector<RuleSpec> enumerate_instantiations(Attribute attribute) {
  std::vector<RuleSpec> out;
  if (!is_rule_attribute(attribute)) return out;
  out.push_back(RuleSpec::constant(attribute));
  for (int d : {-2, -1, 1, 2}) out.push_back(RuleSpec::progression(attribute, d));
  if (rule_type_allowed(RuleType::Arithmetic, attribute)) {
    out.push_back(RuleSpec::arithmetic(attribute, ArithmeticSign::Plus));
    out.push_back(RuleSpec::arithmetic(attribute, ArithmeticSign::Minus));
  }
  out.push_back(RuleSpec::distribute_three(attribute, {}, all_latin_squares().front()));
  return out;
}

std::vector<RuleSpec> infer_rules(Attribute attribute, const AttributeDomain& domain, const Row& row1,
                                  const Row& row2) {
  std::vector<RuleSpec> out;
  for (auto rule : enumerate_instantiations(attribute)) {
    if (rule.type != RuleType::DistributeThree) {
      if (check_row(rule, domain, row1) && check_row(rule, domain, row2)) out.push_back(rule);
      continue;
    }
    if (!pairwise_distinct(row1) || !is_permutation_of(row2, row1)) continue;
    std::array<int, 3> triple = row1;
    std::sort(triple.begin(), triple.end());
    if (!check_row(RuleSpec::distribute_three(attribute, triple, rule.assignment), domain, row1))
      continue;
    auto slot_of = [&](int v) {
      return static_cast<std::uint8_t>(std::find(triple.begin(), triple.end(), v) - triple.begin());
    };
    LatinSquare sq{};
    for (std::size_t c = 0; c < 3; ++c) {
      sq[0][c] = slot_of(row1[c]);
      sq[1][c] = slot_of(row2[c]);
      sq[2][c] = static_cast<std::uint8_t>(3 - sq[0][c] - sq[1][c]);
    }
    // Rows that share a column value admit no Latin completion; keep the identity third row.
    if (!is_latin(sq)) sq[2] = {0, 1, 2};
    out.push_back(RuleSpec::distribute_three(attribute, triple, sq));
  }
  return out;
}

std::string_view to_string(RuleType t) {
  static constexpr std::array<std::string_view, kRuleTypeCount> n = {"Constant", "Progression",
                                                                     "Arithmetic", "DistributeThree"};
  return n.at(static_cast<std::size_t>(t));
}

RuleType parse_rule_type(std::string_view text) {
  for (std::size_t i = 0; i < kRuleTypeCount; ++i) {
    const auto t = static_cast<RuleType>(i);
    if (text == to_string(t)) return t;
  }
  throw DomainError("unknown rule type '" + std::string(text) + "'");
}

std::string describe(const RuleSpec& rule) {
  switch (rule.type) {
    case RuleType::Progression:
      return std::string("Progression(") + (rule.delta > 0 ? "+" : "") + std::to_string(rule.delta) +
             ")";
    case RuleType::Arithmetic:
      return rule.sign == ArithmeticSign::Plus ? "Arithmetic(plus)" : "Arithmetic(minus)";
    default:
      return std::string(to_string(rule.type));
  }
}

}  // namespace raven
