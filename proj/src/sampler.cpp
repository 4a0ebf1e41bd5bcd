#include "raven/sampler.hpp"

#include <utility>

#include "raven/space.hpp"

namespace raven {

namespace {

constexpr std::array<int, 4> kDeltas = {-2, -1, 1, 2};

bool slot_forced_constant(Configuration config, int component, int slot) {
  const auto& comp = configuration_spec(config).components[static_cast<std::size_t>(component)];
  if (slot == 0) return comp.max_entities() == 1;
  // The outside entity keeps the lightest fill so the inside component stays visible.
  return slot == 3 && comp.kind == ComponentKind::Out;
}

Attribute sample_slot_target(Configuration config, int component, int slot, Rng& rng) {
  if (slot > 0) return kEntitySlotAttributes[static_cast<std::size_t>(slot - 1)];
  if (slot_forced_constant(config, component, 0)) return Attribute::Number;
  return coin(rng) ? Attribute::Position : Attribute::Number;
}

RuleSpec sample_rule(Configuration config, int component, Attribute target, bool non_constant,
                     Rng& rng) {
  std::vector<RuleType> types;
  for (std::size_t t = 0; t < kRuleTypeCount; ++t) {
    const auto type = static_cast<RuleType>(t);
    if (non_constant && type == RuleType::Constant) continue;
    if (rule_type_allowed(type, target)) types.push_back(type);
  }
  switch (pick<RuleType>(rng, types)) {
    case RuleType::Constant:
      return RuleSpec::constant(target);
    case RuleType::Progression:
      return RuleSpec::progression(target, pick<int>(rng, kDeltas));
    case RuleType::Arithmetic:
      return RuleSpec::arithmetic(target, coin(rng) ? ArithmeticSign::Minus : ArithmeticSign::Plus);
    case RuleType::DistributeThree: {
      const auto& domain = attribute_domain(config, component, target);
      if (domain.size() < 3) throw UnsatisfiableRules("domain too small for DistributeThree");
      std::array<int, 3> triple{};
      const auto picks = sample_slots(rng, static_cast<int>(domain.size()), 3);
      for (std::size_t i = 0; i < 3; ++i)
        triple[i] = domain.values[static_cast<std::size_t>(picks[i])];
      const auto& squares = all_latin_squares();
      return RuleSpec::distribute_three(target, triple, pick<LatinSquare>(rng, squares));
    }
  }
  throw DomainError("unreachable rule type");
}

std::vector<RuleGroup> draw_groups(Configuration config, Rng& rng, const SamplingOptions& options) {
  const int components = component_count(config);
  std::vector<RuleGroup> groups(static_cast<std::size_t>(components));

  std::pair<int, int> special{-1, -1};
  if (options.single_non_constant) {
    std::vector<std::pair<int, int>> eligible;
    for (int c = 0; c < components; ++c)
      for (int s = 0; s < 4; ++s)
        if (!slot_forced_constant(config, c, s)) eligible.emplace_back(c, s);
    special = pick<std::pair<int, int>>(rng, eligible);
  }

  for (int c = 0; c < components; ++c) {
    RuleGroup& g = groups[static_cast<std::size_t>(c)];
    g.component = c;
    for (int s = 0; s < 4; ++s) {
      const Attribute target = sample_slot_target(config, c, s, rng);
      const bool constant = slot_forced_constant(config, c, s) ||
                            (options.single_non_constant && special != std::pair{c, s});
      g.slots[static_cast<std::size_t>(s)] =
          constant ? RuleSpec::constant(target)
                   : sample_rule(config, c, target, options.single_non_constant, rng);
    }
  }
  return groups;
}

}  // namespace

bool release_allowed(Configuration config, const RuleGroup& group) {
  const auto& comp = configuration_spec(config).components[static_cast<std::size_t>(group.component)];
  if (comp.max_entities() < 2) return false;
  for (std::size_t s = 1; s < 4; ++s)
    if (group.slots[s].type != RuleType::Constant) return false;
  return true;
}

std::vector<RuleGroup> sample_rule_groups(Configuration config, Rng& rng,
                                          const SamplingOptions& options) {
  for (int attempt = 0; attempt < kRetryBudget; ++attempt) {
    try {
      auto groups = draw_groups(config, rng, options);
      (void)prune_space(config, groups);
      return groups;
    } catch (const UnsatisfiableRules&) {
    }
  }
  throw SamplerStuck("no satisfiable rule combination for " + std::string(to_string(config)) +
                     " after " + std::to_string(kRetryBudget) + " draws");
}

MatrixDraft generate_matrix(Configuration config, std::uint64_t seed, const SamplingOptions& options) {
  Rng rng(seed);
  MatrixDraft draft{config, sample_rule_groups(config, rng, options), {}, seed};
  const PrunedSpace space = prune_space(config, draft.rule_groups);
  const auto& spec = configuration_spec(config);
  const std::size_t components = spec.components.size();

  std::vector<bool> released(components, false);
  for (std::size_t c = 0; c < components; ++c)
    released[c] = release_allowed(config, draft.rule_groups[c]) && coin(rng);

  // Constant values are drawn once and hold across all three rows.
  std::vector<std::array<int, 4>> constants(components);

  for (int r = 0; r < 3; ++r) {
    const PanelState start = sample_panel(space, rng);
    for (int col = 0; col < 3; ++col)
      draft.panels[static_cast<std::size_t>(r * 3 + col)] = PanelState{config, {}};

    for (std::size_t c = 0; c < components; ++c) {
      const RuleGroup& group = draft.rule_groups[c];
      const ComponentSpace& cs = space.components[c];
      const ComponentState& start_comp = start.components[c];

      std::array<Row, 4> values{};
      for (std::size_t s = 0; s < 4; ++s) {
        const RuleSpec& rule = group.slots[s];
        const AttributeDomain& domain = cs.domain(rule.target);
        Row& row = values[s];
        switch (rule.type) {
          case RuleType::Constant:
            if (r == 0) constants[c][s] = start_comp.value(rule.target);
            row = {constants[c][s], constants[c][s], constants[c][s]};
            break;
          case RuleType::Progression:
            row[0] = start_comp.value(rule.target);
            row[1] = apply_rule(rule, domain, std::span(row.data(), 1), r);
            row[2] = apply_rule(rule, domain, std::span(row.data() + 1, 1), r);
            break;
          case RuleType::Arithmetic:
            row[0] = start_comp.value(rule.target);
            row[1] = pick<int>(rng, arithmetic_partners(rule, domain, row[0]));
            row[2] = apply_rule(rule, domain, std::span(row.data(), 2), r);
            break;
          case RuleType::DistributeThree:
            for (std::size_t col = 0; col < 3; ++col)
              row[col] = apply_rule(rule, domain, std::span(row.data(), col), r);
            break;
        }
      }

      const int slot_count = spec.components[c].max_entities();
      const bool by_position = group.slots[0].target == Attribute::Position;
      for (int col = 0; col < 3; ++col) {
        std::vector<int> slots;
        if (by_position) {
          for (int s = 0; s < slot_count; ++s)
            if (values[0][static_cast<std::size_t>(col)] & (1 << s)) slots.push_back(s);
        } else {
          slots = sample_slots(rng, slot_count, values[0][static_cast<std::size_t>(col)]);
        }
        ComponentState comp;
        comp.uniform = !released[c];
        for (int slot : slots) {
          Entity e{slot, values[1][static_cast<std::size_t>(col)],
                   values[2][static_cast<std::size_t>(col)],
                   values[3][static_cast<std::size_t>(col)], 0};
          if (released[c]) {
            e.type = pick<int>(rng, cs.domain(Attribute::Type).values);
            e.size = pick<int>(rng, cs.domain(Attribute::Size).values);
            e.color = pick<int>(rng, cs.domain(Attribute::Color).values);
          }
          e.angle = uniform_index(rng, kOrientationValues.size());
          comp.entities.push_back(e);
        }
        draft.panels[static_cast<std::size_t>(r * 3 + col)].components.push_back(std::move(comp));
      }
    }
  }
  return draft;
}

Row draft_row(const MatrixDraft& draft, int component, Attribute attribute, int row) {
  Row out{};
  for (int col = 0; col < 3; ++col)
    out[static_cast<std::size_t>(col)] =
        draft.at(row, col).components[static_cast<std::size_t>(component)].value(attribute);
  return out;
}

}  // namespace raven
