#include "raven/space.hpp"

#include <algorithm>
#include <numeric>

namespace raven {

namespace {

std::vector<int> admissible_starts(const RuleSpec& rule, const AttributeDomain& domain) {
  std::vector<int> out;
  switch (rule.type) {
    case RuleType::Constant:
      return domain.values;
    case RuleType::Progression:
      for (int v : domain.values) {
        const auto second = try_apply_rule(rule, domain, std::span(&v, 1), 0);
        if (!second) continue;
        const int s = *second;
        if (try_apply_rule(rule, domain, std::span(&s, 1), 0)) out.push_back(v);
      }
      return out;
    case RuleType::Arithmetic:
      for (int v : domain.values) {
        const bool any = std::any_of(domain.values.begin(), domain.values.end(), [&](int w) {
          const std::array<int, 2> prefix{v, w};
          return try_apply_rule(rule, domain, prefix, 0).has_value();
        });
        if (any) out.push_back(v);
      }
      return out;
    case RuleType::DistributeThree:
      // The triple is bound at sampling time; it must fit the domain.
      for (int v : rule.triple)
        if (!domain.contains(v)) return {};
      return {rule.triple.begin(), rule.triple.end()};
  }
  return out;
}

}  // namespace

std::vector<int> arithmetic_partners(const RuleSpec& rule, const AttributeDomain& domain, int first) {
  std::vector<int> out;
  for (int v : domain.values) {
    const std::array<int, 2> prefix{first, v};
    if (try_apply_rule(rule, domain, prefix, 0)) out.push_back(v);
  }
  return out;
}

PrunedSpace prune_space(Configuration config, std::span<const RuleGroup> rules) {
  const auto& spec = configuration_spec(config);
  if (rules.size() != spec.components.size())
    throw UnsatisfiableRules("rule group count does not match component count");

  PrunedSpace space{config, {rules.begin(), rules.end()}, {}};
  for (int c = 0; c < static_cast<int>(rules.size()); ++c) {
    const RuleGroup& group = rules[static_cast<std::size_t>(c)];
    validate_rule_group(group);
    ComponentSpace cs;
    for (std::size_t a = 0; a < kRuleAttributeCount; ++a) {
      cs.domains[a] = attribute_domain(config, c, static_cast<Attribute>(a));
      cs.starts[a] = cs.domains[a].values;  // unconstrained unless a rule targets it
    }
    for (const RuleSpec& rule : group.slots) {
      const auto a = static_cast<std::size_t>(rule.target);
      cs.starts[a] = admissible_starts(rule, cs.domains[a]);
      if (cs.starts[a].empty()) {
        throw UnsatisfiableRules(describe(rule) + " on " + std::string(to_string(rule.target)) +
                                 " admits no start value in component " + std::to_string(c));
      }
    }
    space.components.push_back(std::move(cs));
  }
  return space;
}

std::vector<int> sample_slots(Rng& rng, int slot_count, int count) {
  std::vector<int> slots(static_cast<std::size_t>(slot_count));
  std::iota(slots.begin(), slots.end(), 0);
  // Partial Fisher-Yates keeps the draw count independent of slot_count.
  for (int i = 0; i < count; ++i) {
    const int j = i + uniform_index(rng, static_cast<std::size_t>(slot_count - i));
    std::swap(slots[static_cast<std::size_t>(i)], slots[static_cast<std::size_t>(j)]);
  }
  slots.resize(static_cast<std::size_t>(count));
  std::sort(slots.begin(), slots.end());
  return slots;
}

PanelState sample_panel(const PrunedSpace& space, Rng& rng) {
  PanelState panel{space.config, {}};
  for (std::size_t c = 0; c < space.components.size(); ++c) {
    const ComponentSpace& cs = space.components[c];
    const int slot_count = cs.domain(Attribute::Number).slot_count;

    std::vector<int> slots;
    if (space.rules[c].slots[0].target == Attribute::Position) {
      const int mask = pick<int>(rng, cs.admissible(Attribute::Position));
      for (int s = 0; s < slot_count; ++s)
        if (mask & (1 << s)) slots.push_back(s);
    } else {
      const int number = pick<int>(rng, cs.admissible(Attribute::Number));
      slots = sample_slots(rng, slot_count, number);
    }

    const int type = pick<int>(rng, cs.admissible(Attribute::Type));
    const int size = pick<int>(rng, cs.admissible(Attribute::Size));
    const int color = pick<int>(rng, cs.admissible(Attribute::Color));
    ComponentState comp;
    for (int s : slots) {
      const int angle = uniform_index(rng, kOrientationValues.size());
      comp.entities.push_back({s, type, size, color, angle});
    }
    panel.components.push_back(std::move(comp));
  }
  return panel;
}

}  // namespace raven
