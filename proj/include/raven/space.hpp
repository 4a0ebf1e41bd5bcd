#pragma once

#include <array>
#include <span>
#include <vector>

#include "raven/grammar.hpp"
#include "raven/random.hpp"
#include "raven/rules.hpp"

namespace raven {

/// Sampling space of one component after pruning against its rule group.
struct ComponentSpace {
  std::array<AttributeDomain, kRuleAttributeCount> domains;  // indexed by Attribute
  std::array<std::vector<int>, kRuleAttributeCount> starts;  // admissible first-panel values

  const AttributeDomain& domain(Attribute a) const {
    return domains[static_cast<std::size_t>(a)];
  }
  const std::vector<int>& admissible(Attribute a) const {
    return starts[static_cast<std::size_t>(a)];
  }
};

struct PrunedSpace {
  Configuration config = Configuration::Center;
  std::vector<RuleGroup> rules;
  std::vector<ComponentSpace> components;
};

/// Values `second` such that Arithmetic(first, second) stays in the domain.
std::vector<int> arithmetic_partners(const RuleSpec& rule, const AttributeDomain& domain, int first);

/// Restricts every rule-governed attribute to the start values from which a
/// full row stays inside its domain. Throws UnsatisfiableRules when any
/// attribute is left without admissible values.
PrunedSpace prune_space(Configuration config, std::span<const RuleGroup> rules);

/// Draws one panel from the pruned space. Entities are uniform; orientation
/// is drawn per entity.
PanelState sample_panel(const PrunedSpace& space, Rng& rng);

/// `count` distinct slots out of `slot_count`, ascending.
std::vector<int> sample_slots(Rng& rng, int slot_count, int count);

}  // namespace raven
