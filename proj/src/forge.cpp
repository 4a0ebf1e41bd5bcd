#include "raven/forge.hpp"

#include <algorithm>

#include "raven/space.hpp"

namespace raven {

namespace {

constexpr std::uint64_t kForgeStream = 0x666f726765ULL;

struct EditGroup {
  int component;
  Attribute attribute;
  std::vector<int> values;  // untried alternatives, consumed from the back
};

Entity fresh_entity(const ComponentState& like, int slot, const AttributeDomain& types,
                    const AttributeDomain& sizes, const AttributeDomain& colors, Rng& rng) {
  Entity e{slot, 0, 0, 0, 0};
  if (like.uniform) {
    const Entity& f = like.entities.front();
    e.type = f.type;
    e.size = f.size;
    e.color = f.color;
  } else {
    e.type = pick<int>(rng, types.values);
    e.size = pick<int>(rng, sizes.values);
    e.color = pick<int>(rng, colors.values);
  }
  e.angle = uniform_index(rng, kOrientationValues.size());
  return e;
}

/// Rebuilds the component on `slots`, keeping entities that already occupy them.
void occupy(ComponentState& comp, const std::vector<int>& slots, Configuration config, int component,
            Rng& rng) {
  const auto& types = attribute_domain(config, component, Attribute::Type);
  const auto& sizes = attribute_domain(config, component, Attribute::Size);
  const auto& colors = attribute_domain(config, component, Attribute::Color);
  std::vector<Entity> next;
  for (int slot : slots) {
    auto it = std::find_if(comp.entities.begin(), comp.entities.end(),
                           [&](const Entity& e) { return e.slot == slot; });
    next.push_back(it != comp.entities.end() ? *it
                                             : fresh_entity(comp, slot, types, sizes, colors, rng));
  }
  comp.entities = std::move(next);
}

PanelState apply_edit(const PanelState& correct, int component, Attribute attribute, int value,
                      Rng& rng) {
  PanelState out = correct;
  ComponentState& comp = out.components[static_cast<std::size_t>(component)];
  const int slot_count =
      configuration_spec(correct.config).components[static_cast<std::size_t>(component)].max_entities();

  switch (attribute) {
    case Attribute::Number: {
      std::vector<int> occupied, empty;
      const PositionMask mask = comp.position();
      for (int s = 0; s < slot_count; ++s) (mask & (1 << s) ? occupied : empty).push_back(s);
      std::vector<int> slots;
      if (value > comp.number()) {
        slots = occupied;
        for (int i : sample_slots(rng, static_cast<int>(empty.size()), value - comp.number()))
          slots.push_back(empty[static_cast<std::size_t>(i)]);
        std::sort(slots.begin(), slots.end());
      } else {
        for (int i : sample_slots(rng, comp.number(), value))
          slots.push_back(occupied[static_cast<std::size_t>(i)]);
      }
      occupy(comp, slots, correct.config, component, rng);
      break;
    }
    case Attribute::Position: {
      std::vector<int> slots;
      for (int s = 0; s < slot_count; ++s)
        if (value & (1 << s)) slots.push_back(s);
      occupy(comp, slots, correct.config, component, rng);
      break;
    }
    case Attribute::Type:
      for (auto& e : comp.entities) e.type = value;
      break;
    case Attribute::Size:
      for (auto& e : comp.entities) e.size = value;
      break;
    case Attribute::Color:
      for (auto& e : comp.entities) e.color = value;
      break;
    default:
      throw DomainError("noise attributes are never edited");
  }
  return out;
}

}  // namespace

int signal_distance(const PanelState& a, const PanelState& b) {
  if (a.config != b.config || a.components.size() != b.components.size())
    throw DomainError("panels of different configurations");
  int d = 0;
  for (std::size_t c = 0; c < a.components.size(); ++c) {
    const auto& x = a.components[c];
    const auto& y = b.components[c];
    if (x.position() != y.position()) ++d;
    if (!x.uniform || !y.uniform) continue;
    for (Attribute attr : kEntitySlotAttributes)
      if (x.value(attr) != y.value(attr)) ++d;
  }
  return d;
}

Problem build_answer_set(const MatrixDraft& draft, Rng& rng) {
  const std::span<const PanelState, kContextPanels> context(draft.panels.data(), kContextPanels);
  const ContextAnalysis analysis = analyze_context(context);
  const PanelState& correct = draft.panels[8];
  if (score_candidate(analysis, correct).satisfied != analysis.max_score())
    throw ForgeFailure("correct panel does not satisfy every inferred constraint");

  std::vector<EditGroup> groups;
  for (std::size_t c = 0; c < draft.rule_groups.size(); ++c) {
    const RuleGroup& rules = draft.rule_groups[c];
    const ComponentState& comp = correct.components[c];
    for (std::size_t s = 0; s < 4; ++s) {
      if (s > 0 && !comp.uniform) break;  // released: Type/Size/Color carry no signal
      const Attribute attr = rules.slots[s].target;
      const auto& domain = attribute_domain(draft.config, static_cast<int>(c), attr);
      EditGroup g{static_cast<int>(c), attr, {}};
      for (int v : domain.values)
        if (v != comp.value(attr)) g.values.push_back(v);
      std::shuffle(g.values.begin(), g.values.end(), rng);
      if (!g.values.empty()) groups.push_back(std::move(g));
    }
  }

  std::vector<PanelState> distractors;
  while (static_cast<int>(distractors.size()) < kDistractorCount && !groups.empty()) {
    const auto gi = static_cast<std::size_t>(uniform_index(rng, groups.size()));
    EditGroup& g = groups[gi];
    const int value = g.values.back();
    g.values.pop_back();
    PanelState candidate = apply_edit(correct, g.component, g.attribute, value, rng);
    if (g.values.empty()) groups.erase(groups.begin() + static_cast<std::ptrdiff_t>(gi));

    if (score_candidate(analysis, candidate).satisfied >= analysis.max_score()) continue;
    if (candidate == correct ||
        std::find(distractors.begin(), distractors.end(), candidate) != distractors.end())
      continue;
    distractors.push_back(std::move(candidate));
  }
  if (static_cast<int>(distractors.size()) < kDistractorCount)
    throw ForgeFailure("only " + std::to_string(distractors.size()) + " rule-breaking edits available");

  Problem p;
  p.config = draft.config;
  p.seed = draft.seed;
  p.rule_groups = draft.rule_groups;
  std::copy_n(draft.panels.begin(), kContextPanels, p.context.begin());
  p.target = uniform_index(rng, kCandidateCount);
  std::size_t next = 0;
  for (int i = 0; i < kCandidateCount; ++i)
    p.candidates[static_cast<std::size_t>(i)] = i == p.target ? correct : distractors[next++];
  return p;
}

bool verify_unique(const Problem& problem) {
  try {
    return solve(problem.context, problem.candidates).chosen == problem.target;
  } catch (const AmbiguityError&) {
    return false;
  } catch (const ScoringError&) {
    return false;
  }
}

Problem forge_problem(Configuration config, std::uint64_t seed, const SamplingOptions& options) {
  const MatrixDraft draft = generate_matrix(config, seed, options);
  Rng rng(combine_seed(seed, kForgeStream));
  return build_answer_set(draft, rng);
}

Problem generate_problem(Configuration config, std::uint64_t seed, const SamplingOptions& options) {
  for (int attempt = 0; attempt < kRetryBudget; ++attempt) {
    const std::uint64_t s = attempt == 0 ? seed : combine_seed(seed, static_cast<std::uint64_t>(attempt));
    try {
      Problem p = forge_problem(config, s, options);
      if (verify_unique(p)) return p;
    } catch (const ForgeFailure&) {
    }
  }
  throw SamplerStuck("no unique problem for " + std::string(to_string(config)) + " after " +
                     std::to_string(kRetryBudget) + " seeds");
}

}  // namespace raven
