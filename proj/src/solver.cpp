#include "raven/solver.hpp"

#include <algorithm>

namespace raven {

namespace {

Row context_row(std::span<const PanelState, kContextPanels> context, std::size_t component,
                Attribute attribute, int row) {
  Row out{};
  for (std::size_t col = 0; col < 3; ++col)
    out[col] = context[static_cast<std::size_t>(row) * 3 + col].components[component].value(attribute);
  return out;
}

}  // namespace

ContextAnalysis analyze_context(std::span<const PanelState, kContextPanels> context) {
  const Configuration config = context[0].config;
  for (const auto& p : context) {
    if (p.config != config) throw ScoringError("context panels disagree on configuration");
    if (p.components.size() != static_cast<std::size_t>(component_count(config)))
      throw ScoringError("context panel has the wrong component count");
  }

  ContextAnalysis analysis{config, {}};
  const std::size_t components = context[0].components.size();
  for (std::size_t c = 0; c < components; ++c) {
    bool released = false;
    for (const auto& p : context) released = released || !p.components[c].uniform;

    std::array<SlotConstraint, 4> slots{};
    auto infer = [&](SlotConstraint& slot, Attribute attribute) {
      slot.attribute = attribute;
      slot.domain = &attribute_domain(config, static_cast<int>(c), attribute);
      slot.candidates = infer_rules(attribute, *slot.domain, context_row(context, c, attribute, 0),
                                    context_row(context, c, attribute, 1));
      slot.third_row_prefix = {context[6].components[c].value(attribute), context[7].components[c].value(attribute)};
    };

    infer(slots[0], Attribute::Position);
    if (slots[0].candidates.empty()) infer(slots[0], Attribute::Number);
    for (std::size_t s = 1; s < 4; ++s) {
      if (released) {
        slots[s].attribute = kEntitySlotAttributes[s - 1];
        slots[s].released = true;
      } else {
        infer(slots[s], kEntitySlotAttributes[s - 1]);
      }
    }
    analysis.components.push_back(std::move(slots));
  }
  return analysis;
}

CandidateScore score_candidate(const ContextAnalysis& analysis, const PanelState& candidate,
                               int candidate_index) {
  if (candidate.config != analysis.config ||
      candidate.components.size() != analysis.components.size())
    throw ScoringError("candidate configuration does not match the context");

  CandidateScore score{candidate_index, 0};
  for (std::size_t c = 0; c < analysis.components.size(); ++c) {
    for (const SlotConstraint& slot : analysis.components[c]) {
      if (slot.released) {
        ++score.satisfied;
        continue;
      }
      const Row row{slot.third_row_prefix[0], slot.third_row_prefix[1],
                    candidate.components[c].value(slot.attribute)};
      const bool ok = std::any_of(slot.candidates.begin(), slot.candidates.end(),
                                  [&](const RuleSpec& r) { return check_row(r, *slot.domain, row); });
      if (ok) ++score.satisfied;
    }
  }
  return score;
}

CandidateScore score_candidate(std::span<const PanelState, kContextPanels> context,
                               const PanelState& candidate, int candidate_index) {
  return score_candidate(analyze_context(context), candidate, candidate_index);
}

std::array<int, kCandidateCount> score_all(std::span<const PanelState, kContextPanels> context,
                                           std::span<const PanelState, kCandidateCount> candidates) {
  const ContextAnalysis analysis = analyze_context(context);
  std::array<int, kCandidateCount> scores{};
  for (int i = 0; i < kCandidateCount; ++i)
    scores[static_cast<std::size_t>(i)] =
        score_candidate(analysis, candidates[static_cast<std::size_t>(i)], i).satisfied;
  return scores;
}

SolveResult solve(std::span<const PanelState, kContextPanels> context,
                  std::span<const PanelState, kCandidateCount> candidates) {
  SolveResult result;
  result.scores = score_all(context, candidates);
  const auto best = std::max_element(result.scores.begin(), result.scores.end());
  if (std::count(result.scores.begin(), result.scores.end(), *best) > 1)
    throw AmbiguityError("several candidates share the top score " + std::to_string(*best));
  result.chosen = static_cast<int>(best - result.scores.begin());
  return result;
}

}  // namespace raven
