#pragma once

#include <array>
#include <span>
#include <vector>

#include "raven/grammar.hpp"
#include "raven/rules.hpp"

namespace raven {

inline constexpr int kContextPanels = 8;
inline constexpr int kCandidateCount = 8;

struct CandidateScore {
  int candidate_index = 0;
  int satisfied = 0;  // 0 .. 4 x component count
};

/// What the first two rows reveal about one (component, slot) constraint.
struct SlotConstraint {
  Attribute attribute = Attribute::Number;
  const AttributeDomain* domain = nullptr;
  std::vector<RuleSpec> candidates;  // rules consistent with rows 1 and 2
  bool released = false;              // free noise; satisfied by every candidate
  std::array<int, 2> third_row_prefix{};
};

/// Rules inferred from the eight context panels, reusable across candidates.
///
/// Slot 0 reads Position when some rule explains Position over rows 1-2 and
/// Number otherwise. Type/Size/Color are released when any context panel of
/// that component is non-uniform.
struct ContextAnalysis {
  Configuration config = Configuration::Center;
  std::vector<std::array<SlotConstraint, 4>> components;

  int max_score() const { return 4 * static_cast<int>(components.size()); }
};

/// Throws ScoringError when the context panels disagree on configuration.
ContextAnalysis analyze_context(std::span<const PanelState, kContextPanels> context);

/// Throws ScoringError on a configuration mismatch.
CandidateScore score_candidate(const ContextAnalysis& analysis, const PanelState& candidate,
                               int candidate_index = 0);
CandidateScore score_candidate(std::span<const PanelState, kContextPanels> context,
                               const PanelState& candidate, int candidate_index = 0);

struct SolveResult {
  int chosen = -1;
  std::array<int, kCandidateCount> scores{};
};

/// Argmax of the satisfied-constraint count. Throws AmbiguityError on a tie at the maximum.
SolveResult solve(std::span<const PanelState, kContextPanels> context,
                  std::span<const PanelState, kCandidateCount> candidates);

/// Scores without the tie check; used when reporting ambiguous problems.
std::array<int, kCandidateCount> score_all(std::span<const PanelState, kContextPanels> context,
                                           std::span<const PanelState, kCandidateCount> candidates);

}  // namespace raven
