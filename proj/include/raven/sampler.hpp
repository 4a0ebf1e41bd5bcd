#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "raven/grammar.hpp"
#include "raven/random.hpp"
#include "raven/rules.hpp"

namespace raven {

inline constexpr int kRetryBudget = 100;

struct SamplingOptions {
  /// Every slot Constant except one (familiarization problems).
  bool single_non_constant = false;
};

/// The 3x3 matrix before the answer set exists. panels[8] is the correct answer.
struct MatrixDraft {
  Configuration config = Configuration::Center;
  std::vector<RuleGroup> rule_groups;
  std::array<PanelState, 9> panels;
  std::uint64_t seed = 0;

  const PanelState& at(int row, int col) const {
    return panels[static_cast<std::size_t>(row * 3 + col)];
  }
};

/// One rule group per component whose pruned space is non-empty.
/// Throws SamplerStuck after kRetryBudget rejected draws.
std::vector<RuleGroup> sample_rule_groups(Configuration config, Rng& rng,
                                          const SamplingOptions& options = {});

/// Deterministic in (config, seed, options).
MatrixDraft generate_matrix(Configuration config, std::uint64_t seed,
                            const SamplingOptions& options = {});

/// Whether Type, Size and Color of a component become free per-entity noise.
/// Only possible when all three slots are Constant and the layout has more than one slot.
bool release_allowed(Configuration config, const RuleGroup& group);

/// Row `row` of attribute `attribute` for component `component`, read from the draft.
Row draft_row(const MatrixDraft& draft, int component, Attribute attribute, int row);

}  // namespace raven
