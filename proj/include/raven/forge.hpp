#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "raven/grammar.hpp"
#include "raven/random.hpp"
#include "raven/rules.hpp"
#include "raven/sampler.hpp"
#include "raven/solver.hpp"

namespace raven {

inline constexpr int kDistractorCount = kCandidateCount - 1;

/// A finished problem: 8 context panels, 8 candidates, annotations.
struct Problem {
  std::string id;
  Configuration config = Configuration::Center;
  std::array<PanelState, kContextPanels> context;
  std::array<PanelState, kCandidateCount> candidates;
  int target = 0;
  std::vector<RuleGroup> rule_groups;
  int fold = 0;
  std::uint64_t seed = 0;

  bool operator==(const Problem&) const = default;

  int rule_count() const { return 4 * static_cast<int>(rule_groups.size()); }
};

/// Seven single-attribute edits of the correct panel, each breaking a rule the
/// context reveals. Throws ForgeFailure when fewer than seven such edits exist.
Problem build_answer_set(const MatrixDraft& draft, Rng& rng);

/// True iff the solver picks `target` with a strict margin over every other candidate.
bool verify_unique(const Problem& problem);

/// Number of signal dimensions (per component: layout, and Type/Size/Color when
/// uniform) in which two panels differ. Orientation and released attributes are ignored.
int signal_distance(const PanelState& a, const PanelState& b);

/// Draft + forge from exactly this seed, no retries.
Problem forge_problem(Configuration config, std::uint64_t seed, const SamplingOptions& options = {});

/// forge_problem over derived seeds until the result passes verify_unique.
/// The returned problem records the seed that produced it.
/// Throws SamplerStuck after kRetryBudget attempts.
Problem generate_problem(Configuration config, std::uint64_t seed,
                         const SamplingOptions& options = {});

}  // namespace raven
