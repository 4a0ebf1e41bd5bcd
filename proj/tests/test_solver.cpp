#include "doctest.h"
#include "raven/forge.hpp"
#include "raven/solver.hpp"

using namespace raven;

namespace {

PanelState center_panel(int type, int size, int color, int angle = 0) {
  return PanelState{Configuration::Center, {ComponentState{true, {Entity{0, type, size, color, angle}}}}};
}

/// Center matrix: Number/Type/Size constant, Color Progression(+1) along each row.
std::array<PanelState, kContextPanels> progression_context() {
  std::array<PanelState, kContextPanels> ctx;
  const int colors[8] = {0, 1, 2, 3, 4, 5, 6, 7};
  for (int k = 0; k < kContextPanels; ++k) ctx[static_cast<std::size_t>(k)] = center_panel(2, 3, colors[k], k % 8);
  return ctx;
}

}  // namespace

TEST_CASE("a Center distractor breaking only Color scores 3") {
  const auto ctx = progression_context();
  CHECK(score_candidate(ctx, center_panel(2, 3, 8)).satisfied == 4);
  // Colour 3 breaks (6, 7, ?) under Progression(+1); every other slot still holds.
  CHECK(score_candidate(ctx, center_panel(2, 3, 3)).satisfied == 3);
  // Breaking Size as well costs a second point.
  CHECK(score_candidate(ctx, center_panel(2, 4, 3)).satisfied == 2);
  // Orientation is noise and never scored.
  CHECK(score_candidate(ctx, center_panel(2, 3, 8, 5)).satisfied == 4);
}

TEST_CASE("solve picks the unique maximum and reports 8 scores") {
  const auto ctx = progression_context();
  std::array<PanelState, kCandidateCount> cands;
  for (int i = 0; i < kCandidateCount; ++i) cands[static_cast<std::size_t>(i)] = center_panel(2, 3, i);
  cands[5] = center_panel(2, 3, 8);
  const auto result = solve(ctx, cands);
  CHECK(result.chosen == 5);
  CHECK(result.scores.size() == 8);
  CHECK(result.scores[5] == 4);
  for (int i = 0; i < kCandidateCount; ++i)
    if (i != 5) CHECK(result.scores[static_cast<std::size_t>(i)] == 3);
}

TEST_CASE("a duplicated correct candidate is ambiguous") {
  const auto ctx = progression_context();
  std::array<PanelState, kCandidateCount> cands;
  for (int i = 0; i < kCandidateCount; ++i) cands[static_cast<std::size_t>(i)] = center_panel(2, 3, i);
  cands[1] = center_panel(2, 3, 8);
  cands[6] = center_panel(2, 3, 8);
  CHECK_THROWS_AS(solve(ctx, cands), AmbiguityError);
}

TEST_CASE("configuration mismatch is a scoring error") {
  const auto ctx = progression_context();
  PanelState lr{Configuration::LeftRight,
                {ComponentState{true, {Entity{0, 1, 1, 1, 0}}}, ComponentState{true, {Entity{0, 1, 1, 1, 0}}}}};
  CHECK_THROWS_AS(score_candidate(ctx, lr), ScoringError);
  auto mixed = ctx;
  mixed[3] = lr;
  CHECK_THROWS_AS(analyze_context(mixed), ScoringError);
}

TEST_CASE("slot 0 reads Position when rows 1-2 follow a Position rule") {
  // Grid2x2: the occupied set shifts one slot along each row; Number stays at 1.
  auto panel = [](int slot) {
    return PanelState{Configuration::Grid2x2, {ComponentState{true, {Entity{slot, 0, 2, 2, 0}}}}};
  };
  std::array<PanelState, kContextPanels> ctx;
  const int slots[8] = {0, 1, 2, 1, 2, 3, 2, 3};
  for (int k = 0; k < 8; ++k) ctx[static_cast<std::size_t>(k)] = panel(slots[k]);
  const auto analysis = analyze_context(ctx);
  CHECK(analysis.components[0][0].attribute == Attribute::Position);
  CHECK(score_candidate(analysis, panel(0)).satisfied == 4);  // 2 -> 3 -> 0 wraps around
  CHECK(score_candidate(analysis, panel(1)).satisfied == 3);
}

TEST_CASE("non-uniform context releases Type, Size and Color") {
  auto panel = [](int n, int color_a, int color_b) {
    ComponentState c{false, {}};
    for (int s = 0; s < n; ++s) c.entities.push_back(Entity{s, s % 5, (s + 1) % 6, s == 0 ? color_a : color_b, 0});
    return PanelState{Configuration::Grid3x3, {c}};
  };
  std::array<PanelState, kContextPanels> ctx;
  const int numbers[8] = {1, 2, 3, 4, 5, 6, 2, 3};
  for (int k = 0; k < 8; ++k) ctx[static_cast<std::size_t>(k)] = panel(numbers[k], k % 10, (3 * k) % 10);
  const auto analysis = analyze_context(ctx);
  for (std::size_t s = 1; s < 4; ++s) CHECK(analysis.components[0][s].released);
  // Anything with the right Number scores the maximum; colours are free.
  CHECK(score_candidate(analysis, panel(4, 9, 0)).satisfied == 4);
  CHECK(score_candidate(analysis, panel(5, 9, 0)).satisfied == 3);
}

TEST_CASE("generated problems: the correct candidate scores the maximum with a strict margin") {
  for (Configuration c : kAllConfigurations)
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      const Problem p = generate_problem(c, seed);
      const auto analysis = analyze_context(p.context);
      const auto result = solve(p.context, p.candidates);
      CHECK(result.chosen == p.target);
      CHECK(result.scores[static_cast<std::size_t>(p.target)] == analysis.max_score());
      for (int i = 0; i < kCandidateCount; ++i)
        if (i != p.target) CHECK(result.scores[static_cast<std::size_t>(i)] < analysis.max_score());
    }
}
