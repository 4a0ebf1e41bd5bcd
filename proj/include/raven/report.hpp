#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "raven/forge.hpp"
#include "raven/sampler.hpp"

namespace raven {

/// Every invariant violation found in a stored problem; empty when the problem is clean.
/// With `check_regeneration`, the problem must also be reproducible from its seed.
std::vector<std::string> audit_problem(const Problem& problem, bool check_regeneration = true,
                                       const SamplingOptions& options = {});

/// Per-configuration hit counts, indexed by Configuration.
struct AccuracyTally {
  std::array<int, 7> correct{};
  std::array<int, 7> total{};

  void add(Configuration c, bool hit);
  int all_correct() const;
  int all_total() const;
  /// Percent; 0 when nothing was counted.
  double accuracy(Configuration c) const;
  double overall() const;
};

/// `chosen[i]` is the answer given for `problems[i]`; -1 counts as wrong.
AccuracyTally tally(std::span<const Problem> problems, std::span<const int> chosen);

/// Uniform guesses in 0..7, reproducible from `seed`.
std::vector<int> random_choices(std::size_t count, std::uint64_t seed);

/// Method | Acc | Center | 2x2Grid | 3x3Grid | L-R | U-D | O-IC | O-IG
std::string format_accuracy_table(std::string_view method, const AccuracyTally& t);

}  // namespace raven
