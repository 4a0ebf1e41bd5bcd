#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "raven/forge.hpp"
#include "raven/render.hpp"

namespace raven {

/// Per-problem seed; depends only on (master, config, index), never on thread count.
std::uint64_t problem_seed(std::uint64_t master_seed, Configuration config, int index);

/// "Center_000042".
std::string problem_id(Configuration config, int index);

/// Folds are dealt round-robin within a configuration.
inline int fold_of(int index) { return index % 10; }

/// "train" for folds 0-5, "val" for 6-7, "test" for 8-9.
std::string_view split_of(int fold);

struct ProblemRequest {
  Configuration config = Configuration::Center;
  int index = 0;
};

/// `per_config` requests for each configuration, configuration-major.
std::vector<ProblemRequest> plan_requests(std::span<const Configuration> configs, int per_config);

/// One problem with id, fold and seed filled in.
Problem make_problem(const ProblemRequest& request, std::uint64_t master_seed,
                     const SamplingOptions& options = {});

struct SolveOutcome {
  int chosen = -1;      // -1 when the top score is tied
  int margin = 0;       // top score minus the runner-up
  bool correct = false;
};

using PanelPngs = std::array<std::vector<std::uint8_t>, kContextPanels + kCandidateCount>;

// Reference kernels: plain loops, used as test oracles.
std::vector<Problem> generate_batch_serial(std::span<const ProblemRequest> requests, std::uint64_t master_seed,
                                           const SamplingOptions& options = {});
std::vector<SolveOutcome> solve_batch_serial(std::span<const Problem> problems);
std::vector<PanelPngs> render_batch_serial(std::span<const Problem> problems);

// OpenMP kernels. Output is identical to the serial versions for any thread count.
// The first exception thrown by any iteration is rethrown after the loop.
std::vector<Problem> generate_batch(std::span<const ProblemRequest> requests, std::uint64_t master_seed,
                                    const SamplingOptions& options = {});
std::vector<SolveOutcome> solve_batch(std::span<const Problem> problems);
std::vector<PanelPngs> render_batch(std::span<const Problem> problems);

SolveOutcome solve_one(const Problem& problem);

}  // namespace raven
