#include "raven/batch.hpp"

#include <algorithm>
#include <cstdio>
#include <exception>
#include <mutex>

namespace raven {

namespace {

/// Runs body(i) for i in [0, n) across OpenMP threads and rethrows the first failure.
template <typename Body>
void parallel_for(std::size_t n, Body&& body) {
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic, 4)
  for (std::int64_t i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

PanelPngs encode_panels(const Problem& problem) {
  PanelPngs out;
  const auto images = render_problem_panels(problem);
  for (std::size_t k = 0; k < images.size(); ++k) out[k] = encode_png(images[k]);
  return out;
}

}  // namespace

std::uint64_t problem_seed(std::uint64_t master_seed, Configuration config, int index) {
  return combine_seed(master_seed,
                      combine_seed(static_cast<std::uint64_t>(config), static_cast<std::uint64_t>(index)));
}

std::string problem_id(Configuration config, int index) {
  char digits[16];
  std::snprintf(digits, sizeof digits, "%06d", index);
  return std::string(to_string(config)) + "_" + digits;
}

std::string_view split_of(int fold) {
  if (fold < 6) return "train";
  if (fold < 8) return "val";
  return "test";
}

std::vector<ProblemRequest> plan_requests(std::span<const Configuration> configs, int per_config) {
  std::vector<ProblemRequest> out;
  out.reserve(configs.size() * static_cast<std::size_t>(std::max(per_config, 0)));
  for (Configuration c : configs)
    for (int i = 0; i < per_config; ++i) out.push_back({c, i});
  return out;
}

Problem make_problem(const ProblemRequest& request, std::uint64_t master_seed, const SamplingOptions& options) {
  Problem p = generate_problem(request.config, problem_seed(master_seed, request.config, request.index), options);
  p.id = problem_id(request.config, request.index);
  p.fold = fold_of(request.index);
  return p;
}

SolveOutcome solve_one(const Problem& problem) {
  const auto scores = score_all(problem.context, problem.candidates);
  auto sorted = scores;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  SolveOutcome out;
  out.margin = sorted[0] - sorted[1];
  if (out.margin > 0)
    out.chosen = static_cast<int>(std::max_element(scores.begin(), scores.end()) - scores.begin());
  out.correct = out.chosen == problem.target;
  return out;
}

std::vector<Problem> generate_batch_serial(std::span<const ProblemRequest> requests, std::uint64_t master_seed,
                                           const SamplingOptions& options) {
  std::vector<Problem> out;
  out.reserve(requests.size());
  for (const auto& r : requests) out.push_back(make_problem(r, master_seed, options));
  return out;
}

std::vector<SolveOutcome> solve_batch_serial(std::span<const Problem> problems) {
  std::vector<SolveOutcome> out;
  out.reserve(problems.size());
  for (const auto& p : problems) out.push_back(solve_one(p));
  return out;
}

std::vector<PanelPngs> render_batch_serial(std::span<const Problem> problems) {
  std::vector<PanelPngs> out;
  out.reserve(problems.size());
  for (const auto& p : problems) out.push_back(encode_panels(p));
  return out;
}

std::vector<Problem> generate_batch(std::span<const ProblemRequest> requests, std::uint64_t master_seed,
                                    const SamplingOptions& options) {
  std::vector<Problem> out(requests.size());
  parallel_for(requests.size(), [&](std::size_t i) { out[i] = make_problem(requests[i], master_seed, options); });
  return out;
}

std::vector<SolveOutcome> solve_batch(std::span<const Problem> problems) {
  std::vector<SolveOutcome> out(problems.size());
  parallel_for(problems.size(), [&](std::size_t i) { out[i] = solve_one(problems[i]); });
  return out;
}

std::vector<PanelPngs> render_batch(std::span<const Problem> problems) {
  std::vector<PanelPngs> out(problems.size());
  parallel_for(problems.size(), [&](std::size_t i) { out[i] = encode_panels(problems[i]); });
  return out;
}

}  // namespace raven
