#include "raven/report.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

#include "raven/annotation.hpp"
#include "raven/errors.hpp"

namespace raven {

namespace {

std::string where(const Problem& p) { return p.id.empty() ? std::string("problem") : p.id; }

}  // namespace

std::vector<std::string> audit_problem(const Problem& problem, bool check_regeneration,
                                       const SamplingOptions& options) {
  std::vector<std::string> issues;
  auto fail = [&](const std::string& msg) { issues.push_back(where(problem) + ": " + msg); };

  if (problem.target < 0 || problem.target >= kCandidateCount) {
    fail("target out of range");
    return issues;
  }
  if (problem.fold < 0 || problem.fold > 9) fail("fold out of range");
  if (static_cast<int>(problem.rule_groups.size()) != component_count(problem.config)) {
    fail("rule group count does not match the configuration");
    return issues;
  }

  std::array<PanelState, 9> matrix;
  for (int k = 0; k < kContextPanels; ++k) matrix[static_cast<std::size_t>(k)] = problem.context[static_cast<std::size_t>(k)];
  matrix[8] = problem.candidates[static_cast<std::size_t>(problem.target)];
  for (const PanelState& p : matrix) {
    try {
      validate_panel(p);
    } catch (const DomainError& e) {
      fail(std::string("invalid panel: ") + e.what());
      return issues;
    }
    if (p.config != problem.config) fail("panel configuration differs from the problem");
  }
  for (const PanelState& p : problem.candidates) {
    try {
      validate_panel(p);
    } catch (const DomainError& e) {
      fail(std::string("invalid candidate: ") + e.what());
      return issues;
    }
  }

  // Every row must follow every rule, except entity attributes that were released as noise.
  for (std::size_t c = 0; c < problem.rule_groups.size(); ++c) {
    bool released = false;
    for (const PanelState& p : matrix) released = released || !p.components[c].uniform;
    for (const RuleSpec& rule : problem.rule_groups[c].slots) {
      if (released && rule.target != Attribute::Number && rule.target != Attribute::Position) continue;
      const auto& domain = attribute_domain(problem.config, static_cast<int>(c), rule.target);
      for (int row = 0; row < 3; ++row) {
        Row values{};
        for (int col = 0; col < 3; ++col)
          values[static_cast<std::size_t>(col)] =
              matrix[static_cast<std::size_t>(row * 3 + col)].components[c].value(rule.target);
        if (!check_row(rule, domain, values))
          fail("row " + std::to_string(row) + " breaks " + describe(rule) + " on " +
               std::string(to_string(rule.target)) + " in component " + std::to_string(c));
      }
    }
  }

  const auto scores = score_all(problem.context, problem.candidates);
  const int max_score = 4 * static_cast<int>(problem.rule_groups.size());
  if (scores[static_cast<std::size_t>(problem.target)] != max_score) fail("correct candidate is not fully consistent");
  for (int i = 0; i < kCandidateCount; ++i) {
    if (i == problem.target) continue;
    if (scores[static_cast<std::size_t>(i)] >= scores[static_cast<std::size_t>(problem.target)])
      fail("candidate " + std::to_string(i) + " ties or beats the target");
    const int d = signal_distance(problem.candidates[static_cast<std::size_t>(i)], matrix[8]);
    if (d != 1) fail("candidate " + std::to_string(i) + " differs from the answer in " + std::to_string(d) + " dimensions");
  }
  for (int i = 0; i < kCandidateCount; ++i)
    for (int j = i + 1; j < kCandidateCount; ++j)
      if (problem.candidates[static_cast<std::size_t>(i)] == problem.candidates[static_cast<std::size_t>(j)])
        fail("candidates " + std::to_string(i) + " and " + std::to_string(j) + " are identical");

  const auto rt = rule_target_vector(problem);
  int pop = 0;
  for (auto b : rt) pop += b;
  if (pop < 4 || pop > 8) fail("rule_target popcount " + std::to_string(pop) + " outside [4, 8]");
  const auto st = struct_target_vector(problem);
  if (std::find(st.begin(), st.end(), 1) == st.end()) fail("struct_target is empty");

  for (const PanelState& p : problem.candidates) {
    try {
      if (parse_tree(serialize_tree(p)) != p) fail("tree round trip changed a candidate");
    } catch (const ParseError& e) {
      fail(std::string("tree does not parse: ") + e.what());
    }
  }

  if (check_regeneration) {
    try {
      Problem again = forge_problem(problem.config, problem.seed, options);
      again.id = problem.id;
      again.fold = problem.fold;
      if (!(again == problem)) fail("seed " + std::to_string(problem.seed) + " does not reproduce the problem");
    } catch (const Error& e) {
      fail(std::string("regeneration failed: ") + e.what());
    }
  }
  return issues;
}

void AccuracyTally::add(Configuration c, bool hit) {
  const auto i = static_cast<std::size_t>(c);
  ++total[i];
  if (hit) ++correct[i];
}

int AccuracyTally::all_correct() const {
  int n = 0;
  for (int v : correct) n += v;
  return n;
}

int AccuracyTally::all_total() const {
  int n = 0;
  for (int v : total) n += v;
  return n;
}

double AccuracyTally::accuracy(Configuration c) const {
  const auto i = static_cast<std::size_t>(c);
  return total[i] ? 100.0 * correct[i] / total[i] : 0.0;
}

double AccuracyTally::overall() const {
  const int t = all_total();
  return t ? 100.0 * all_correct() / t : 0.0;
}

AccuracyTally tally(std::span<const Problem> problems, std::span<const int> chosen) {
  if (problems.size() != chosen.size()) throw std::invalid_argument("tally: one choice per problem is required");
  AccuracyTally t;
  for (std::size_t i = 0; i < problems.size(); ++i) t.add(problems[i].config, chosen[i] == problems[i].target);
  return t;
}

std::vector<int> random_choices(std::size_t count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<int> out(count);
  for (int& c : out) c = uniform_index(rng, kCandidateCount);
  return out;
}

std::string format_accuracy_table(std::string_view method, const AccuracyTally& t) {
  std::string out;
  char cell[32];
  std::snprintf(cell, sizeof cell, "%-8s", "Method");
  out += cell;
  out += " | Acc    ";
  for (Configuration c : kAllConfigurations) {
    std::snprintf(cell, sizeof cell, " | %-7s", std::string(table_label(c)).c_str());
    out += cell;
  }
  out += "\n";
  std::snprintf(cell, sizeof cell, "%-8s", std::string(method).c_str());
  out += cell;
  auto pct = [&](double v, bool present) {
    if (present)
      std::snprintf(cell, sizeof cell, " | %6.2f%%", v);
    else
      std::snprintf(cell, sizeof cell, " | %7s", "-");
    out += cell;
  };
  pct(t.overall(), t.all_total() > 0);
  for (Configuration c : kAllConfigurations) pct(t.accuracy(c), t.total[static_cast<std::size_t>(c)] > 0);
  out += "\n";
  return out;
}

}  // namespace raven
