// Command-line front end: generate, validate, solve, summarize, preview and serve datasets.
#include <httplib.h>

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "raven/annotation.hpp"
#include "raven/batch.hpp"
#include "raven/dataset.hpp"
#include "raven/errors.hpp"
#include "raven/render.hpp"
#include "raven/report.hpp"
#include "raven/service.hpp"

namespace {

using namespace raven;

std::string default_root() {
  const char* env = std::getenv("RAVEN_DATA");
  return env ? env : "";
}

std::vector<Configuration> parse_config_list(const std::string& text) {
  if (text.empty() || text == "all") return {kAllConfigurations.begin(), kAllConfigurations.end()};
  std::vector<Configuration> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(parse_configuration(item));
  return out;
}

std::vector<std::size_t> select_split(const Dataset& ds, const std::string& split) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < ds.problems.size(); ++i)
    if (split == "all" || split_of(ds.problems[i].fold) == split) idx.push_back(i);
  return idx;
}

void print_counts(const std::map<std::string, int>& counts) {
  for (Configuration c : kAllConfigurations)
    if (auto it = counts.find(std::string(to_string(c))); it != counts.end())
      std::printf("  %-12s %d\n", it->first.c_str(), it->second);
}

int cmd_gen(const std::string& out, int per_config, std::uint64_t seed, const std::string& configs, bool serial) {
  const auto cfgs = parse_config_list(configs);
  const auto requests = plan_requests(cfgs, per_config);
  const auto t0 = std::chrono::steady_clock::now();
  const auto problems = serial ? generate_batch_serial(requests, seed) : generate_batch(requests, seed);
  for (const Problem& p : problems)
    if (!verify_unique(p)) throw AmbiguityError(p.id + " failed the uniqueness check");
  const Manifest m = write_dataset(problems, out, seed);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("wrote %zu problems to %s in %.2fs\n", problems.size(), out.c_str(), secs);
  print_counts(m.counts);
  std::printf("AvgRule %.4f  StructAnno %lld\n", m.avg_rule, m.struct_anno);
  return 0;
}

int cmd_validate(const std::string& root, bool regenerate) {
  const Dataset ds = read_dataset(root);
  std::size_t bad = 0;
  std::vector<std::string> all;
  for (std::size_t i = 0; i < ds.problems.size(); ++i) {
    auto issues = audit_problem(ds.problems[i], regenerate);
    if (ds.tree_counts[i] != kContextPanels + kCandidateCount)
      issues.push_back(ds.problems[i].id + ": expected 16 trees");
    if (!issues.empty()) ++bad;
    for (auto& s : issues) all.push_back(std::move(s));
  }
  for (const auto& s : all) std::fprintf(stderr, "%s\n", s.c_str());
  std::printf("%zu problems checked, %zu with issues\n", ds.problems.size(), bad);
  return bad == 0 ? 0 : 1;
}

int cmd_solve(const std::string& root, const std::string& split, const std::string& method, std::uint64_t seed) {
  const Dataset ds = read_dataset(root, false);
  const auto idx = select_split(ds, split);
  std::vector<Problem> problems;
  for (auto i : idx) problems.push_back(ds.problems[i]);

  std::vector<int> chosen;
  std::size_t ties = 0;
  if (method == "solver") {
    for (const SolveOutcome& o : solve_batch(problems)) {
      chosen.push_back(o.chosen);
      ties += o.margin == 0;
    }
  } else {
    chosen = random_choices(problems.size(), seed);
  }
  const AccuracyTally t = tally(problems, chosen);
  std::printf("%zu problems (split: %s)\n", problems.size(), split.c_str());
  std::fputs(format_accuracy_table(method == "solver" ? "Solver" : "Random", t).c_str(), stdout);
  if (ties) std::printf("%zu problems tied at the top score\n", ties);
  return 0;
}

int cmd_stats(const std::string& root) {
  const Dataset ds = read_dataset(root, false);
  const DatasetStats s = compute_stats(ds);
  std::array<int, 3> splits{};
  for (const Problem& p : ds.problems) {
    const auto sp = split_of(p.fold);
    ++splits[sp == "train" ? 0 : sp == "val" ? 1 : 2];
  }
  std::printf("Problems    %zu\n", s.problems);
  print_counts(s.per_config);
  std::printf("Struct      %zu\n", kStructureCount);
  std::printf("FigConfig   %zu\n", s.per_config.size());
  std::printf("RuleIns     %d\n", kRuleInstantiationCount);
  std::printf("AvgRule     %.4f\n", s.avg_rule());
  std::printf("StructAnno  %lld\n", s.trees);
  std::printf("Split       train %d / val %d / test %d\n", splits[0], splits[1], splits[2]);
  return 0;
}

int cmd_preview(const std::string& root, const std::string& id, const std::string& out) {
  const Dataset ds = read_dataset(root, false);
  for (const Problem& p : ds.problems) {
    if (p.id != id) continue;
    write_png(render_sheet(p), out);
    std::printf("wrote %s (%dx%d)\n", out.c_str(), sheet_width(), sheet_height());
    return 0;
  }
  throw IoError("no problem with id '" + id + "' in " + root);
}

int cmd_serve(const std::string& root, const std::string& host, int port, const std::string& familiar,
              int per_config, std::uint64_t seed, const std::string& log) {
  ServiceOptions opts;
  opts.familiarization_config = parse_configuration(familiar);
  opts.test_per_config = per_config;
  opts.seed = seed;
  opts.log_path = log;
  TrialService service(read_dataset(root), root, opts);
  httplib::Server server;
  mount_routes(server, service);
  std::printf("serving %s on http://%s:%d\n", root.c_str(), host.c_str(), port);
  std::fflush(stdout);
  if (!server.listen(host, port)) throw IoError("cannot listen on " + host + ":" + std::to_string(port));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Procedural generator, solver and trial server for Raven-style matrix problems"};
  app.require_subcommand(1);
  const std::string env_root = default_root();

  std::string out = env_root, configs = "all";
  int per_config = 10;
  std::uint64_t seed = 0;
  bool serial = false;
  auto* gen = app.add_subcommand("gen", "Generate a dataset; every problem passes the uniqueness check");
  gen->add_option("--out", out, "Output directory (default: $RAVEN_DATA)")->required(env_root.empty());
  gen->add_option("--per-config", per_config, "Problems per configuration")->check(CLI::NonNegativeNumber);
  gen->add_option("--seed", seed, "Master seed");
  gen->add_option("--configs", configs, "Comma-separated configurations, or 'all'");
  gen->add_flag("--serial", serial, "Use the single-threaded reference kernel");

  std::string dataset = env_root;
  auto add_dataset = [&](CLI::App* sub) {
    sub->add_option("--dataset", dataset, "Dataset root (default: $RAVEN_DATA)")->required(env_root.empty());
  };

  bool regenerate = true;
  auto* validate = app.add_subcommand("validate", "Re-check every invariant of a stored dataset");
  add_dataset(validate);
  validate->add_flag("!--no-regenerate", regenerate, "Skip the reproduce-from-seed audit");

  std::string split = "all", method = "solver";
  std::uint64_t solve_seed = 0;
  auto* solve = app.add_subcommand("solve", "Per-configuration accuracy table");
  add_dataset(solve);
  solve->add_option("--split", split, "train, val, test or all")->check(CLI::IsMember({"train", "val", "test", "all"}));
  solve->add_option("--method", method, "solver or random")->check(CLI::IsMember({"solver", "random"}));
  solve->add_option("--seed", solve_seed, "Seed for the random chooser");

  auto* stats = app.add_subcommand("stats", "Dataset statistics");
  add_dataset(stats);

  std::string id, preview_out;
  auto* preview = app.add_subcommand("preview", "Render one problem as a composite sheet");
  add_dataset(preview);
  preview->add_option("--id", id, "Problem id")->required();
  preview->add_option("--out", preview_out, "Output PNG")->required();

  std::string host = "127.0.0.1", familiar = "Center", log;
  int port = 8080, test_per_config = 2;
  std::uint64_t serve_seed = 0;
  auto* serve = app.add_subcommand("serve", "HTTP trial server");
  add_dataset(serve);
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--port", port, "Port")->check(CLI::Range(1, 65535));
  serve->add_option("--familiarization-config", familiar, "Configuration of the warm-up problems");
  serve->add_option("--test-per-config", test_per_config, "Test problems per configuration")
      ->check(CLI::NonNegativeNumber);
  serve->add_option("--seed", serve_seed, "Seed for session order and warm-up problems");
  serve->add_option("--log", log, "Append-only response log (default: <dataset>/responses.jsonl)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) return cmd_gen(out, per_config, seed, configs, serial);
    if (*validate) return cmd_validate(dataset, regenerate);
    if (*solve) return cmd_solve(dataset, split, method, solve_seed);
    if (*stats) return cmd_stats(dataset);
    if (*preview) return cmd_preview(dataset, id, preview_out);
    if (*serve)
      return cmd_serve(dataset, host, port, familiar, test_per_config, serve_seed,
                       log.empty() ? (std::filesystem::path(dataset) / "responses.jsonl").string() : log);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
