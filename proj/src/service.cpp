#include "raven/service.hpp"

#include <httplib.h>

#include <algorithm>
#include <cstdio>
#include <ctime>
#include <sstream>

#include "raven/errors.hpp"

namespace raven {

using nlohmann::json;

namespace {

constexpr std::uint64_t kFamiliarizationStream = 0x66616d696cULL;

Reply json_reply(int status, const json& body) { return {status, "application/json", body.dump()}; }

Reply error_reply(int status, const std::string& message) { return json_reply(status, {{"error", message}}); }

std::string iso_timestamp(std::chrono::system_clock::time_point t) {
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(t.time_since_epoch()).count();
  const std::time_t secs = static_cast<std::time_t>(ms / 1000);
  std::tm tm{};
  gmtime_r(&secs, &tm);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", tm.tm_year + 1900, tm.tm_mon + 1,
                tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec, static_cast<int>(ms % 1000));
  return buf;
}

std::string session_name(std::uint64_t seed, std::uint64_t counter) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "s%016llx", static_cast<unsigned long long>(combine_seed(seed, counter)));
  return buf;
}

json record_json(const ResponseRecord& r, bool with_target) {
  json j{{"session_id", r.session_id}, {"problem_id", r.problem_id}, {"config", to_string(r.config)},
         {"phase", to_string(r.phase)},  {"chosen", r.chosen},         {"latency_ms", r.latency_ms},
         {"timestamp", r.timestamp}};
  if (with_target) {
    j["target"] = r.target;
    j["correct"] = r.correct();
  }
  return j;
}

std::optional<int> parse_int(const std::string& text) {
  if (text.empty() || text.size() > 9) return std::nullopt;
  int v = 0;
  for (char ch : text) {
    if (ch < '0' || ch > '9') return std::nullopt;
    v = v * 10 + (ch - '0');
  }
  return v;
}

}  // namespace

std::string_view to_string(Phase p) { return p == Phase::Familiarization ? "familiarization" : "test"; }

TrialService::TrialService(Dataset dataset, std::filesystem::path dataset_root, ServiceOptions options,
                           Clock clock)
    : dataset_(std::move(dataset)), root_(std::move(dataset_root)), options_(std::move(options)),
      clock_(std::move(clock)) {
  for (std::size_t i = 0; i < dataset_.problems.size(); ++i) {
    const Problem& p = dataset_.problems[i];
    by_id_[p.id] = i;
    if (split_of(p.fold) == "test") test_pool_[p.config].push_back(i);
  }
  // Small datasets may have no test fold for some configuration; serve what exists.
  for (std::size_t i = 0; i < dataset_.problems.size(); ++i) {
    auto& pool = test_pool_[dataset_.problems[i].config];
    if (pool.size() < static_cast<std::size_t>(options_.test_per_config) &&
        std::find(pool.begin(), pool.end(), i) == pool.end())
      pool.push_back(i);
  }

  std::vector<ProblemRequest> requests;
  for (int i = 0; i < options_.familiarization_count; ++i) requests.push_back({options_.familiarization_config, i});
  familiarization_ = generate_batch(requests, combine_seed(options_.seed, kFamiliarizationStream),
                                    SamplingOptions{.single_non_constant = true});
  for (Problem& p : familiarization_) {
    p.id = "familiarization_" + p.id;
    familiarization_ids_.push_back(p.id);
  }
  const auto pngs = render_batch(familiarization_);
  for (std::size_t i = 0; i < familiarization_.size(); ++i) familiarization_pngs_[familiarization_[i].id] = pngs[i];

  if (!options_.log_path.empty()) {
    replay_log();
    log_file_.open(options_.log_path, std::ios::app);
    if (!log_file_) throw IoError("cannot open response log " + options_.log_path.string());
  }
}

std::optional<TrialService::Served> TrialService::find_problem(const std::string& id) const {
  if (auto it = by_id_.find(id); it != by_id_.end()) return Served{&dataset_.problems[it->second], Phase::Test};
  for (const Problem& p : familiarization_)
    if (p.id == id) return Served{&p, Phase::Familiarization};
  return std::nullopt;
}

std::vector<std::string> TrialService::draw_test_ids(Rng& rng, int per_config) const {
  std::vector<std::string> ids;
  for (Configuration c : kAllConfigurations) {
    auto it = test_pool_.find(c);
    if (it == test_pool_.end()) continue;
    std::vector<std::size_t> pool = it->second;
    std::shuffle(pool.begin(), pool.end(), rng);
    const auto take = std::min(pool.size(), static_cast<std::size_t>(std::max(per_config, 0)));
    for (std::size_t i = 0; i < take; ++i) ids.push_back(dataset_.problems[pool[i]].id);
  }
  std::shuffle(ids.begin(), ids.end(), rng);
  return ids;
}

void TrialService::append_log(const json& event) {
  if (!log_file_.is_open()) return;
  log_file_ << event.dump() << '\n';
  log_file_.flush();
}

void TrialService::replay_log() {
  std::ifstream in(options_.log_path);
  if (!in) return;
  std::string line;
  while (std::getline(in, line)) {
    json event;
    try {
      event = json::parse(line);
    } catch (const json::exception&) {
      continue;  // a torn final line after a crash
    }
    const std::string kind = event.value("event", "");
    if (kind == "session") {
      TrialSession s;
      s.id = event.at("session_id").get<std::string>();
      s.order = event.at("order").get<std::vector<std::string>>();
      s.familiarization_count = event.at("familiarization_count").get<int>();
      sessions_[s.id] = std::move(s);
      ++session_counter_;
    } else if (kind == "response") {
      auto sit = sessions_.find(event.value("session_id", ""));
      const auto served = find_problem(event.value("problem_id", ""));
      if (sit == sessions_.end() || !served) continue;
      ResponseRecord r;
      r.session_id = sit->first;
      r.problem_id = served->problem->id;
      r.config = served->problem->config;
      r.phase = served->phase;
      r.chosen = event.at("chosen").get<int>();
      r.target = served->problem->target;
      r.latency_ms = event.at("latency_ms").get<long long>();
      r.timestamp = event.at("timestamp").get<std::string>();
      if (sit->second.responses.emplace(r.problem_id, r).second) log_.push_back(r);
    }
  }
}

Reply TrialService::create_session(const std::string& body) {
  int per_config = options_.test_per_config;
  if (!body.empty()) {
    json req = json::parse(body, nullptr, false);
    if (req.is_discarded() || !req.is_object()) return error_reply(400, "request body must be a JSON object");
    if (req.contains("test_per_config")) {
      if (!req["test_per_config"].is_number_integer() || req["test_per_config"].get<int>() < 0)
        return error_reply(400, "test_per_config must be a non-negative integer");
      per_config = req["test_per_config"].get<int>();
    }
  }

  std::lock_guard lock(mutex_);
  TrialSession s;
  s.id = session_name(options_.seed, session_counter_);
  Rng rng(combine_seed(options_.seed, session_counter_));
  ++session_counter_;
  s.order = familiarization_ids_;
  s.familiarization_count = static_cast<int>(familiarization_ids_.size());
  for (auto& id : draw_test_ids(rng, per_config)) s.order.push_back(std::move(id));

  append_log({{"event", "session"},
              {"session_id", s.id},
              {"order", s.order},
              {"familiarization_count", s.familiarization_count}});
  const int test_count = static_cast<int>(s.order.size()) - s.familiarization_count;
  json out{{"session_id", s.id},
           {"total", s.order.size()},
           {"phases",
            json::array({{{"phase", "familiarization"},
                          {"count", s.familiarization_count},
                          {"config", to_string(options_.familiarization_config)},
                          {"feedback", true}},
                         {{"phase", "test"}, {"count", test_count}, {"feedback", false}}})}};
  sessions_[s.id] = std::move(s);
  return json_reply(201, out);
}

Reply TrialService::problem(const std::string& session_id, const std::string& index_text) {
  std::lock_guard lock(mutex_);
  auto sit = sessions_.find(session_id);
  if (sit == sessions_.end()) return error_reply(404, "unknown session '" + session_id + "'");
  const auto index = parse_int(index_text);
  if (!index) return error_reply(400, "index must be a non-negative integer");
  const TrialSession& s = sit->second;
  if (static_cast<std::size_t>(*index) >= s.order.size())
    return error_reply(404, "index " + index_text + " is past the end of the session");

  const std::string& id = s.order[static_cast<std::size_t>(*index)];
  const auto served = find_problem(id);
  if (!served) return error_reply(404, "unknown problem '" + id + "'");
  const Phase phase = s.phase_of(static_cast<std::size_t>(*index));

  json panels = json::array();
  for (int k = 0; k < kContextPanels + kCandidateCount; ++k)
    panels.push_back("/api/panel/" + id + "/" + std::to_string(k) + ".png");
  return json_reply(200, {{"session_id", s.id},
                          {"index", *index},
                          {"total", s.order.size()},
                          {"phase", to_string(phase)},
                          {"feedback", phase == Phase::Familiarization},
                          {"problem_id", id},
                          {"config", to_string(served->problem->config)},
                          {"config_label", table_label(served->problem->config)},
                          {"answered", s.responses.count(id) > 0},
                          {"panels", panels}});
}

Reply TrialService::panel(const std::string& problem_id, int k) const {
  if (k < 0 || k >= kContextPanels + kCandidateCount) return error_reply(404, "panel index out of range");
  if (auto it = familiarization_pngs_.find(problem_id); it != familiarization_pngs_.end()) {
    const auto& bytes = it->second[static_cast<std::size_t>(k)];
    return {200, "image/png", std::string(bytes.begin(), bytes.end())};
  }
  auto it = by_id_.find(problem_id);
  if (it == by_id_.end()) return error_reply(404, "unknown problem '" + problem_id + "'");
  try {
    const auto bytes = read_file_bytes(panel_path(root_, dataset_.problems[it->second].config, problem_id, k));
    return {200, "image/png", std::string(bytes.begin(), bytes.end())};
  } catch (const IoError& e) {
    return error_reply(500, e.what());
  }
}

Reply TrialService::response(const std::string& body) {
  json req = json::parse(body, nullptr, false);
  if (req.is_discarded() || !req.is_object()) return error_reply(400, "request body must be a JSON object");
  const auto session_id = req.value("session_id", req.value("session", std::string()));
  const auto problem_id = req.value("problem_id", std::string());
  const json choice = req.contains("choice") ? req["choice"] : req.value("chosen", json());
  if (!choice.is_number_integer() || choice.get<int>() < 0 || choice.get<int>() >= kCandidateCount)
    return error_reply(400, "choice must be an integer in 0..7");
  if (!req.contains("latency_ms") || !req["latency_ms"].is_number() || req["latency_ms"].get<double>() < 0)
    return error_reply(400, "latency_ms must be a non-negative number");

  std::lock_guard lock(mutex_);
  auto sit = sessions_.find(session_id);
  if (sit == sessions_.end()) return error_reply(404, "unknown session '" + session_id + "'");
  TrialSession& s = sit->second;
  const auto pos = std::find(s.order.begin(), s.order.end(), problem_id);
  if (pos == s.order.end()) return error_reply(404, "problem '" + problem_id + "' is not part of this session");
  if (s.responses.count(problem_id)) return error_reply(409, "problem '" + problem_id + "' was already answered");

  const auto served = find_problem(problem_id);
  ResponseRecord r;
  r.session_id = s.id;
  r.problem_id = problem_id;
  r.config = served->problem->config;
  r.phase = s.phase_of(static_cast<std::size_t>(pos - s.order.begin()));
  r.chosen = choice.get<int>();
  r.target = served->problem->target;
  r.latency_ms = static_cast<long long>(req["latency_ms"].get<double>());
  r.timestamp = iso_timestamp(clock_());

  json event = record_json(r, true);
  event["event"] = "response";
  append_log(event);
  s.responses.emplace(problem_id, r);
  log_.push_back(r);

  const bool feedback = r.phase == Phase::Familiarization;
  json out{{"recorded", record_json(r, feedback)}, {"phase", to_string(r.phase)}};
  if (feedback) out["correct"] = r.correct();
  return json_reply(201, out);
}

Reply TrialService::summary(const std::string& session_id) const {
  std::lock_guard lock(mutex_);
  auto sit = sessions_.find(session_id);
  if (sit == sessions_.end()) return error_reply(404, "unknown session '" + session_id + "'");
  const TrialSession& s = sit->second;

  struct Tally {
    int answered = 0, correct = 0;
    long long latency = 0;
  };
  std::map<Configuration, Tally> per;
  Tally overall, familiar;
  for (const auto& [id, r] : s.responses) {
    Tally& t = r.phase == Phase::Test ? per[r.config] : familiar;
    for (Tally* x : {&t, r.phase == Phase::Test ? &overall : nullptr}) {
      if (!x) continue;
      ++x->answered;
      x->correct += r.correct();
      x->latency += r.latency_ms;
    }
  }
  auto tally_json = [](const Tally& t) {
    json j{{"answered", t.answered}, {"correct", t.correct}, {"accuracy", nullptr}, {"mean_latency_ms", nullptr}};
    if (t.answered > 0) {
      j["accuracy"] = 100.0 * t.correct / t.answered;
      j["mean_latency_ms"] = static_cast<double>(t.latency) / t.answered;
    }
    return j;
  };

  json configs = json::array();
  for (Configuration c : kAllConfigurations) {
    json j = tally_json(per[c]);
    j["config"] = to_string(c);
    j["label"] = table_label(c);
    configs.push_back(j);
  }
  const bool complete = s.responses.size() == s.order.size();
  json out{{"session_id", s.id},
           {"complete", complete},
           {"answered", s.responses.size()},
           {"total", s.order.size()},
           {"configs", configs},
           {"overall", tally_json(overall)},
           {"familiarization", tally_json(familiar)}};
  if (!complete) out["warning"] = "session incomplete; summary covers answered problems only";
  return json_reply(200, out);
}

std::string csv_header() { return "session_id,problem_id,config,chosen,target,correct,latency_ms,timestamp\n"; }

std::string csv_row(const ResponseRecord& r) {
  std::ostringstream o;
  o << r.session_id << ',' << r.problem_id << ',' << to_string(r.config) << ',' << r.chosen << ',' << r.target
    << ',' << (r.correct() ? 1 : 0) << ',' << r.latency_ms << ',' << r.timestamp << '\n';
  return o.str();
}

Reply TrialService::export_csv(const std::string& phase, const std::string& session_id) const {
  std::optional<Phase> only;
  if (phase == "test") only = Phase::Test;
  else if (phase == "familiarization") only = Phase::Familiarization;
  else if (!phase.empty() && phase != "all") return error_reply(400, "phase must be familiarization, test or all");

  std::lock_guard lock(mutex_);
  if (!session_id.empty() && !sessions_.count(session_id))
    return error_reply(404, "unknown session '" + session_id + "'");
  std::string out = csv_header();
  for (const ResponseRecord& r : log_) {
    if (only && r.phase != *only) continue;
    if (!session_id.empty() && r.session_id != session_id) continue;
    out += csv_row(r);
  }
  return {200, "text/csv", out};
}

std::size_t TrialService::session_count() const {
  std::lock_guard lock(mutex_);
  return sessions_.size();
}

void mount_routes(httplib::Server& server, TrialService& service) {
  auto send = [](httplib::Response& res, const Reply& r) {
    res.status = r.status;
    res.set_content(r.body, r.content_type);
  };

  server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                              {"Access-Control-Allow-Headers", "Content-Type"},
                              {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"}});
  server.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

  server.Post("/api/session", [&service, send](const httplib::Request& req, httplib::Response& res) {
    send(res, service.create_session(req.body));
  });
  server.Get("/api/problem", [&service, send](const httplib::Request& req, httplib::Response& res) {
    send(res, service.problem(req.get_param_value("session"), req.get_param_value("index")));
  });
  server.Get(R"(/api/panel/([^/]+)/(\d+)\.png)", [&service, send](const httplib::Request& req,
                                                                  httplib::Response& res) {
    const auto k = parse_int(req.matches[2].str());
    send(res, service.panel(req.matches[1].str(), k ? *k : -1));
  });
  server.Post("/api/response", [&service, send](const httplib::Request& req, httplib::Response& res) {
    send(res, service.response(req.body));
  });
  server.Get("/api/summary", [&service, send](const httplib::Request& req, httplib::Response& res) {
    send(res, service.summary(req.get_param_value("session")));
  });
  server.Get("/api/export", [&service, send](const httplib::Request& req, httplib::Response& res) {
    const std::string format = req.has_param("format") ? req.get_param_value("format") : "csv";
    if (format != "csv") return send(res, error_reply(400, "only format=csv is supported"));
    send(res, service.export_csv(req.get_param_value("phase"), req.get_param_value("session")));
  });
  server.set_exception_handler([send](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
    try {
      std::rethrow_exception(ep);
    } catch (const std::exception& e) {
      send(res, error_reply(500, e.what()));
    }
  });
}

}  // namespace raven
