#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "raven/batch.hpp"
#include "raven/dataset.hpp"

namespace httplib {
class Server;
}

namespace raven {

enum class Phase { Familiarization, Test };
std::string_view to_string(Phase p);

struct ServiceOptions {
  Configuration familiarization_config = Configuration::Center;
  int familiarization_count = 10;
  int test_per_config = 2;
  std::uint64_t seed = 0;
  /// Append-only JSON-lines log; replayed on startup. Empty disables persistence.
  std::filesystem::path log_path;
};

struct ResponseRecord {
  std::string session_id;
  std::string problem_id;
  Configuration config = Configuration::Center;
  Phase phase = Phase::Test;
  int chosen = 0;
  int target = 0;
  long long latency_ms = 0;
  std::string timestamp;  // ISO-8601 UTC

  bool correct() const { return chosen == target; }
};

struct TrialSession {
  std::string id;
  std::vector<std::string> order;  // familiarization ids first, then shuffled test ids
  int familiarization_count = 0;
  std::map<std::string, ResponseRecord> responses;  // by problem id

  Phase phase_of(std::size_t index) const {
    return index < static_cast<std::size_t>(familiarization_count) ? Phase::Familiarization : Phase::Test;
  }
};

/// HTTP-agnostic reply.
struct Reply {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
};

/// Trial-serving state: read-only problems plus sessions and their responses.
/// All public methods are safe to call concurrently.
class TrialService {
 public:
  using Clock = std::function<std::chrono::system_clock::time_point()>;

  TrialService(Dataset dataset, std::filesystem::path dataset_root, ServiceOptions options,
               Clock clock = std::chrono::system_clock::now);

  Reply create_session(const std::string& body);
  Reply problem(const std::string& session_id, const std::string& index);
  Reply panel(const std::string& problem_id, int k) const;
  Reply response(const std::string& body);
  Reply summary(const std::string& session_id) const;
  /// `phase` is "", "familiarization" or "test"; `session_id` may be empty for all sessions.
  Reply export_csv(const std::string& phase, const std::string& session_id) const;

  std::size_t session_count() const;
  const std::vector<std::string>& familiarization_ids() const { return familiarization_ids_; }

 private:
  struct Served {
    const Problem* problem;
    Phase phase;
  };

  std::optional<Served> find_problem(const std::string& id) const;
  std::vector<std::string> draw_test_ids(Rng& rng, int per_config) const;
  void append_log(const nlohmann::json& event);
  void replay_log();

  Dataset dataset_;
  std::filesystem::path root_;
  ServiceOptions options_;
  Clock clock_;

  std::vector<Problem> familiarization_;
  std::vector<std::string> familiarization_ids_;
  std::map<std::string, std::array<std::vector<std::uint8_t>, 16>> familiarization_pngs_;
  std::map<std::string, std::size_t> by_id_;  // dataset problems
  std::map<Configuration, std::vector<std::size_t>> test_pool_;

  mutable std::mutex mutex_;
  std::map<std::string, TrialSession> sessions_;
  std::vector<ResponseRecord> log_;  // every response, arrival order
  std::uint64_t session_counter_ = 0;
  std::ofstream log_file_;
};

std::string csv_header();
std::string csv_row(const ResponseRecord& r);

/// Registers the /api routes on `server`.
void mount_routes(httplib::Server& server, TrialService& service);

}  // namespace raven
