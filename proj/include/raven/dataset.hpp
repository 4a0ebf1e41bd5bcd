#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "raven/batch.hpp"
#include "raven/forge.hpp"

namespace raven {

inline constexpr int kRecordSchemaVersion = 1;
inline constexpr std::string_view kManifestName = "manifest";

/// Record document for one problem: trees, rule groups, targets, fold and seed.
nlohmann::json problem_to_record(const Problem& problem);
/// Throws ParseError on a malformed record.
Problem record_to_problem(const nlohmann::json& record);

/// Bytes exactly as written to `<id>.record`.
std::string record_text(const Problem& problem);

struct ManifestEntry {
  std::string id;
  Configuration config = Configuration::Center;
  int fold = 0;
  std::string record_crc32;  // hex of the record file bytes
  std::string panels_crc32;  // running crc over the 16 PNG files in panel order
};

struct Manifest {
  int schema_version = kRecordSchemaVersion;
  std::uint64_t seed = 0;
  std::vector<Configuration> configs;
  std::map<std::string, int> counts;  // per configuration name
  std::vector<ManifestEntry> problems;
  double avg_rule = 0;
  long long struct_anno = 0;
};

nlohmann::json manifest_to_json(const Manifest& manifest);
Manifest manifest_from_json(const nlohmann::json& doc);

std::filesystem::path record_path(const std::filesystem::path& root, const Problem& problem);
std::filesystem::path panel_path(const std::filesystem::path& root, Configuration config, std::string_view id, int k);

std::string crc32_hex(std::span<const std::uint8_t> bytes);

/// Writes records and PNGs (in parallel), then the manifest. Throws IoError.
Manifest write_dataset(std::span<const Problem> problems, const std::filesystem::path& root,
                       std::uint64_t seed = 0);

struct Dataset {
  Manifest manifest;
  std::vector<Problem> problems;  // manifest order
  std::vector<int> tree_counts;   // serialized trees found in each record
};

/// Throws IoError on missing files and CorruptionError on checksum mismatch.
/// `check_panels` also verifies the PNG checksums.
Dataset read_dataset(const std::filesystem::path& root, bool check_panels = true);

struct DatasetStats {
  std::size_t problems = 0;
  std::map<std::string, int> per_config;
  long long rules = 0;
  long long trees = 0;
  double avg_rule() const { return problems ? static_cast<double>(rules) / static_cast<double>(problems) : 0.0; }
};

/// Rules come from the rule groups, trees from the records as read.
DatasetStats compute_stats(const Dataset& dataset);

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);

}  // namespace raven
