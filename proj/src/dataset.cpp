#include "raven/dataset.hpp"

#include <zlib.h>

#include <cstdio>
#include <fstream>
#include <iterator>

#include "raven/annotation.hpp"
#include "raven/errors.hpp"

namespace raven {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json rule_to_json(const RuleSpec& r) {
  json j{{"attribute", to_string(r.target)}, {"rule", to_string(r.type)}};
  switch (r.type) {
    case RuleType::Constant:
      break;
    case RuleType::Progression:
      j["delta"] = r.delta;
      break;
    case RuleType::Arithmetic:
      j["sign"] = r.sign == ArithmeticSign::Plus ? "plus" : "minus";
      break;
    case RuleType::DistributeThree: {
      j["triple"] = r.triple;
      json rows = json::array();
      for (const auto& row : r.assignment) rows.push_back(std::vector<int>(row.begin(), row.end()));
      j["assignment"] = rows;
      break;
    }
  }
  return j;
}

RuleSpec rule_from_json(const json& j) {
  RuleSpec r;
  r.target = parse_attribute(j.at("attribute").get<std::string>());
  r.type = parse_rule_type(j.at("rule").get<std::string>());
  switch (r.type) {
    case RuleType::Constant:
      break;
    case RuleType::Progression:
      r.delta = j.at("delta").get<int>();
      break;
    case RuleType::Arithmetic: {
      const auto sign = j.at("sign").get<std::string>();
      if (sign != "plus" && sign != "minus") throw CorruptionError("unknown arithmetic sign '" + sign + "'");
      r.sign = sign == "plus" ? ArithmeticSign::Plus : ArithmeticSign::Minus;
      break;
    }
    case RuleType::DistributeThree: {
      r.triple = j.at("triple").get<std::array<int, 3>>();
      const auto rows = j.at("assignment").get<std::vector<std::vector<int>>>();
      if (rows.size() != 3) throw CorruptionError("assignment must have 3 rows");
      for (std::size_t i = 0; i < 3; ++i) {
        if (rows[i].size() != 3) throw CorruptionError("assignment rows must have 3 cells");
        for (std::size_t k = 0; k < 3; ++k) r.assignment[i][k] = static_cast<std::uint8_t>(rows[i][k]);
      }
      break;
    }
  }
  return r;
}

void write_bytes(const fs::path& path, const void* data, std::size_t size) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open " + path.string() + " for writing");
  f.write(static_cast<const char*>(data), static_cast<std::streamsize>(size));
  if (!f) throw IoError("failed writing " + path.string());
}

std::string hex32(unsigned long v) {
  char buf[9];
  std::snprintf(buf, sizeof buf, "%08lx", v & 0xffffffffUL);
  return buf;
}

unsigned long crc_update(unsigned long crc, std::span<const std::uint8_t> bytes) {
  return ::crc32(crc, bytes.data(), static_cast<uInt>(bytes.size()));
}

}  // namespace

std::string crc32_hex(std::span<const std::uint8_t> bytes) { return hex32(crc_update(::crc32(0L, Z_NULL, 0), bytes)); }

std::vector<std::uint8_t> read_file_bytes(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

json problem_to_record(const Problem& problem) {
  json groups = json::array();
  json annotations = json::array();
  for (const RuleGroup& g : problem.rule_groups) {
    json slots = json::array();
    for (const RuleSpec& r : g.slots) slots.push_back(rule_to_json(r));
    groups.push_back({{"component", g.component}, {"slots", slots}});
    annotations.push_back(rule_annotations(g));
  }
  json panels = json::array();
  for (const auto& p : problem.context) panels.push_back(serialize_tree(p));
  for (const auto& p : problem.candidates) panels.push_back(serialize_tree(p));

  return json{{"schema_version", kRecordSchemaVersion},
              {"id", problem.id},
              {"config", to_string(problem.config)},
              {"seed", problem.seed},
              {"fold", problem.fold},
              {"split", split_of(problem.fold)},
              {"target", problem.target},
              {"rule_groups", groups},
              {"annotations", annotations},
              {"panels", panels},
              {"rule_target", rule_target_vector(problem)},
              {"struct_target", struct_target_vector(problem)}};
}

Problem record_to_problem(const json& record) {
  try {
    const int version = record.at("schema_version").get<int>();
    if (version != kRecordSchemaVersion)
      throw CorruptionError("unsupported record schema version " + std::to_string(version));
    Problem p;
    p.id = record.at("id").get<std::string>();
    p.config = parse_configuration(record.at("config").get<std::string>());
    p.seed = record.at("seed").get<std::uint64_t>();
    p.fold = record.at("fold").get<int>();
    p.target = record.at("target").get<int>();
    if (p.fold < 0 || p.fold > 9) throw CorruptionError("fold out of range in " + p.id);
    if (p.target < 0 || p.target >= kCandidateCount) throw CorruptionError("target out of range in " + p.id);

    for (const json& g : record.at("rule_groups")) {
      RuleGroup group;
      group.component = g.at("component").get<int>();
      const json& slots = g.at("slots");
      if (slots.size() != 4) throw CorruptionError("rule group must have 4 slots in " + p.id);
      for (std::size_t s = 0; s < 4; ++s) group.slots[s] = rule_from_json(slots[s]);
      validate_rule_group(group);
      p.rule_groups.push_back(group);
    }
    if (static_cast<int>(p.rule_groups.size()) != component_count(p.config))
      throw CorruptionError("rule group count does not match configuration in " + p.id);

    const json& panels = record.at("panels");
    if (panels.size() != static_cast<std::size_t>(kContextPanels + kCandidateCount))
      throw CorruptionError("record " + p.id + " has " + std::to_string(panels.size()) + " trees, expected 16");
    for (std::size_t k = 0; k < panels.size(); ++k) {
      PanelState panel = parse_tree(panels[k].get<std::string>());
      if (panel.config != p.config) throw CorruptionError("panel configuration mismatch in " + p.id);
      if (k < static_cast<std::size_t>(kContextPanels))
        p.context[k] = std::move(panel);
      else
        p.candidates[k - kContextPanels] = std::move(panel);
    }
    return p;
  } catch (const json::exception& e) {
    throw CorruptionError(std::string("malformed record: ") + e.what());
  } catch (const ParseError& e) {
    throw CorruptionError(std::string("malformed record tree: ") + e.what());
  } catch (const DomainError& e) {
    throw CorruptionError(std::string("invalid record: ") + e.what());
  }
}

std::string record_text(const Problem& problem) { return problem_to_record(problem).dump(2) + "\n"; }

json manifest_to_json(const Manifest& m) {
  json configs = json::array();
  for (Configuration c : m.configs) configs.push_back(to_string(c));
  json problems = json::array();
  for (const auto& e : m.problems)
    problems.push_back({{"id", e.id},
                        {"config", to_string(e.config)},
                        {"fold", e.fold},
                        {"record_crc32", e.record_crc32},
                        {"panels_crc32", e.panels_crc32}});
  return json{{"schema_version", m.schema_version},
              {"seed", m.seed},
              {"configs", configs},
              {"counts", m.counts},
              {"folds", {{"train", {0, 1, 2, 3, 4, 5}}, {"val", {6, 7}}, {"test", {8, 9}}}},
              {"stats", {{"avg_rule", m.avg_rule}, {"struct_anno", m.struct_anno}}},
              {"problems", problems}};
}

Manifest manifest_from_json(const json& doc) {
  try {
    Manifest m;
    m.schema_version = doc.at("schema_version").get<int>();
    if (m.schema_version != kRecordSchemaVersion)
      throw CorruptionError("unsupported manifest schema version " + std::to_string(m.schema_version));
    m.seed = doc.at("seed").get<std::uint64_t>();
    for (const auto& c : doc.at("configs")) m.configs.push_back(parse_configuration(c.get<std::string>()));
    m.counts = doc.at("counts").get<std::map<std::string, int>>();
    m.avg_rule = doc.at("stats").at("avg_rule").get<double>();
    m.struct_anno = doc.at("stats").at("struct_anno").get<long long>();
    for (const auto& e : doc.at("problems"))
      m.problems.push_back({e.at("id").get<std::string>(), parse_configuration(e.at("config").get<std::string>()),
                            e.at("fold").get<int>(), e.at("record_crc32").get<std::string>(),
                            e.at("panels_crc32").get<std::string>()});
    return m;
  } catch (const json::exception& e) {
    throw CorruptionError(std::string("malformed manifest: ") + e.what());
  } catch (const DomainError& e) {
    throw CorruptionError(std::string("invalid manifest: ") + e.what());
  }
}

fs::path record_path(const fs::path& root, const Problem& problem) {
  return root / std::string(to_string(problem.config)) / (problem.id + ".record");
}

fs::path panel_path(const fs::path& root, Configuration config, std::string_view id, int k) {
  return root / std::string(to_string(config)) / (std::string(id) + "_" + std::to_string(k) + ".png");
}

Manifest write_dataset(std::span<const Problem> problems, const fs::path& root, std::uint64_t seed) {
  Manifest m;
  m.seed = seed;
  std::error_code ec;
  fs::create_directories(root, ec);
  if (ec) throw IoError("cannot create " + root.string() + ": " + ec.message());
  for (const Problem& p : problems) {
    const std::string name(to_string(p.config));
    if (m.counts[name]++ == 0) {
      m.configs.push_back(p.config);
      fs::create_directories(root / name, ec);
      if (ec) throw IoError("cannot create " + (root / name).string() + ": " + ec.message());
    }
  }

  const auto pngs = render_batch(problems);
  m.problems.resize(problems.size());
  long long rules = 0;
  for (std::size_t i = 0; i < problems.size(); ++i) {
    const Problem& p = problems[i];
    const std::string text = record_text(p);
    write_bytes(record_path(root, p), text.data(), text.size());
    unsigned long crc = ::crc32(0L, Z_NULL, 0);
    for (std::size_t k = 0; k < pngs[i].size(); ++k) {
      write_bytes(panel_path(root, p.config, p.id, static_cast<int>(k)), pngs[i][k].data(), pngs[i][k].size());
      crc = crc_update(crc, pngs[i][k]);
    }
    const auto* bytes = reinterpret_cast<const std::uint8_t*>(text.data());
    m.problems[i] = {p.id, p.config, p.fold, crc32_hex({bytes, text.size()}), hex32(crc)};
    rules += p.rule_count();
  }
  m.avg_rule = problems.empty() ? 0.0 : static_cast<double>(rules) / static_cast<double>(problems.size());
  m.struct_anno = static_cast<long long>(problems.size()) * (kContextPanels + kCandidateCount);

  const std::string doc = manifest_to_json(m).dump(2) + "\n";
  write_bytes(root / std::string(kManifestName), doc.data(), doc.size());
  return m;
}

Dataset read_dataset(const fs::path& root, bool check_panels) {
  const auto manifest_bytes = read_file_bytes(root / std::string(kManifestName));
  json doc;
  try {
    doc = json::parse(manifest_bytes.begin(), manifest_bytes.end());
  } catch (const json::exception& e) {
    throw CorruptionError(std::string("manifest is not valid JSON: ") + e.what());
  }
  Dataset ds;
  ds.manifest = manifest_from_json(doc);
  ds.problems.reserve(ds.manifest.problems.size());
  for (const ManifestEntry& e : ds.manifest.problems) {
    const fs::path rp = root / std::string(to_string(e.config)) / (e.id + ".record");
    const auto bytes = read_file_bytes(rp);
    if (crc32_hex(bytes) != e.record_crc32) throw CorruptionError("checksum mismatch for " + rp.string());
    if (check_panels) {
      unsigned long crc = ::crc32(0L, Z_NULL, 0);
      for (int k = 0; k < kContextPanels + kCandidateCount; ++k)
        crc = crc_update(crc, read_file_bytes(panel_path(root, e.config, e.id, k)));
      if (hex32(crc) != e.panels_crc32) throw CorruptionError("panel checksum mismatch for " + e.id);
    }
    json record;
    try {
      record = json::parse(bytes.begin(), bytes.end());
    } catch (const json::exception& ex) {
      throw CorruptionError("record " + rp.string() + " is not valid JSON: " + ex.what());
    }
    Problem p = record_to_problem(record);
    if (p.id != e.id || p.config != e.config || p.fold != e.fold)
      throw CorruptionError("record " + e.id + " disagrees with the manifest");
    ds.tree_counts.push_back(static_cast<int>(record.at("panels").size()));
    ds.problems.push_back(std::move(p));
  }
  return ds;
}

DatasetStats compute_stats(const Dataset& dataset) {
  DatasetStats s;
  s.problems = dataset.problems.size();
  for (const Problem& p : dataset.problems) {
    ++s.per_config[std::string(to_string(p.config))];
    for (const RuleGroup& g : p.rule_groups) s.rules += static_cast<long long>(g.slots.size());
  }
  for (int t : dataset.tree_counts) s.trees += t;
  return s;
}

}  // namespace raven
