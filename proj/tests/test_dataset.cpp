#include <filesystem>
#include <fstream>

#include <unistd.h>

#include "doctest.h"
#include "raven/dataset.hpp"

using namespace raven;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("raven_test_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(p);
  return p;
}

std::vector<Problem> small_set(int per_config, std::uint64_t seed) {
  return generate_batch(plan_requests(kAllConfigurations, per_config), seed);
}

}  // namespace

TEST_CASE("ids, seeds and folds") {
  CHECK(problem_id(Configuration::Center, 42) == "Center_000042");
  CHECK(problem_id(Configuration::OutInGrid, 0) == "OutInGrid_000000");
  CHECK(problem_seed(1, Configuration::Center, 0) != problem_seed(1, Configuration::Center, 1));
  CHECK(problem_seed(1, Configuration::Center, 0) != problem_seed(1, Configuration::Grid2x2, 0));
  CHECK(problem_seed(1, Configuration::Center, 0) != problem_seed(2, Configuration::Center, 0));
  CHECK(split_of(0) == "train");
  CHECK(split_of(5) == "train");
  CHECK(split_of(6) == "val");
  CHECK(split_of(7) == "val");
  CHECK(split_of(8) == "test");
  CHECK(split_of(9) == "test");
}

TEST_CASE("70 problems: 10 per configuration, folds exactly 60/20/20") {
  const auto problems = small_set(10, 5);
  const fs::path root = scratch("folds");
  const Manifest m = write_dataset(problems, root, 5);
  CHECK(m.problems.size() == 70);
  for (Configuration c : kAllConfigurations) CHECK(m.counts.at(std::string(to_string(c))) == 10);
  for (Configuration c : kAllConfigurations) {
    int train = 0, val = 0, test = 0;
    for (const auto& e : m.problems) {
      if (e.config != c) continue;
      const auto s = split_of(e.fold);
      train += s == "train";
      val += s == "val";
      test += s == "test";
    }
    CHECK(train == 6);
    CHECK(val == 2);
    CHECK(test == 2);
  }
  CHECK(m.avg_rule == doctest::Approx(44.0 / 7.0).epsilon(1e-12));
  CHECK(m.struct_anno == 70 * 16);
  fs::remove_all(root);
}

TEST_CASE("write-then-read returns field-equal problems") {
  const auto problems = small_set(3, 17);
  const fs::path root = scratch("roundtrip");
  write_dataset(problems, root, 17);
  const Dataset ds = read_dataset(root);
  REQUIRE(ds.problems.size() == problems.size());
  for (std::size_t i = 0; i < problems.size(); ++i) {
    CHECK(ds.problems[i] == problems[i]);
    CHECK(ds.problems[i].seed == problems[i].seed);
    CHECK(ds.tree_counts[i] == 16);
  }
  CHECK(ds.manifest.seed == 17);
  const DatasetStats s = compute_stats(ds);
  CHECK(s.trees == 16 * static_cast<long long>(problems.size()));
  CHECK(s.avg_rule() == doctest::Approx(44.0 / 7.0));

  // Every record file has the expected layout on disk.
  for (const auto& p : problems) {
    CHECK(fs::exists(record_path(root, p)));
    for (int k = 0; k < 16; ++k) CHECK(fs::exists(panel_path(root, p.config, p.id, k)));
  }
  fs::remove_all(root);
}

TEST_CASE("record documents carry schema version, 16 trees, annotations and targets") {
  const Problem p = small_set(1, 1)[5];  // OutInCenter
  const auto rec = problem_to_record(p);
  CHECK(rec.at("schema_version") == kRecordSchemaVersion);
  CHECK(rec.at("panels").size() == 16);
  CHECK(rec.at("annotations").size() == 2);
  CHECK(rec.at("annotations")[0].size() == 4);
  CHECK(rec.at("rule_target").size() == 20);
  CHECK(rec.at("struct_target").size() == 19);
  CHECK(rec.at("split") == "train");
  CHECK(record_to_problem(rec) == p);
}

TEST_CASE("corruption is detected") {
  const auto problems = small_set(1, 2);
  const fs::path root = scratch("corrupt");
  write_dataset(problems, root, 2);

  SUBCASE("record bytes changed") {
    const fs::path rp = record_path(root, problems[0]);
    std::string text;
    {
      std::ifstream in(rp);
      text.assign(std::istreambuf_iterator<char>(in), {});
    }
    text[text.find("\"target\": ") + 10] = text[text.find("\"target\": ") + 10] == '0' ? '1' : '0';
    std::ofstream(rp, std::ios::trunc) << text;
    CHECK_THROWS_AS(read_dataset(root), CorruptionError);
  }
  SUBCASE("panel bytes changed") {
    const fs::path pp = panel_path(root, problems[1].config, problems[1].id, 3);
    auto bytes = read_file_bytes(pp);
    bytes[bytes.size() / 2] ^= 0xff;
    std::ofstream(pp, std::ios::binary | std::ios::trunc).write(reinterpret_cast<const char*>(bytes.data()),
                                                                static_cast<std::streamsize>(bytes.size()));
    CHECK_THROWS_AS(read_dataset(root), CorruptionError);
    CHECK_NOTHROW(read_dataset(root, false));
  }
  SUBCASE("record missing") {
    fs::remove(record_path(root, problems[2]));
    CHECK_THROWS_AS(read_dataset(root), IoError);
  }
  SUBCASE("manifest not JSON") {
    std::ofstream(root / "manifest", std::ios::trunc) << "{ nope";
    CHECK_THROWS_AS(read_dataset(root), CorruptionError);
  }
  fs::remove_all(root);
}

TEST_CASE("malformed records are rejected") {
  const Problem p = small_set(1, 3)[0];
  auto rec = problem_to_record(p);
  SUBCASE("wrong tree count") {
    rec["panels"].erase(rec["panels"].begin());
    CHECK_THROWS_AS(record_to_problem(rec), CorruptionError);
  }
  SUBCASE("bad tree") {
    rec["panels"][0] = "Scene Singleton /";
    CHECK_THROWS_AS(record_to_problem(rec), CorruptionError);
  }
  SUBCASE("future schema") {
    rec["schema_version"] = 99;
    CHECK_THROWS_AS(record_to_problem(rec), CorruptionError);
  }
  SUBCASE("Arithmetic on Type") {
    rec["rule_groups"][0]["slots"][1] = {{"attribute", "Type"}, {"rule", "Arithmetic"}, {"sign", "plus"}};
    CHECK_THROWS_AS(record_to_problem(rec), CorruptionError);
  }
}

TEST_CASE("missing dataset directory is an I/O error") {
  CHECK_THROWS_AS(read_dataset(scratch("absent")), IoError);
}

TEST_CASE("two writes of the same problems are byte-identical") {
  const auto problems = small_set(2, 8);
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  write_dataset(problems, a, 8);
  write_dataset(small_set(2, 8), b, 8);
  for (const auto& entry : fs::recursive_directory_iterator(a)) {
    if (!entry.is_regular_file()) continue;
    const fs::path rel = fs::relative(entry.path(), a);
    CHECK(read_file_bytes(entry.path()) == read_file_bytes(b / rel));
  }
  fs::remove_all(a);
  fs::remove_all(b);
}
