#include "doctest.h"

#include <filesystem>
#include <fstream>

#include "dqe/error.hpp"
#include "dqe/repository.hpp"
#include "fixtures.hpp"
#include "tmpdir.hpp"

using namespace dqe;
using namespace dqe::testfix;
using dqe::testgen::TempDir;
namespace fs = std::filesystem;

namespace {

bool message_contains(const Error& e, const std::string& fragment) {
  return std::string(e.what()).find(fragment) != std::string::npos;
}

Timestamp ts(const char* text) { return *Timestamp::parse(text); }

QualityModelDoc small_model() {
  QualityModelDoc model;
  model.stakeholders = {{"s1", "QA", StakeholderRole::DwAdministrator, {}}};
  model.dimensions = {{"d1", "trust", ""}};
  MetricSpec spec;
  spec.id = "m_complete";
  spec.parameter = "Completeness";
  spec.object = ObjectRef::for_table("customers");
  spec.agent = AutomatedAgent{AgentKind::Completeness};
  spec.unit = Unit::Percent;
  spec.expected = {Rational{}, Rational::from_int(40)};
  model.metrics = {spec};
  model.queries = {{"q1", {"m_complete"}}};
  model.goals = {{"g1", "s1", "", "d1", ObjectRef::warehouse(), {"q1"}}};
  return model;
}

Measurement meas(const char* metric, std::int64_t value, const char* when) {
  Measurement m;
  m.metric_id = metric;
  m.object = ObjectRef::for_table("customers");
  m.value = Rational::from_int(value);
  m.unit = Unit::Percent;
  m.timestamp = ts(when);
  m.agent_id = "completeness";
  m.detail = MeasurementDetail{value, 100};
  return m;
}

MeasurementRecord rec(const char* run, std::uint64_t seq, Measurement m) {
  return MeasurementRecord{std::move(m), run, seq};
}

}  // namespace

TEST_CASE("init lays out the repository and is idempotent") {
  TempDir dir("repo");
  fs::path root = dir / "repo";

  Repository repo = Repository::init(root);
  CHECK(fs::exists(repo.model_path()));
  CHECK(fs::exists(repo.measurements_path()));
  CHECK(fs::is_directory(repo.cleansing_dir()));
  CHECK(fs::is_directory(repo.declared_dir()));
  CHECK(repo.load_model() == QualityModelDoc{});

  repo.save_model(small_model());
  repo.append_measurements({rec("run-a", 0, meas("m_complete", 10, "2026-02-01T00:00:00Z"))});

  // Re-init never clobbers existing content.
  Repository again = Repository::init(root);
  CHECK(again.load_model() == small_model());
  CHECK(again.all_measurements().size() == 1);
}

TEST_CASE("open requires an existing root") {
  TempDir dir("repo");
  try {
    Repository::open(dir / "absent");
    FAIL("expected StorageError");
  } catch (const StorageError& e) {
    CHECK(message_contains(e, "does not exist"));
  }
  Repository::init(dir / "present");
  CHECK(Repository::open(dir / "present").root() == dir / "present");
}

TEST_CASE("models persist exactly and invalid ones never land") {
  TempDir dir("repo");
  Repository repo = Repository::init(dir / "repo");

  QualityModelDoc model = small_model();
  model.metrics[0].expected.hi = Rational::from_counts(100, 3);
  repo.save_model(model);
  CHECK(repo.load_model() == model);

  QualityModelDoc broken = small_model();
  broken.goals[0].dimension_id = "ghost";
  try {
    repo.save_model(broken);
    FAIL("expected InputError");
  } catch (const InputError& e) {
    CHECK(message_contains(e, "model does not validate"));
  }
  CHECK(repo.load_model() == model);  // previous content intact

  // A corrupted file surfaces as a parse error on load.
  std::ofstream(repo.model_path()) << "{ nope";
  CHECK_THROWS_AS(repo.load_model(), ParseError);
}

TEST_CASE("a missing model file is a storage error") {
  TempDir dir("repo");
  fs::create_directories(dir / "bare");
  Repository repo = Repository::open(dir / "bare");
  CHECK_FALSE(repo.has_model());
  try {
    repo.load_model();
    FAIL("expected StorageError");
  } catch (const StorageError& e) {
    CHECK(message_contains(e, "no quality model at"));
  }
}

TEST_CASE("measurement records round-trip through JSON") {
  MeasurementRecord record = rec("run-x", 3, meas("m", 25, "2026-02-01T08:00:00Z"));
  Json j = measurement_record_to_json(record);
  CHECK(measurement_record_from_json(j, "test") == record);

  record.measurement.detail.reset();
  record.measurement.value = Rational::from_counts(1, 3);
  j = measurement_record_to_json(record);
  CHECK(j["detail"].is_null());
  CHECK(j["value"] == "1/3");
  CHECK(measurement_record_from_json(j, "test") == record);

  j["unit"] = "furlongs";
  CHECK_THROWS_AS(measurement_record_from_json(j, "test"), ParseError);
}

TEST_CASE("appends enforce sequence uniqueness atomically") {
  TempDir dir("repo");
  Repository repo = Repository::init(dir / "repo");

  repo.append_measurements({rec("run-a", 0, meas("m", 1, "2026-02-01T00:00:00Z")),
                            rec("run-a", 1, meas("m", 2, "2026-02-01T00:00:01Z"))});
  CHECK(repo.all_measurements().size() == 2);

  try {
    repo.append_measurements({rec("run-b", 0, meas("m", 3, "2026-02-01T01:00:00Z")),
                              rec("run-a", 1, meas("m", 4, "2026-02-01T01:00:00Z"))});
    FAIL("expected InputError");
  } catch (const InputError& e) {
    CHECK(message_contains(e, "(run-a, 1) already recorded"));
  }
  // The whole batch is rejected, including its valid first record.
  CHECK(repo.all_measurements().size() == 2);

  // A duplicate within one batch is caught too.
  CHECK_THROWS_AS(
      repo.append_measurements({rec("run-c", 0, meas("m", 5, "2026-02-01T02:00:00Z")),
                                rec("run-c", 0, meas("m", 6, "2026-02-01T02:00:00Z"))}),
      InputError);
}

TEST_CASE("timestamps within a run must not decrease") {
  TempDir dir("repo");
  Repository repo = Repository::init(dir / "repo");
  repo.append_measurements({rec("run-a", 0, meas("m", 1, "2026-02-01T10:00:00Z"))});

  try {
    repo.append_measurements({rec("run-a", 1, meas("m", 2, "2026-02-01T09:00:00Z"))});
    FAIL("expected InputError");
  } catch (const InputError& e) {
    CHECK(message_contains(e, "run 'run-a': timestamps must not decrease"));
  }

  // Equal timestamps are fine; other runs are independent.
  repo.append_measurements({rec("run-a", 1, meas("m", 2, "2026-02-01T10:00:00Z"))});
  repo.append_measurements({rec("run-b", 0, meas("m", 3, "2026-02-01T08:00:00Z"))});
  CHECK(repo.all_measurements().size() == 3);
}

TEST_CASE("history is filtered inclusively and sorted ascending") {
  TempDir dir("repo");
  Repository repo = Repository::init(dir / "repo");
  repo.append_measurements({rec("run-a", 0, meas("m", 1, "2026-02-03T00:00:00Z")),
                            rec("run-a", 1, meas("other", 9, "2026-02-03T00:00:00Z"))});
  repo.append_measurements({rec("run-b", 0, meas("m", 2, "2026-02-01T00:00:00Z"))});
  repo.append_measurements({rec("run-c", 0, meas("m", 3, "2026-02-05T00:00:00Z"))});

  auto all = repo.query_history("m", std::nullopt, std::nullopt);
  REQUIRE(all.size() == 3);
  CHECK(all[0].measurement.value == Rational::from_int(2));
  CHECK(all[1].measurement.value == Rational::from_int(1));
  CHECK(all[2].measurement.value == Rational::from_int(3));

  // Bounds include their endpoints.
  auto bounded = repo.query_history("m", ts("2026-02-01T00:00:00Z"),
                                    ts("2026-02-03T00:00:00Z"));
  REQUIRE(bounded.size() == 2);
  CHECK(bounded[0].measurement.value == Rational::from_int(2));
  CHECK(bounded[1].measurement.value == Rational::from_int(1));

  CHECK(repo.query_history("m", ts("2026-02-04T00:00:00Z"), std::nullopt).size() == 1);
  CHECK(repo.query_history("m", std::nullopt, ts("2026-02-02T00:00:00Z")).size() == 1);
  CHECK(repo.query_history("ghost", std::nullopt, std::nullopt).empty());
}

TEST_CASE("run ids derive from the clock and dodge collisions") {
  TempDir dir("repo");
  Repository repo = Repository::init(dir / "repo");
  Timestamp now = ts("2026-02-01T00:05:00Z");

  CHECK(repo.next_run_id(now) == "run-20260201T000500Z");

  repo.append_measurements(
      {rec("run-20260201T000500Z", 0, meas("m", 1, "2026-02-01T00:05:00Z"))});
  CHECK(repo.next_run_id(now) == "run-20260201T000500Z-2");

  // Cleansing logs occupy run ids as well.
  repo.write_cleansing_log("run-20260201T000500Z-2", CleansingLog{});
  CHECK(repo.next_run_id(now) == "run-20260201T000500Z-3");
}

TEST_CASE("a held lock turns writers away and readers keep working") {
  TempDir dir("repo");
  Repository repo = Repository::init(dir / "repo");
  repo.save_model(small_model());

  std::ofstream(repo.root() / ".lock") << "12345\n";
  try {
    repo.save_model(small_model());
    FAIL("expected StorageError");
  } catch (const StorageError& e) {
    CHECK(message_contains(e, "locked by another writer"));
  }
  CHECK_THROWS_AS(
      repo.append_measurements({rec("r", 0, meas("m", 1, "2026-02-01T00:00:00Z"))}),
      StorageError);
  CHECK_THROWS_AS(repo.write_cleansing_log("r", CleansingLog{}), StorageError);

  CHECK(repo.load_model() == small_model());  // readers never block

  fs::remove(repo.root() / ".lock");
  repo.save_model(small_model());  // and the write goes through afterwards
}

TEST_CASE("cleansing logs round-trip per run") {
  TempDir dir("repo");
  Repository repo = Repository::init(dir / "repo");

  CleansingEntry entry;
  entry.action = CleanseAction::FilterRow;
  entry.table = "orders";
  entry.row_index = 2;
  entry.reason = "filtered";
  entry.timestamp = ts("2026-02-01T00:00:00Z");
  CleansingLog log{{entry}};

  repo.write_cleansing_log("run-x", log);
  CHECK(repo.read_cleansing_log("run-x") == log);
  CHECK(repo.cleansing_run_ids() == std::vector<std::string>{"run-x"});

  repo.write_cleansing_log("run-a", CleansingLog{});
  CHECK(repo.cleansing_run_ids() == std::vector<std::string>{"run-a", "run-x"});

  CHECK_THROWS_AS(repo.read_cleansing_log("ghost"), StorageError);
}

TEST_CASE("declared manifests feed the pool, newest value per metric") {
  TempDir dir("repo");
  Repository repo = Repository::init(dir / "repo");

  QualityModelDoc model = small_model();
  MetricSpec hours;
  hours.id = "m_hours";
  hours.parameter = "Maintainability";
  hours.object = ObjectRef::warehouse();
  hours.agent = DeclaredAgent{"ops review"};
  hours.unit = Unit::ManHours;
  hours.expected = {Rational{}, Rational::from_int(100)};
  model.metrics.push_back(hours);
  model.queries[0].metric_ids.push_back("m_hours");

  std::ofstream(repo.declared_dir() / "a.json")
      << R"([{"metric_id":"m_hours","value":5,"unit":"man_hours","timestamp":"2026-01-10T00:00:00Z"}])";
  std::ofstream(repo.declared_dir() / "b.json")
      << R"([{"metric_id":"m_hours","value":8,"unit":"man_hours","timestamp":"2026-01-20T00:00:00Z"}])";

  DeclaredPool pool = repo.declared_pool(model, ts("2026-02-01T00:00:00Z"));
  REQUIRE(pool.latest("m_hours") != nullptr);
  CHECK(pool.latest("m_hours")->value == Rational::from_int(8));
  CHECK(pool.latest("m_hours")->agent_id == "ops review");

  // A bad manifest is reported with its file name.
  std::ofstream(repo.declared_dir() / "c.json")
      << R"([{"metric_id":"m_hours","value":-1,"unit":"man_hours"}])";
  try {
    repo.declared_pool(model, ts("2026-02-01T00:00:00Z"));
    FAIL("expected InputError");
  } catch (const InputError& e) {
    CHECK(message_contains(e, "c.json"));
    CHECK(message_contains(e, "must not be negative"));
  }
}
