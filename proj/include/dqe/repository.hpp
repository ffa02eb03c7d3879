#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dqe/agents.hpp"
#include "dqe/cleanse.hpp"
#include "dqe/quality_model.hpp"

namespace dqe {

// One history line: a measurement plus where it sits in its run.
struct MeasurementRecord {
  Measurement measurement;
  std::string run_id;
  std::uint64_t sequence = 0;

  bool operator==(const MeasurementRecord&) const = default;
};

Json measurement_to_json(const Measurement& m);
Measurement measurement_from_json(const Json& j, const std::string& context);
Json measurement_record_to_json(const MeasurementRecord& record);
MeasurementRecord measurement_record_from_json(const Json& j, const std::string& context);

// File-backed metadata repository. Layout under the root:
//   quality_model.json     the QualityModelDoc
//   measurements.jsonl     one MeasurementRecord per line, append-only
//   cleansing/<run>.jsonl  one CleansingEntry per line
//   declared/*.json        declared-measurement manifests
// Writers take a .lock file (exclusive create); readers never block.
// Every write lands in a temp file first and is renamed into place.
class Repository {
 public:
  // Opens an existing root; throws StorageError when it is missing.
  static Repository open(const std::filesystem::path& root);

  // Creates the layout (idempotent) and opens it.
  static Repository init(const std::filesystem::path& root);

  const std::filesystem::path& root() const { return root_; }

  bool has_model() const;
  void save_model(const QualityModelDoc& model) const;
  QualityModelDoc load_model() const;

  // Appends one run's records. Enforces (run_id, sequence) uniqueness
  // and non-decreasing timestamps within each run.
  void append_measurements(const std::vector<MeasurementRecord>& records) const;

  std::vector<MeasurementRecord> all_measurements() const;

  // Records for the metric with timestamp in [from, to], ascending;
  // open bounds when unset. Unknown metrics yield an empty list.
  std::vector<MeasurementRecord> query_history(const std::string& metric_id,
                                               std::optional<Timestamp> from,
                                               std::optional<Timestamp> to) const;

  // run-<compact timestamp>, suffixed -2, -3, ... on collision with any
  // recorded run or cleansing log.
  std::string next_run_id(Timestamp now) const;

  void write_cleansing_log(const std::string& run_id, const CleansingLog& log) const;
  CleansingLog read_cleansing_log(const std::string& run_id) const;
  std::vector<std::string> cleansing_run_ids() const;

  // Declared measurements from every declared/*.json manifest, checked
  // against the model; newest value per metric wins.
  DeclaredPool declared_pool(const QualityModelDoc& model, Timestamp ingestion_time) const;

  std::filesystem::path model_path() const { return root_ / "quality_model.json"; }
  std::filesystem::path measurements_path() const { return root_ / "measurements.jsonl"; }
  std::filesystem::path cleansing_dir() const { return root_ / "cleansing"; }
  std::filesystem::path declared_dir() const { return root_ / "declared"; }

 private:
  explicit Repository(std::filesystem::path root) : root_(std::move(root)) {}

  std::filesystem::path root_;
};

}  // namespace dqe
