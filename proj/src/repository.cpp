#include "dqe/repository.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>

#include "dqe/error.hpp"

namespace dqe {

namespace fs = std::filesystem;

Json measurement_to_json(const Measurement& m) {
  Json j;
  j["metric_id"] = m.metric_id;
  j["object_ref"] = object_ref_to_json(m.object);
  j["value"] = rational_to_json(m.value);
  j["unit"] = unit_name(m.unit);
  j["timestamp"] = m.timestamp.to_string();
  j["agent"] = m.agent_id;
  j["detail"] = m.detail ? Json{{"numerator", m.detail->numerator},
                                {"denominator", m.detail->denominator}}
                         : Json(nullptr);
  return j;
}

Measurement measurement_from_json(const Json& j, const std::string& context) {
  require_object(j, context);
  reject_unknown_keys(
      j, {"metric_id", "object_ref", "value", "unit", "timestamp", "agent", "detail"},
      context);
  Measurement m;
  m.metric_id = get_string(j, "metric_id", context);
  m.object = object_ref_from_json(require_key(j, "object_ref", context), context);
  m.value = rational_from_json(require_key(j, "value", context), context);
  auto unit = unit_from_name(get_string(j, "unit", context));
  if (!unit) throw ParseError(context + ": unknown unit");
  m.unit = *unit;
  auto ts = Timestamp::parse(get_string(j, "timestamp", context));
  if (!ts) throw ParseError(context + ": bad timestamp");
  m.timestamp = *ts;
  m.agent_id = get_string(j, "agent", context);
  const Json& detail = require_key(j, "detail", context);
  if (!detail.is_null()) {
    require_object(detail, context);
    reject_unknown_keys(detail, {"numerator", "denominator"}, context);
    MeasurementDetail d;
    d.numerator = require_key(detail, "numerator", context).get<std::int64_t>();
    d.denominator = require_key(detail, "denominator", context).get<std::int64_t>();
    m.detail = d;
  }
  return m;
}

Json measurement_record_to_json(const MeasurementRecord& record) {
  Json j = measurement_to_json(record.measurement);
  j["run_id"] = record.run_id;
  j["seq"] = record.sequence;
  return j;
}

MeasurementRecord measurement_record_from_json(const Json& j, const std::string& context) {
  require_object(j, context);
  Json inner = j;
  MeasurementRecord record;
  record.run_id = get_string(j, "run_id", context);
  record.sequence = get_uint(j, "seq", context);
  inner.erase("run_id");
  inner.erase("seq");
  record.measurement = measurement_from_json(inner, context);
  return record;
}

namespace {

// Exclusive-create lock file; the holder's pid goes inside for the
// benefit of whoever finds a stale one.
class WriterLock {
 public:
  explicit WriterLock(const fs::path& root) : path_(root / ".lock") {
    int fd = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
    if (fd < 0) {
      if (errno == EEXIST) {
        throw StorageError("repository '" + root.string() +
                           "' is locked by another writer (" + path_.string() + ")");
      }
      throw StorageError("cannot create lock file '" + path_.string() +
                         "': " + std::strerror(errno));
    }
    std::string pid = std::to_string(::getpid()) + "\n";
    ssize_t written = ::write(fd, pid.data(), pid.size());
    (void)written;
    ::close(fd);
  }

  ~WriterLock() {
    std::error_code ec;
    fs::remove(path_, ec);
  }

  WriterLock(const WriterLock&) = delete;
  WriterLock& operator=(const WriterLock&) = delete;

 private:
  fs::path path_;
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw StorageError("cannot read '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// Temp-file-then-rename so readers only ever see complete documents.
void write_file_atomic(const fs::path& path, const std::string& content) {
  fs::path temp = path;
  temp += ".tmp";
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) throw StorageError("cannot write '" + temp.string() + "'");
    out << content;
    out.flush();
    if (!out) throw StorageError("write failed for '" + temp.string() + "'");
  }
  std::error_code ec;
  fs::rename(temp, path, ec);
  if (ec) {
    throw StorageError("cannot replace '" + path.string() + "': " + ec.message());
  }
}

Json parse_json_file(const fs::path& path) {
  std::string text = read_file(path);
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(path.filename().string() + ": " + e.what());
  }
}

std::vector<Json> parse_jsonl(const fs::path& path) {
  std::vector<Json> out;
  if (!fs::exists(path)) return out;
  std::istringstream in(read_file(path));
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    try {
      out.push_back(Json::parse(line));
    } catch (const Json::parse_error& e) {
      throw ParseError(path.filename().string() + " line " +
                       std::to_string(line_number) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace

Repository Repository::open(const fs::path& root) {
  if (!fs::is_directory(root)) {
    throw StorageError("repository root '" + root.string() + "' does not exist");
  }
  return Repository(root);
}

Repository Repository::init(const fs::path& root) {
  std::error_code ec;
  fs::create_directories(root / "cleansing", ec);
  if (ec) throw StorageError("cannot create '" + root.string() + "': " + ec.message());
  fs::create_directories(root / "declared", ec);
  if (ec) throw StorageError("cannot create '" + root.string() + "': " + ec.message());
  Repository repo(root);
  if (!fs::exists(repo.model_path())) {
    repo.save_model(QualityModelDoc{});
  }
  if (!fs::exists(repo.measurements_path())) {
    write_file_atomic(repo.measurements_path(), "");
  }
  return repo;
}

bool Repository::has_model() const { return fs::exists(model_path()); }

void Repository::save_model(const QualityModelDoc& model) const {
  auto defects = validate_model(model, nullptr);
  if (!defects.empty()) {
    throw InputError("model does not validate: " + defects.front());
  }
  WriterLock lock(root_);
  write_file_atomic(model_path(), model_to_json(model).dump(2) + "\n");
}

QualityModelDoc Repository::load_model() const {
  if (!fs::exists(model_path())) {
    throw StorageError("no quality model at '" + model_path().string() + "'");
  }
  QualityModelDoc model = model_from_json(parse_json_file(model_path()));
  auto defects = validate_model(model, nullptr);
  if (!defects.empty()) {
    throw InputError("stored model does not validate: " + defects.front());
  }
  return model;
}

void Repository::append_measurements(const std::vector<MeasurementRecord>& records) const {
  if (records.empty()) return;
  WriterLock lock(root_);
  auto existing = all_measurements();

  std::set<std::pair<std::string, std::uint64_t>> seen;
  std::map<std::string, std::int64_t> last_ts;
  for (const auto& r : existing) {
    seen.emplace(r.run_id, r.sequence);
    auto it = last_ts.find(r.run_id);
    if (it == last_ts.end() || it->second < r.measurement.timestamp.seconds) {
      last_ts[r.run_id] = r.measurement.timestamp.seconds;
    }
  }
  for (const auto& r : records) {
    if (!seen.emplace(r.run_id, r.sequence).second) {
      throw InputError("measurement (" + r.run_id + ", " + std::to_string(r.sequence) +
                       ") already recorded");
    }
    auto it = last_ts.find(r.run_id);
    if (it != last_ts.end() && r.measurement.timestamp.seconds < it->second) {
      throw InputError("run '" + r.run_id + "': timestamps must not decrease");
    }
    last_ts[r.run_id] = r.measurement.timestamp.seconds;
  }

  std::string content =
      fs::exists(measurements_path()) ? read_file(measurements_path()) : "";
  for (const auto& r : records) {
    content += measurement_record_to_json(r).dump();
    content += '\n';
  }
  write_file_atomic(measurements_path(), content);
}

std::vector<MeasurementRecord> Repository::all_measurements() const {
  std::vector<MeasurementRecord> out;
  if (!fs::exists(measurements_path())) return out;
  auto lines = parse_jsonl(measurements_path());
  for (std::size_t i = 0; i < lines.size(); ++i) {
    out.push_back(measurement_record_from_json(
        lines[i], "measurements.jsonl line " + std::to_string(i + 1)));
  }
  return out;
}

std::vector<MeasurementRecord> Repository::query_history(
    const std::string& metric_id, std::optional<Timestamp> from,
    std::optional<Timestamp> to) const {
  std::vector<MeasurementRecord> out;
  for (auto& r : all_measurements()) {
    if (r.measurement.metric_id != metric_id) continue;
    if (from && r.measurement.timestamp.seconds < from->seconds) continue;
    if (to && r.measurement.timestamp.seconds > to->seconds) continue;
    out.push_back(std::move(r));
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const MeasurementRecord& a, const MeasurementRecord& b) {
                     return a.measurement.timestamp.seconds < b.measurement.timestamp.seconds;
                   });
  return out;
}

std::string Repository::next_run_id(Timestamp now) const {
  std::string stamp = now.to_string();
  std::string compact;
  for (char c : stamp) {
    if (c != '-' && c != ':') compact += c;
  }
  std::set<std::string> taken;
  for (const auto& r : all_measurements()) taken.insert(r.run_id);
  for (const auto& id : cleansing_run_ids()) taken.insert(id);
  std::string base = "run-" + compact;
  std::string candidate = base;
  for (int n = 2; taken.count(candidate); ++n) {
    candidate = base + "-" + std::to_string(n);
  }
  return candidate;
}

void Repository::write_cleansing_log(const std::string& run_id,
                                     const CleansingLog& log) const {
  WriterLock lock(root_);
  std::error_code ec;
  fs::create_directories(cleansing_dir(), ec);
  std::string content;
  for (const auto& entry : log.entries) {
    content += cleansing_entry_to_json(entry).dump();
    content += '\n';
  }
  write_file_atomic(cleansing_dir() / (run_id + ".jsonl"), content);
}

CleansingLog Repository::read_cleansing_log(const std::string& run_id) const {
  fs::path path = cleansing_dir() / (run_id + ".jsonl");
  if (!fs::exists(path)) {
    throw StorageError("no cleansing log '" + path.string() + "'");
  }
  CleansingLog log;
  for (const auto& line : parse_jsonl(path)) {
    log.entries.push_back(cleansing_entry_from_json(line));
  }
  return log;
}

std::vector<std::string> Repository::cleansing_run_ids() const {
  std::vector<std::string> ids;
  if (!fs::is_directory(cleansing_dir())) return ids;
  for (const auto& entry : fs::directory_iterator(cleansing_dir())) {
    if (entry.path().extension() == ".jsonl") {
      ids.push_back(entry.path().stem().string());
    }
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

DeclaredPool Repository::declared_pool(const QualityModelDoc& model,
                                       Timestamp ingestion_time) const {
  DeclaredPool pool;
  if (!fs::is_directory(declared_dir())) return pool;
  std::vector<fs::path> manifests;
  for (const auto& entry : fs::directory_iterator(declared_dir())) {
    if (entry.path().extension() == ".json") manifests.push_back(entry.path());
  }
  std::sort(manifests.begin(), manifests.end());
  for (const auto& path : manifests) {
    Json manifest = parse_json_file(path);
    try {
      for (auto& m : ingest_declared(manifest, model, ingestion_time)) {
        pool.add(std::move(m));
      }
    } catch (const Error& e) {
      throw InputError(path.filename().string() + ": " + e.what());
    }
  }
  return pool;
}

}  // namespace dqe
