#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dqe/quality_model.hpp"
#include "dqe/tabular.hpp"
#include "dqe/value.hpp"

namespace dqe {

// Counts behind an actual value, kept so reports can show the fraction
// and tests can audit the arithmetic.
struct MeasurementDetail {
  std::int64_t numerator = 0;
  std::int64_t denominator = 0;

  bool operator==(const MeasurementDetail&) const = default;
};

// One actual value of one metric on one object at one instant.
struct Measurement {
  std::string metric_id;
  ObjectRef object;
  Rational value;
  Unit unit = Unit::Count;
  Timestamp timestamp;
  std::string agent_id;  // automated agent kind, or declared source label
  std::optional<MeasurementDetail> detail;

  bool operator==(const Measurement&) const = default;
};

// What makes a record "defective" for the defect ratio.
struct IncompleteRecordPredicate {
  bool operator==(const IncompleteRecordPredicate&) const = default;
};

struct ViolationPredicate {
  std::vector<std::string> constraint_ids;

  bool operator==(const ViolationPredicate&) const = default;
};

using DefectPredicate = std::variant<IncompleteRecordPredicate, ViolationPredicate>;

struct DefectPredicateSet {
  std::vector<DefectPredicate> predicates;

  // Incomplete records plus violations of every constraint on the table.
  static DefectPredicateSet defaults(const Warehouse& warehouse,
                                     const std::string& table);

  bool operator==(const DefectPredicateSet&) const = default;
};

// Percentage of rows with a NULL in any required column; 0 when the
// table is empty.
Measurement measure_completeness(const Dataset& ds, const TableSchema& schema);

// NULL cells sitting in nullable = false columns, counted per cell.
Measurement measure_accessibility(const Dataset& ds, const TableSchema& schema);

// Distinct (table, row) records failing at least one of the constraints.
Measurement measure_consistency(const Warehouse& warehouse,
                                const std::vector<std::string>& constraint_ids);

struct AccuracyResult {
  Measurement accuracy;     // records whose compared cells all match baseline
  Measurement credibility;  // matched records with at least one mismatch
  std::int64_t unmatched = 0;
};

// Joins dataset rows to a uniquely keyed baseline. Rows with a NULL key
// or no baseline match count as unmatched; both-NULL compared cells
// agree. Throws InputError on a duplicate baseline key.
AccuracyResult measure_accuracy_credibility(const Dataset& ds, const TableSchema& schema,
                                            const Dataset& baseline,
                                            const TableSchema& baseline_schema,
                                            const std::vector<std::string>& key_columns,
                                            const std::vector<std::string>& compared_columns);

// Rows missing their transaction_time / valid_time stamp. Throws
// InputError when the schema designates no such column.
Measurement measure_currency(const Dataset& ds, const TableSchema& schema);
Measurement measure_volatility(const Dataset& ds, const TableSchema& schema);

// Tables and columns whose description is empty or whitespace.
Measurement measure_interpretability(const Warehouse& warehouse);

// (R - defective) / R, where a row is defective when any predicate
// claims it; 1 on an empty table (vacuously defect-free).
Measurement compute_defect_ratio(const Dataset& ds, const TableSchema& schema,
                                 const Warehouse& warehouse,
                                 const DefectPredicateSet& predicates);

// Declared manifest entries checked against the model and turned into
// Measurements. Entries without a timestamp get `ingestion_time`.
std::vector<Measurement> ingest_declared(const Json& manifest,
                                         const QualityModelDoc& model,
                                         Timestamp ingestion_time);

// Latest declared measurement per metric, by timestamp (insertion order
// breaks ties).
class DeclaredPool {
 public:
  void add(Measurement m);
  const Measurement* latest(const std::string& metric_id) const;
  std::size_t size() const { return latest_.size(); }

 private:
  std::map<std::string, Measurement> latest_;
};

// Routes one spec to its agent (using spec.params) or to the declared
// pool. Throws MeasurementMissingError when a declared spec has no
// measurement yet; InputError on unusable params or object scope.
Measurement dispatch(const MetricSpec& spec, const Warehouse& warehouse,
                     const QualityModelDoc& model, const DeclaredPool& pool,
                     Timestamp now);

// Measures every metric in the model with one shared timestamp. Declared
// metrics without a pool entry are skipped and listed in `skipped`;
// automated agent failures still throw.
std::vector<Measurement> run_all(const QualityModelDoc& model, const Warehouse& warehouse,
                                 const DeclaredPool& pool, Timestamp now,
                                 std::vector<std::string>* skipped = nullptr);

}  // namespace dqe
