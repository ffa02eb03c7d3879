#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "dqe/json_util.hpp"
#include "dqe/tabular.hpp"
#include "dqe/value.hpp"

namespace dqe {

// ---- Prevention -------------------------------------------------------

struct RejectedRow {
  std::size_t batch_index = 0;
  Row row;
  std::vector<std::string> reasons;  // constraint ids that failed

  bool operator==(const RejectedRow&) const = default;
};

struct AdmissionResult {
  std::vector<Row> accepted;
  std::vector<std::size_t> accepted_indices;  // batch positions of `accepted`
  std::vector<RejectedRow> rejected;

  bool operator==(const AdmissionResult&) const = default;
};

// Checks each batch row independently: not_null/domain/check against the
// schema, referential against the data already in the warehouse. Rows
// are never checked against each other, so dependent rows must arrive
// parent-first across batches. Unique constraints are admission-exempt;
// they need the whole table and are audit work.
AdmissionResult admit(const std::vector<Row>& batch, const Warehouse& warehouse,
                      const std::string& table,
                      const std::vector<std::string>& constraint_ids);

// ---- Audit ------------------------------------------------------------

struct CompletenessCount {
  std::int64_t incomplete = 0;
  std::int64_t rows = 0;

  bool operator==(const CompletenessCount&) const = default;
};

struct AuditReport {
  Timestamp run_timestamp;
  std::vector<std::string> constraint_ids;  // what was tested
  std::vector<Violation> violations;
  std::map<std::string, std::vector<ColumnProfile>> profiles;     // per table
  std::map<std::string, CompletenessCount> completeness;          // per table

  bool operator==(const AuditReport&) const = default;
};

AuditReport audit(const Warehouse& warehouse,
                  const std::vector<std::string>& constraint_ids, Timestamp now);

Json audit_to_json(const AuditReport& report);
std::string render_audit_text(const AuditReport& report);

// ---- Cleansing log ----------------------------------------------------

enum class CleanseAction { FilterElement, FilterRow, FilterGroup, Correct };

const char* cleanse_action_name(CleanseAction action);
std::optional<CleanseAction> cleanse_action_from_name(const std::string& name);

// Row indices are valid at the moment the entry is applied; row removals
// within one call are logged highest index first so sequential replay
// never sees a stale coordinate.
struct CleansingEntry {
  CleanseAction action = CleanseAction::FilterRow;
  std::string table;
  std::size_t row_index = 0;
  std::optional<std::string> column;
  Cell old_value;
  Cell new_value;
  std::string reason;
  Timestamp timestamp;

  bool operator==(const CleansingEntry&) const = default;
};

struct CleansingLog {
  std::vector<CleansingEntry> entries;

  bool operator==(const CleansingLog&) const = default;
};

Json cleansing_entry_to_json(const CleansingEntry& entry);
CleansingEntry cleansing_entry_from_json(const Json& j);

// Applies the log to a copy of `pre`, in order. The result equals the
// warehouse the logged operations produced.
Warehouse replay_log(const Warehouse& pre, const CleansingLog& log);

// ---- Filter -----------------------------------------------------------

struct CellTarget {
  std::string table;
  std::size_t row_index = 0;
  std::string column;

  auto operator<=>(const CellTarget&) const = default;
};

struct RowTarget {
  std::string table;
  std::size_t row_index = 0;

  auto operator<=>(const RowTarget&) const = default;
};

// NULLs the targeted cells. Refuses non-nullable columns: removing a
// value the schema requires just trades one defect for another, so the
// error points at the row filter instead.
Warehouse filter_elements(const Warehouse& warehouse,
                          const std::vector<CellTarget>& targets, CleansingLog& log,
                          Timestamp now, const std::string& reason = "filtered");

// Removes whole rows; no cascade. Dangling children this creates are the
// operator's to find with a fresh audit.
Warehouse filter_rows(const Warehouse& warehouse, const std::vector<RowTarget>& targets,
                      CleansingLog& log, Timestamp now,
                      const std::string& reason = "filtered");

// Removes the seeds plus, to fixpoint, every row whose foreign key
// matched a removed row and matches no surviving one.
Warehouse filter_groups(const Warehouse& warehouse, const std::vector<RowTarget>& seeds,
                        CleansingLog& log, Timestamp now,
                        const std::string& reason = "group seed");

// ---- Correct ----------------------------------------------------------

struct DefaultValue {
  Cell value;
  bool operator==(const DefaultValue&) const = default;
};

struct DeriveValue {
  std::string expression;
  bool operator==(const DeriveValue&) const = default;
};

struct AlternateSource {
  std::string lookup_table;
  // local key column -> lookup table key column
  std::vector<std::pair<std::string, std::string>> key_map;
  std::string value_column;
  bool operator==(const AlternateSource&) const = default;
};

enum class AppliesWhen { CellIsNull, CellViolates };

struct CorrectionRule {
  std::string table;
  std::string column;
  AppliesWhen applies_when = AppliesWhen::CellIsNull;
  std::variant<DefaultValue, DeriveValue, AlternateSource> strategy;

  bool operator==(const CorrectionRule&) const = default;
};

Json correction_rule_to_json(const CorrectionRule& rule);
CorrectionRule correction_rule_from_json(const Json& j, const std::string& context);
std::vector<CorrectionRule> correction_rules_from_json(const Json& j);

// Applies rules in list order; the first rule matching a cell claims it,
// even when its strategy then cannot produce a value (the attempt is
// logged as uncorrectable and the cell stays put). `violations` feeds
// the CellViolates trigger, normally straight from an audit.
Warehouse correct(const Warehouse& warehouse, const std::vector<CorrectionRule>& rules,
                  const std::vector<Violation>& violations, CleansingLog& log,
                  Timestamp now);

}  // namespace dqe
