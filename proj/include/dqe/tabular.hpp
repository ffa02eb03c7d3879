#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "dqe/value.hpp"

namespace dqe {

// Allowed-value set or inclusive range for a column. Exactly one of the
// two forms is populated.
struct ValueDomain {
  std::vector<Cell> values;            // allowed-value set
  std::optional<Cell> min_value;       // inclusive range, either bound
  std::optional<Cell> max_value;       //   may be open

  bool is_set() const { return !values.empty(); }
  bool contains(const Cell& cell) const;

  bool operator==(const ValueDomain&) const = default;
};

enum class TemporalRole { None, TransactionTime, ValidTime };

const char* temporal_role_name(TemporalRole role);
std::optional<TemporalRole> temporal_role_from_name(const std::string& name);

struct ColumnSpec {
  std::string name;
  Kind kind = Kind::Text;
  bool nullable = true;    // business rule: NULLs expected here or not
  bool required = false;   // record is incomplete if this column is NULL
  std::optional<ValueDomain> domain;
  std::string description;
  TemporalRole temporal_role = TemporalRole::None;

  bool operator==(const ColumnSpec&) const = default;
};

struct TableSchema {
  std::string name;
  std::vector<ColumnSpec> columns;
  std::vector<std::string> primary_key;
  std::string description;

  std::optional<std::size_t> column_index(const std::string& column) const;
  const ColumnSpec* column(const std::string& column) const;
  std::optional<std::size_t> temporal_column(TemporalRole role) const;

  bool operator==(const TableSchema&) const = default;
};

// ---- Integrity constraints --------------------------------------------

struct NotNullRule {
  std::string column;
  bool operator==(const NotNullRule&) const = default;
};

// Checks the column's declared domain; which values are legal lives on
// the ColumnSpec.
struct DomainRule {
  std::string column;
  bool operator==(const DomainRule&) const = default;
};

struct UniqueRule {
  std::vector<std::string> columns;
  bool operator==(const UniqueRule&) const = default;
};

// Owning table is the child side.
struct ReferentialRule {
  std::vector<std::string> child_columns;
  std::string parent_table;
  std::vector<std::string> parent_columns;
  bool operator==(const ReferentialRule&) const = default;
};

enum class CheckOp { Eq, Ne, Lt, Le, Gt, Ge };

const char* check_op_name(CheckOp op);
std::optional<CheckOp> check_op_from_name(const std::string& name);

// Single-row comparison: column <op> literal or column <op> other column.
struct CheckRule {
  std::string column;
  CheckOp op = CheckOp::Eq;
  std::optional<Cell> literal;
  std::optional<std::string> other_column;
  bool operator==(const CheckRule&) const = default;
};

struct Constraint {
  std::string id;
  std::string table;  // the table whose rows are being constrained
  std::variant<NotNullRule, DomainRule, UniqueRule, ReferentialRule, CheckRule>
      rule;

  bool operator==(const Constraint&) const = default;
};

// ---- Data -------------------------------------------------------------

using Row = std::vector<Cell>;

struct Dataset {
  std::string table;
  std::vector<Row> rows;

  std::size_t row_count() const { return rows.size(); }
  bool operator==(const Dataset&) const = default;
};

struct Warehouse {
  std::map<std::string, TableSchema> schemas;
  std::map<std::string, Dataset> datasets;
  std::vector<Constraint> constraints;

  const TableSchema& schema(const std::string& table) const;
  const Dataset& dataset(const std::string& table) const;
  bool has_table(const std::string& table) const;
  const Constraint* constraint(const std::string& id) const;
  std::vector<std::string> constraint_ids() const;
  std::vector<std::string> constraint_ids_for(const std::string& table) const;

  // Enforces every structural invariant; throws InputError on breach.
  void validate() const;

  bool operator==(const Warehouse&) const = default;
};

// ---- Audit primitives -------------------------------------------------

struct Violation {
  std::string constraint_id;
  std::string table;
  std::size_t row_index = 0;  // 0-based load order
  std::vector<std::string> columns;
  std::string detail;

  bool operator==(const Violation&) const = default;
};

struct ColumnProfile {
  std::string column;
  std::size_t null_count = 0;
  std::size_t distinct_count = 0;  // distinct non-NULL values
  std::optional<Cell> min_value;   // ordered kinds only
  std::optional<Cell> max_value;
  std::vector<std::pair<Cell, std::size_t>> top_values;  // most frequent first

  bool operator==(const ColumnProfile&) const = default;
};

// Tests every row of the named constraints and reports one Violation per
// failing (row, constraint) pair, ordered by (table, row_index,
// constraint_id). NULL semantics: NULL never equals NULL, so unique keys
// with NULLs are exempt, referential rows with a NULL foreign-key cell
// are exempt, and a check over a NULL cell is violation-free.
std::vector<Violation> find_violations(const Warehouse& warehouse,
                                       const std::vector<std::string>& constraint_ids);

// One profile per schema column; min/max for integer, decimal and
// timestamp columns; top_k most frequent values (ties broken by value).
std::vector<ColumnProfile> profile_columns(const Dataset& dataset,
                                           const TableSchema& schema,
                                           std::size_t top_k = 5);

}  // namespace dqe
