#include "dqe/cleanse.hpp"

#include <algorithm>
#include <functional>
#include <unordered_map>

#include "dqe/derive_expr.hpp"
#include "dqe/error.hpp"

namespace dqe {

namespace {

std::optional<std::string> tuple_key(const Row& row, const std::vector<std::size_t>& idx) {
  std::string key;
  for (std::size_t i : idx) {
    if (row[i].is_null()) return std::nullopt;
    key += format_cell(row[i]);
    key += '\x1f';
  }
  return key;
}

std::vector<std::size_t> column_indices(const TableSchema& schema,
                                        const std::vector<std::string>& names) {
  std::vector<std::size_t> idx;
  for (const auto& n : names) idx.push_back(*schema.column_index(n));
  return idx;
}

bool row_incomplete(const Row& row, const TableSchema& schema) {
  for (std::size_t c = 0; c < schema.columns.size(); ++c) {
    if (schema.columns[c].required && row[c].is_null()) return true;
  }
  return false;
}

}  // namespace

// ---- Prevention -------------------------------------------------------

AdmissionResult admit(const std::vector<Row>& batch, const Warehouse& warehouse,
                      const std::string& table,
                      const std::vector<std::string>& constraint_ids) {
  if (!warehouse.has_table(table)) {
    throw InputError("admission: no table '" + table + "' in the warehouse");
  }
  const TableSchema& schema = warehouse.schema(table);

  std::vector<std::string> applicable;
  for (const auto& id : constraint_ids) {
    const Constraint* c = warehouse.constraint(id);
    if (!c) throw InputError("admission: unknown constraint '" + id + "'");
    if (c->table != table) continue;
    if (std::holds_alternative<UniqueRule>(c->rule)) continue;  // audit-time check
    applicable.push_back(id);
  }

  for (std::size_t i = 0; i < batch.size(); ++i) {
    if (batch[i].size() != schema.columns.size()) {
      throw InputError("admission: row " + std::to_string(i) + " has " +
                       std::to_string(batch[i].size()) + " cells, table '" + table +
                       "' has " + std::to_string(schema.columns.size()) + " columns");
    }
    for (std::size_t c = 0; c < schema.columns.size(); ++c) {
      if (!cell_conforms(batch[i][c], schema.columns[c].kind)) {
        throw InputError("admission: row " + std::to_string(i) + " column '" +
                         schema.columns[c].name + "' is not a " +
                         kind_name(schema.columns[c].kind));
      }
    }
  }

  // Each row is judged alone: a scratch warehouse holding just that row
  // (with everything else untouched) feeds the shared violation finder.
  Warehouse scratch = warehouse;
  AdmissionResult result;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    scratch.datasets.at(table).rows = {batch[i]};
    std::vector<std::string> reasons;
    for (const auto& v : find_violations(scratch, applicable)) {
      reasons.push_back(v.constraint_id);
    }
    if (reasons.empty()) {
      result.accepted.push_back(batch[i]);
      result.accepted_indices.push_back(i);
    } else {
      result.rejected.push_back({i, batch[i], std::move(reasons)});
    }
  }
  return result;
}

// ---- Audit ------------------------------------------------------------

AuditReport audit(const Warehouse& warehouse,
                  const std::vector<std::string>& constraint_ids, Timestamp now) {
  AuditReport report;
  report.run_timestamp = now;
  report.constraint_ids = constraint_ids;
  report.violations = find_violations(warehouse, constraint_ids);
  for (const auto& [name, schema] : warehouse.schemas) {
    const Dataset& ds = warehouse.dataset(name);
    report.profiles[name] = profile_columns(ds, schema);
    CompletenessCount count;
    count.rows = static_cast<std::int64_t>(ds.rows.size());
    for (const Row& row : ds.rows) {
      if (row_incomplete(row, schema)) ++count.incomplete;
    }
    report.completeness[name] = count;
  }
  return report;
}

Json audit_to_json(const AuditReport& report) {
  Json j;
  j["run_timestamp"] = report.run_timestamp.to_string();
  j["constraints"] = report.constraint_ids;
  j["violations"] = Json::array();
  for (const auto& v : report.violations) {
    j["violations"].push_back(Json{{"constraint_id", v.constraint_id},
                                   {"table", v.table},
                                   {"row", v.row_index},
                                   {"columns", v.columns},
                                   {"detail", v.detail}});
  }
  j["profiles"] = Json::object();
  for (const auto& [table, profiles] : report.profiles) {
    Json pj = Json::array();
    for (const auto& p : profiles) {
      Json cj;
      cj["column"] = p.column;
      cj["null_count"] = p.null_count;
      cj["distinct_count"] = p.distinct_count;
      cj["min"] = p.min_value ? tagged_cell_to_json(*p.min_value) : Json(nullptr);
      cj["max"] = p.max_value ? tagged_cell_to_json(*p.max_value) : Json(nullptr);
      cj["top_values"] = Json::array();
      for (const auto& [value, count] : p.top_values) {
        cj["top_values"].push_back(
            Json{{"value", tagged_cell_to_json(value)}, {"count", count}});
      }
      pj.push_back(std::move(cj));
    }
    j["profiles"][table] = std::move(pj);
  }
  j["completeness"] = Json::object();
  for (const auto& [table, count] : report.completeness) {
    j["completeness"][table] =
        Json{{"incomplete", count.incomplete}, {"records", count.rows}};
  }
  return j;
}

std::string render_audit_text(const AuditReport& report) {
  std::string out = "audit report\n";
  out += "  run: " + report.run_timestamp.to_string() + "\n";

  out += "\nviolations (" + std::to_string(report.violations.size()) + ")\n";
  for (const auto& v : report.violations) {
    std::string cols;
    for (const auto& c : v.columns) {
      if (!cols.empty()) cols += ",";
      cols += c;
    }
    out += "  " + v.table + "[" + std::to_string(v.row_index) + "] " + v.constraint_id +
           " (" + cols + "): " + v.detail + "\n";
  }

  for (const auto& [table, profiles] : report.profiles) {
    const auto& count = report.completeness.at(table);
    out += "\ntable " + table + "  (" + std::to_string(count.rows) + " rows, " +
           std::to_string(count.incomplete) + " incomplete)\n";
    for (const auto& p : profiles) {
      out += "  " + p.column + ": nulls=" + std::to_string(p.null_count) +
             " distinct=" + std::to_string(p.distinct_count);
      if (p.min_value) {
        out += " min=" + format_cell(*p.min_value) + " max=" + format_cell(*p.max_value);
      }
      if (!p.top_values.empty()) {
        out += " top=";
        bool first = true;
        for (const auto& [value, n] : p.top_values) {
          if (!first) out += ", ";
          first = false;
          out += format_cell(value) + "×" + std::to_string(n);
        }
      }
      out += "\n";
    }
  }
  return out;
}

// ---- Cleansing log ----------------------------------------------------

namespace {
const char* kActionNames[] = {"filter_element", "filter_row", "filter_group", "correct"};
}

const char* cleanse_action_name(CleanseAction action) {
  return kActionNames[static_cast<int>(action)];
}

std::optional<CleanseAction> cleanse_action_from_name(const std::string& name) {
  for (int i = 0; i < 4; ++i) {
    if (name == kActionNames[i]) return static_cast<CleanseAction>(i);
  }
  return std::nullopt;
}

Json cleansing_entry_to_json(const CleansingEntry& entry) {
  Json j;
  j["action"] = cleanse_action_name(entry.action);
  j["table"] = entry.table;
  j["row"] = entry.row_index;
  j["column"] = entry.column ? Json(*entry.column) : Json(nullptr);
  j["old"] = tagged_cell_to_json(entry.old_value);
  j["new"] = tagged_cell_to_json(entry.new_value);
  j["reason"] = entry.reason;
  j["timestamp"] = entry.timestamp.to_string();
  return j;
}

CleansingEntry cleansing_entry_from_json(const Json& j) {
  const std::string context = "cleansing entry";
  require_object(j, context);
  reject_unknown_keys(
      j, {"action", "table", "row", "column", "old", "new", "reason", "timestamp"},
      context);
  CleansingEntry entry;
  auto action = cleanse_action_from_name(get_string(j, "action", context));
  if (!action) throw ParseError(context + ": unknown action");
  entry.action = *action;
  entry.table = get_string(j, "table", context);
  entry.row_index = static_cast<std::size_t>(get_uint(j, "row", context));
  const Json& column = require_key(j, "column", context);
  if (!column.is_null()) entry.column = column.get<std::string>();
  entry.old_value = tagged_cell_from_json(require_key(j, "old", context), context);
  entry.new_value = tagged_cell_from_json(require_key(j, "new", context), context);
  entry.reason = get_string(j, "reason", context);
  auto ts = Timestamp::parse(get_string(j, "timestamp", context));
  if (!ts) throw ParseError(context + ": bad timestamp");
  entry.timestamp = *ts;
  return entry;
}

Warehouse replay_log(const Warehouse& pre, const CleansingLog& log) {
  Warehouse post = pre;
  for (const auto& entry : log.entries) {
    if (!post.has_table(entry.table)) {
      throw InputError("replay: no table '" + entry.table + "'");
    }
    auto& rows = post.datasets.at(entry.table).rows;
    if (entry.row_index >= rows.size()) {
      throw InputError("replay: row " + std::to_string(entry.row_index) +
                       " out of range for table '" + entry.table + "'");
    }
    switch (entry.action) {
      case CleanseAction::FilterRow:
      case CleanseAction::FilterGroup:
        rows.erase(rows.begin() + static_cast<std::ptrdiff_t>(entry.row_index));
        break;
      case CleanseAction::FilterElement:
      case CleanseAction::Correct: {
        if (!entry.column) {
          throw InputError("replay: cell action without a column");
        }
        auto idx = post.schema(entry.table).column_index(*entry.column);
        if (!idx) {
          throw InputError("replay: no column '" + *entry.column + "' in table '" +
                           entry.table + "'");
        }
        rows[entry.row_index][*idx] = entry.new_value;
        break;
      }
    }
  }
  return post;
}

// ---- Filter -----------------------------------------------------------

Warehouse filter_elements(const Warehouse& warehouse,
                          const std::vector<CellTarget>& targets, CleansingLog& log,
                          Timestamp now, const std::string& reason) {
  std::set<CellTarget> unique_targets(targets.begin(), targets.end());
  // Validate everything before touching anything.
  for (const auto& t : unique_targets) {
    if (!warehouse.has_table(t.table)) {
      throw InputError("element filter: no table '" + t.table + "'");
    }
    const TableSchema& schema = warehouse.schema(t.table);
    const ColumnSpec* column = schema.column(t.column);
    if (!column) {
      throw InputError("element filter: no column '" + t.column + "' in table '" +
                       t.table + "'");
    }
    if (t.row_index >= warehouse.dataset(t.table).rows.size()) {
      throw InputError("element filter: row " + std::to_string(t.row_index) +
                       " out of range for table '" + t.table + "'");
    }
    if (!column->nullable) {
      throw InputError("element filter: column '" + t.column + "' of table '" + t.table +
                       "' is not nullable; use a row filter to remove the whole row");
    }
  }

  Warehouse post = warehouse;
  for (const auto& t : unique_targets) {
    std::size_t col = *post.schema(t.table).column_index(t.column);
    Cell& cell = post.datasets.at(t.table).rows[t.row_index][col];
    if (cell.is_null()) continue;  // nothing to remove, nothing to log
    CleansingEntry entry;
    entry.action = CleanseAction::FilterElement;
    entry.table = t.table;
    entry.row_index = t.row_index;
    entry.column = t.column;
    entry.old_value = cell;
    entry.reason = reason;
    entry.timestamp = now;
    log.entries.push_back(std::move(entry));
    cell = Cell::null();
  }
  return post;
}

namespace {

void check_row_targets(const Warehouse& warehouse, const std::set<RowTarget>& targets,
                       const char* what) {
  for (const auto& t : targets) {
    if (!warehouse.has_table(t.table)) {
      throw InputError(std::string(what) + ": no table '" + t.table + "'");
    }
    if (t.row_index >= warehouse.dataset(t.table).rows.size()) {
      throw InputError(std::string(what) + ": row " + std::to_string(t.row_index) +
                       " out of range for table '" + t.table + "'");
    }
  }
}

// Removes the given pre-state rows, logging per table from the highest
// index down so each logged coordinate is valid when its entry applies.
Warehouse remove_rows(const Warehouse& warehouse, const std::set<RowTarget>& targets,
                      CleansingLog& log, Timestamp now, CleanseAction action,
                      const std::function<std::string(const RowTarget&)>& reason_for) {
  Warehouse post = warehouse;
  std::map<std::string, std::vector<std::size_t>> by_table;
  for (const auto& t : targets) by_table[t.table].push_back(t.row_index);
  for (auto& [table, indices] : by_table) {
    std::sort(indices.rbegin(), indices.rend());
    auto& rows = post.datasets.at(table).rows;
    for (std::size_t index : indices) {
      CleansingEntry entry;
      entry.action = action;
      entry.table = table;
      entry.row_index = index;
      entry.reason = reason_for({table, index});
      entry.timestamp = now;
      log.entries.push_back(std::move(entry));
      rows.erase(rows.begin() + static_cast<std::ptrdiff_t>(index));
    }
  }
  return post;
}

}  // namespace

Warehouse filter_rows(const Warehouse& warehouse, const std::vector<RowTarget>& targets,
                      CleansingLog& log, Timestamp now, const std::string& reason) {
  std::set<RowTarget> unique_targets(targets.begin(), targets.end());
  check_row_targets(warehouse, unique_targets, "row filter");
  return remove_rows(warehouse, unique_targets, log, now, CleanseAction::FilterRow,
                     [&](const RowTarget&) { return reason; });
}

Warehouse filter_groups(const Warehouse& warehouse, const std::vector<RowTarget>& seeds,
                        CleansingLog& log, Timestamp now, const std::string& reason) {
  std::set<RowTarget> seed_set(seeds.begin(), seeds.end());
  check_row_targets(warehouse, seed_set, "group filter");

  // Fixpoint closure: a child follows its parents out when its foreign
  // key matched a removed parent row and no surviving parent row carries
  // the same key.
  std::set<RowTarget> removed = seed_set;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& constraint : warehouse.constraints) {
      const auto* rule = std::get_if<ReferentialRule>(&constraint.rule);
      if (!rule) continue;
      const TableSchema& child_schema = warehouse.schema(constraint.table);
      const TableSchema& parent_schema = warehouse.schema(rule->parent_table);
      const Dataset& child = warehouse.dataset(constraint.table);
      const Dataset& parent = warehouse.dataset(rule->parent_table);
      auto child_idx = column_indices(child_schema, rule->child_columns);
      auto parent_idx = column_indices(parent_schema, rule->parent_columns);

      std::set<std::string> removed_keys, surviving_keys;
      for (std::size_t p = 0; p < parent.rows.size(); ++p) {
        auto key = tuple_key(parent.rows[p], parent_idx);
        if (!key) continue;
        if (removed.count({rule->parent_table, p})) {
          removed_keys.insert(*key);
        } else {
          surviving_keys.insert(*key);
        }
      }
      for (std::size_t r = 0; r < child.rows.size(); ++r) {
        if (removed.count({constraint.table, r})) continue;
        auto key = tuple_key(child.rows[r], child_idx);
        if (!key) continue;
        if (removed_keys.count(*key) && !surviving_keys.count(*key)) {
          removed.insert({constraint.table, r});
          changed = true;
        }
      }
    }
  }

  return remove_rows(warehouse, removed, log, now, CleanseAction::FilterGroup,
                     [&](const RowTarget& t) {
                       return seed_set.count(t) ? reason : std::string("group cascade");
                     });
}

// ---- Correct ----------------------------------------------------------

Json correction_rule_to_json(const CorrectionRule& rule) {
  Json j;
  j["table"] = rule.table;
  j["column"] = rule.column;
  j["applies_when"] =
      rule.applies_when == AppliesWhen::CellIsNull ? "cell_is_null" : "cell_violates";
  if (const auto* dv = std::get_if<DefaultValue>(&rule.strategy)) {
    j["strategy"] = Json{{"type", "default"}, {"value", tagged_cell_to_json(dv->value)}};
  } else if (const auto* de = std::get_if<DeriveValue>(&rule.strategy)) {
    j["strategy"] = Json{{"type", "derive"}, {"expression", de->expression}};
  } else {
    const auto& as = std::get<AlternateSource>(rule.strategy);
    Json key_map = Json::array();
    for (const auto& [local, lookup] : as.key_map) {
      key_map.push_back(Json{{"local", local}, {"lookup", lookup}});
    }
    j["strategy"] = Json{{"type", "alternate_source"},
                         {"lookup_table", as.lookup_table},
                         {"key_map", key_map},
                         {"value_column", as.value_column}};
  }
  return j;
}

CorrectionRule correction_rule_from_json(const Json& j, const std::string& context) {
  require_object(j, context);
  reject_unknown_keys(j, {"table", "column", "applies_when", "strategy"}, context);
  CorrectionRule rule;
  rule.table = get_string(j, "table", context);
  rule.column = get_string(j, "column", context);
  std::string when = get_string(j, "applies_when", context);
  if (when == "cell_is_null") {
    rule.applies_when = AppliesWhen::CellIsNull;
  } else if (when == "cell_violates") {
    rule.applies_when = AppliesWhen::CellViolates;
  } else {
    throw ParseError(context + ": unknown applies_when '" + when + "'");
  }
  const Json& sj = require_key(j, "strategy", context);
  require_object(sj, context);
  std::string type = get_string(sj, "type", context);
  if (type == "default") {
    reject_unknown_keys(sj, {"type", "value"}, context);
    rule.strategy = DefaultValue{tagged_cell_from_json(require_key(sj, "value", context),
                                                       context)};
  } else if (type == "derive") {
    reject_unknown_keys(sj, {"type", "expression"}, context);
    rule.strategy = DeriveValue{get_string(sj, "expression", context)};
  } else if (type == "alternate_source") {
    reject_unknown_keys(sj, {"type", "lookup_table", "key_map", "value_column"}, context);
    AlternateSource as;
    as.lookup_table = get_string(sj, "lookup_table", context);
    const Json& km = require_key(sj, "key_map", context);
    if (!km.is_array() || km.empty()) {
      throw ParseError(context + ": 'key_map' must be a non-empty array");
    }
    for (const auto& entry : km) {
      require_object(entry, context);
      reject_unknown_keys(entry, {"local", "lookup"}, context);
      as.key_map.emplace_back(get_string(entry, "local", context),
                              get_string(entry, "lookup", context));
    }
    as.value_column = get_string(sj, "value_column", context);
    rule.strategy = std::move(as);
  } else {
    throw ParseError(context + ": unknown strategy type '" + type + "'");
  }
  return rule;
}

std::vector<CorrectionRule> correction_rules_from_json(const Json& j) {
  if (!j.is_array()) throw ParseError("correction rules must be a JSON array");
  std::vector<CorrectionRule> rules;
  for (std::size_t i = 0; i < j.size(); ++i) {
    rules.push_back(correction_rule_from_json(j[i], "rule " + std::to_string(i + 1)));
  }
  return rules;
}

namespace {

struct PreparedRule {
  const CorrectionRule* rule = nullptr;
  std::size_t column = 0;
  Kind kind = Kind::Text;
  Cell default_value;                                    // kind-coerced
  std::optional<DeriveExpr> derive;
  std::vector<std::size_t> local_key;                    // alternate_source
  std::unordered_map<std::string, Cell> lookup;
  std::string label;
};

PreparedRule prepare_rule(const CorrectionRule& rule, const Warehouse& warehouse,
                          std::size_t position) {
  std::string context = "correction rule " + std::to_string(position + 1);
  if (!warehouse.has_table(rule.table)) {
    throw InputError(context + ": no table '" + rule.table + "'");
  }
  const TableSchema& schema = warehouse.schema(rule.table);
  auto col = schema.column_index(rule.column);
  if (!col) {
    throw InputError(context + ": no column '" + rule.column + "' in table '" +
                     rule.table + "'");
  }
  PreparedRule prepared;
  prepared.rule = &rule;
  prepared.column = *col;
  prepared.kind = schema.columns[*col].kind;

  if (const auto* dv = std::get_if<DefaultValue>(&rule.strategy)) {
    if (dv->value.is_null()) {
      throw InputError(context + ": default value must not be NULL");
    }
    try {
      prepared.default_value = coerce_to_kind(dv->value, prepared.kind);
    } catch (const Error&) {
      throw InputError(context + ": default value does not conform to " +
                       std::string(kind_name(prepared.kind)) + " column '" +
                       rule.column + "'");
    }
    prepared.label = "default " + format_cell(prepared.default_value);
  } else if (const auto* de = std::get_if<DeriveValue>(&rule.strategy)) {
    prepared.derive = DeriveExpr::parse(de->expression, schema, rule.column);
    prepared.label = "derive " + de->expression;
  } else {
    const auto& as = std::get<AlternateSource>(rule.strategy);
    if (!warehouse.has_table(as.lookup_table)) {
      throw InputError(context + ": no lookup table '" + as.lookup_table + "'");
    }
    const TableSchema& lookup_schema = warehouse.schema(as.lookup_table);
    std::vector<std::size_t> lookup_key;
    for (const auto& [local, lookup] : as.key_map) {
      auto li = schema.column_index(local);
      if (!li) {
        throw InputError(context + ": no key column '" + local + "' in table '" +
                         rule.table + "'");
      }
      auto ri = lookup_schema.column_index(lookup);
      if (!ri) {
        throw InputError(context + ": no key column '" + lookup + "' in lookup table '" +
                         as.lookup_table + "'");
      }
      if (!kinds_comparable(schema.columns[*li].kind, lookup_schema.columns[*ri].kind)) {
        throw InputError(context + ": key columns '" + local + "' and '" + lookup +
                         "' have incomparable kinds");
      }
      prepared.local_key.push_back(*li);
      lookup_key.push_back(*ri);
    }
    auto vi = lookup_schema.column_index(as.value_column);
    if (!vi) {
      throw InputError(context + ": no value column '" + as.value_column +
                       "' in lookup table '" + as.lookup_table + "'");
    }
    if (!kinds_comparable(lookup_schema.columns[*vi].kind, prepared.kind)) {
      throw InputError(context + ": value column '" + as.value_column +
                       "' cannot fill a " + kind_name(prepared.kind) + " column");
    }
    const Dataset& lookup_ds = warehouse.dataset(as.lookup_table);
    for (const Row& lrow : lookup_ds.rows) {
      auto key = tuple_key(lrow, lookup_key);
      if (!key) continue;  // NULL-keyed lookup rows are unaddressable
      if (!prepared.lookup.emplace(*key, lrow[*vi]).second) {
        throw InputError(context + ": lookup key collision in alternate source table '" +
                         as.lookup_table + "'");
      }
    }
    prepared.label = "alternate_source " + as.lookup_table;
  }
  return prepared;
}

}  // namespace

Warehouse correct(const Warehouse& warehouse, const std::vector<CorrectionRule>& rules,
                  const std::vector<Violation>& violations, CleansingLog& log,
                  Timestamp now) {
  std::vector<PreparedRule> prepared;
  for (std::size_t i = 0; i < rules.size(); ++i) {
    prepared.push_back(prepare_rule(rules[i], warehouse, i));
  }

  std::set<CellTarget> violating;
  for (const auto& v : violations) {
    for (const auto& column : v.columns) {
      violating.insert({v.table, v.row_index, column});
    }
  }

  Warehouse post = warehouse;
  std::set<CellTarget> claimed;
  for (const auto& p : prepared) {
    auto& rows = post.datasets.at(p.rule->table).rows;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      CellTarget target{p.rule->table, r, p.rule->column};
      if (claimed.count(target)) continue;
      Cell& cell = rows[r][p.column];
      bool matches = p.rule->applies_when == AppliesWhen::CellIsNull
                         ? cell.is_null()
                         : violating.count(target) > 0;
      if (!matches) continue;
      claimed.insert(target);

      std::optional<Cell> corrected;
      std::string failure;
      if (std::holds_alternative<DefaultValue>(p.rule->strategy)) {
        corrected = p.default_value;
      } else if (p.derive) {
        corrected = p.derive->evaluate(rows[r]);
        if (!corrected) failure = "derive expression had no exact value";
      } else {
        auto key = tuple_key(rows[r], p.local_key);
        if (!key) {
          failure = "NULL lookup key";
        } else {
          auto it = p.lookup.find(*key);
          if (it == p.lookup.end()) {
            failure = "no matching lookup row";
          } else if (it->second.is_null()) {
            failure = "lookup value is NULL";
          } else {
            try {
              corrected = coerce_to_kind(it->second, p.kind);
            } catch (const Error&) {
              failure = "lookup value does not conform to the column";
            }
          }
        }
      }

      CleansingEntry entry;
      entry.action = CleanseAction::Correct;
      entry.table = p.rule->table;
      entry.row_index = r;
      entry.column = p.rule->column;
      entry.old_value = cell;
      entry.timestamp = now;
      if (corrected) {
        entry.new_value = *corrected;
        entry.reason = p.label;
        cell = *corrected;
      } else {
        entry.new_value = cell;  // no change; replay stays a no-op
        entry.reason = "uncorrectable: " + failure + " (" + p.label + ")";
      }
      log.entries.push_back(std::move(entry));
    }
  }
  return post;
}

}  // namespace dqe
