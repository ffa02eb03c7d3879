#include "dqe/tabular.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "dqe/error.hpp"

namespace dqe {

namespace {

std::string quoted_cell(const Cell& cell) {
  if (cell.is_null()) return "NULL";
  return "'" + format_cell(cell) + "'";
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += sep;
    out += parts[i];
  }
  return out;
}

// Canonical text key for grouping row tuples; format_cell is injective
// per kind so collisions cannot merge distinct values.
std::string tuple_key(const Row& row, const std::vector<std::size_t>& idx) {
  std::string key;
  for (std::size_t i : idx) {
    key += format_cell(row[i]);
    key += '\x1f';
  }
  return key;
}

bool row_has_null_at(const Row& row, const std::vector<std::size_t>& idx) {
  return std::any_of(idx.begin(), idx.end(),
                     [&](std::size_t i) { return row[i].is_null(); });
}

std::vector<std::size_t> resolve_columns(const TableSchema& schema,
                                         const std::vector<std::string>& names) {
  std::vector<std::size_t> idx;
  idx.reserve(names.size());
  for (const auto& name : names) {
    auto i = schema.column_index(name);
    if (!i) {
      throw InputError("table '" + schema.name + "' has no column '" + name + "'");
    }
    idx.push_back(*i);
  }
  return idx;
}

bool check_op_holds(CheckOp op, std::strong_ordering ord) {
  switch (op) {
    case CheckOp::Eq: return ord == 0;
    case CheckOp::Ne: return ord != 0;
    case CheckOp::Lt: return ord < 0;
    case CheckOp::Le: return ord <= 0;
    case CheckOp::Gt: return ord > 0;
    case CheckOp::Ge: return ord >= 0;
  }
  return false;
}

}  // namespace

bool ValueDomain::contains(const Cell& cell) const {
  if (is_set()) {
    return std::any_of(values.begin(), values.end(), [&](const Cell& v) {
      auto ord = compare_cells(v, cell);
      return ord && *ord == 0;
    });
  }
  if (min_value) {
    auto ord = compare_cells(cell, *min_value);
    if (!ord || *ord < 0) return false;
  }
  if (max_value) {
    auto ord = compare_cells(cell, *max_value);
    if (!ord || *ord > 0) return false;
  }
  return true;
}

const char* temporal_role_name(TemporalRole role) {
  switch (role) {
    case TemporalRole::None: return "none";
    case TemporalRole::TransactionTime: return "transaction_time";
    case TemporalRole::ValidTime: return "valid_time";
  }
  return "?";
}

std::optional<TemporalRole> temporal_role_from_name(const std::string& name) {
  if (name == "none") return TemporalRole::None;
  if (name == "transaction_time") return TemporalRole::TransactionTime;
  if (name == "valid_time") return TemporalRole::ValidTime;
  return std::nullopt;
}

const char* check_op_name(CheckOp op) {
  switch (op) {
    case CheckOp::Eq: return "=";
    case CheckOp::Ne: return "!=";
    case CheckOp::Lt: return "<";
    case CheckOp::Le: return "<=";
    case CheckOp::Gt: return ">";
    case CheckOp::Ge: return ">=";
  }
  return "?";
}

std::optional<CheckOp> check_op_from_name(const std::string& name) {
  if (name == "=" || name == "==") return CheckOp::Eq;
  if (name == "!=" || name == "<>") return CheckOp::Ne;
  if (name == "<") return CheckOp::Lt;
  if (name == "<=") return CheckOp::Le;
  if (name == ">") return CheckOp::Gt;
  if (name == ">=") return CheckOp::Ge;
  return std::nullopt;
}

std::optional<std::size_t> TableSchema::column_index(const std::string& column) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i].name == column) return i;
  }
  return std::nullopt;
}

const ColumnSpec* TableSchema::column(const std::string& column) const {
  auto i = column_index(column);
  return i ? &columns[*i] : nullptr;
}

std::optional<std::size_t> TableSchema::temporal_column(TemporalRole role) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i].temporal_role == role) return i;
  }
  return std::nullopt;
}

const TableSchema& Warehouse::schema(const std::string& table) const {
  auto it = schemas.find(table);
  if (it == schemas.end()) throw InputError("unknown table '" + table + "'");
  return it->second;
}

const Dataset& Warehouse::dataset(const std::string& table) const {
  auto it = datasets.find(table);
  if (it == datasets.end()) throw InputError("unknown table '" + table + "'");
  return it->second;
}

bool Warehouse::has_table(const std::string& table) const {
  return schemas.count(table) > 0;
}

const Constraint* Warehouse::constraint(const std::string& id) const {
  for (const auto& c : constraints) {
    if (c.id == id) return &c;
  }
  return nullptr;
}

std::vector<std::string> Warehouse::constraint_ids() const {
  std::vector<std::string> ids;
  ids.reserve(constraints.size());
  for (const auto& c : constraints) ids.push_back(c.id);
  return ids;
}

std::vector<std::string> Warehouse::constraint_ids_for(const std::string& table) const {
  std::vector<std::string> ids;
  for (const auto& c : constraints) {
    if (c.table == table) ids.push_back(c.id);
  }
  return ids;
}

void Warehouse::validate() const {
  for (const auto& [name, schema] : schemas) {
    if (name != schema.name) {
      throw InputError("schema map key '" + name + "' does not match table name '" +
                       schema.name + "'");
    }
    if (schema.name.empty()) throw InputError("table with empty name");
    std::set<std::string> seen;
    int transaction_time = 0, valid_time = 0;
    for (const auto& col : schema.columns) {
      if (col.name.empty()) {
        throw InputError("table '" + name + "': column with empty name");
      }
      if (!seen.insert(col.name).second) {
        throw InputError("table '" + name + "': duplicate column '" + col.name + "'");
      }
      if (col.temporal_role == TemporalRole::TransactionTime) ++transaction_time;
      if (col.temporal_role == TemporalRole::ValidTime) ++valid_time;
      if (col.temporal_role != TemporalRole::None && col.kind != Kind::Timestamp) {
        throw InputError("table '" + name + "': temporal column '" + col.name +
                         "' must have kind timestamp");
      }
      if (col.domain) {
        const auto& dom = *col.domain;
        if (dom.is_set()) {
          if (dom.min_value || dom.max_value) {
            throw InputError("table '" + name + "' column '" + col.name +
                             "': domain is either a value set or a range, not both");
          }
          for (const auto& v : dom.values) {
            if (v.is_null() || !cell_conforms(v, col.kind)) {
              throw InputError("table '" + name + "' column '" + col.name +
                               "': domain value does not conform to column kind");
            }
          }
        } else {
          if (!dom.min_value && !dom.max_value) {
            throw InputError("table '" + name + "' column '" + col.name +
                             "': empty domain");
          }
          if (col.kind != Kind::Integer && col.kind != Kind::Decimal) {
            throw InputError("table '" + name + "' column '" + col.name +
                             "': range domains require a numeric column");
          }
          for (const auto& bound : {dom.min_value, dom.max_value}) {
            if (bound && (bound->is_null() || !kinds_comparable(*bound->kind(), col.kind))) {
              throw InputError("table '" + name + "' column '" + col.name +
                               "': domain bound does not conform to column kind");
            }
          }
          if (dom.min_value && dom.max_value) {
            auto ord = compare_cells(*dom.min_value, *dom.max_value);
            if (!ord || *ord > 0) {
              throw InputError("table '" + name + "' column '" + col.name +
                               "': domain range has min > max");
            }
          }
        }
      }
    }
    if (transaction_time > 1) {
      throw InputError("table '" + name + "': more than one transaction_time column");
    }
    if (valid_time > 1) {
      throw InputError("table '" + name + "': more than one valid_time column");
    }
    if (schema.primary_key.empty()) {
      throw InputError("table '" + name + "': empty primary key");
    }
    for (const auto& pk : schema.primary_key) {
      if (!schema.column_index(pk)) {
        throw InputError("table '" + name + "': primary key column '" + pk +
                         "' does not exist");
      }
    }
  }

  for (const auto& [name, ds] : datasets) {
    auto it = schemas.find(name);
    if (it == schemas.end()) {
      throw InputError("dataset '" + name + "' has no schema");
    }
    const auto& schema = it->second;
    for (std::size_t r = 0; r < ds.rows.size(); ++r) {
      if (ds.rows[r].size() != schema.columns.size()) {
        throw InputError("table '" + name + "' row " + std::to_string(r) +
                         ": expected " + std::to_string(schema.columns.size()) +
                         " cells, got " + std::to_string(ds.rows[r].size()));
      }
      for (std::size_t c = 0; c < schema.columns.size(); ++c) {
        if (!cell_conforms(ds.rows[r][c], schema.columns[c].kind)) {
          throw InputError("table '" + name + "' row " + std::to_string(r) +
                           " column '" + schema.columns[c].name +
                           "': cell kind does not match column kind");
        }
      }
    }
  }

  std::set<std::string> constraint_seen;
  for (const auto& c : constraints) {
    if (c.id.empty()) throw InputError("constraint with empty id");
    if (!constraint_seen.insert(c.id).second) {
      throw InputError("duplicate constraint id '" + c.id + "'");
    }
    auto schema_it = schemas.find(c.table);
    if (schema_it == schemas.end()) {
      throw InputError("constraint '" + c.id + "' references unknown table '" +
                       c.table + "'");
    }
    const auto& schema = schema_it->second;
    auto need_column = [&](const std::string& col) -> const ColumnSpec& {
      const ColumnSpec* spec = schema.column(col);
      if (!spec) {
        throw InputError("constraint '" + c.id + "' references unknown column '" +
                         col + "' of table '" + c.table + "'");
      }
      return *spec;
    };
    if (const auto* nn = std::get_if<NotNullRule>(&c.rule)) {
      need_column(nn->column);
    } else if (const auto* dr = std::get_if<DomainRule>(&c.rule)) {
      const auto& spec = need_column(dr->column);
      if (!spec.domain) {
        throw InputError("constraint '" + c.id + "': column '" + dr->column +
                         "' declares no domain");
      }
    } else if (const auto* uq = std::get_if<UniqueRule>(&c.rule)) {
      if (uq->columns.empty()) {
        throw InputError("constraint '" + c.id + "': unique over zero columns");
      }
      std::set<std::string> cols;
      for (const auto& col : uq->columns) {
        need_column(col);
        if (!cols.insert(col).second) {
          throw InputError("constraint '" + c.id + "': duplicate column '" + col +
                           "' in unique rule");
        }
      }
    } else if (const auto* rf = std::get_if<ReferentialRule>(&c.rule)) {
      auto parent_it = schemas.find(rf->parent_table);
      if (parent_it == schemas.end()) {
        throw InputError("constraint '" + c.id + "' references unknown parent table '" +
                         rf->parent_table + "'");
      }
      if (rf->child_columns.empty() ||
          rf->child_columns.size() != rf->parent_columns.size()) {
        throw InputError("constraint '" + c.id +
                         "': child/parent column lists must be non-empty and equal length");
      }
      for (std::size_t i = 0; i < rf->child_columns.size(); ++i) {
        const auto& child = need_column(rf->child_columns[i]);
        const ColumnSpec* parent = parent_it->second.column(rf->parent_columns[i]);
        if (!parent) {
          throw InputError("constraint '" + c.id + "' references unknown column '" +
                           rf->parent_columns[i] + "' of table '" + rf->parent_table +
                           "'");
        }
        if (child.kind != parent->kind) {
          throw InputError("constraint '" + c.id + "': column kinds differ ('" +
                           rf->child_columns[i] + "' is " + kind_name(child.kind) +
                           ", '" + rf->parent_columns[i] + "' is " +
                           kind_name(parent->kind) + ")");
        }
      }
    } else if (const auto* ck = std::get_if<CheckRule>(&c.rule)) {
      const auto& lhs = need_column(ck->column);
      if (ck->literal.has_value() == ck->other_column.has_value()) {
        throw InputError("constraint '" + c.id +
                         "': check needs exactly one of literal or other column");
      }
      if (ck->literal) {
        if (ck->literal->is_null()) {
          throw InputError("constraint '" + c.id + "': check literal cannot be NULL");
        }
        if (!kinds_comparable(*ck->literal->kind(), lhs.kind)) {
          throw InputError("constraint '" + c.id + "': check literal kind " +
                           kind_name(*ck->literal->kind()) +
                           " is not comparable with column kind " + kind_name(lhs.kind));
        }
      } else {
        const auto& rhs = need_column(*ck->other_column);
        if (!kinds_comparable(lhs.kind, rhs.kind)) {
          throw InputError("constraint '" + c.id + "': columns '" + ck->column +
                           "' and '" + *ck->other_column + "' are not comparable");
        }
      }
    }
  }
}

namespace {

void collect_not_null(const Constraint& c, const NotNullRule& rule,
                      const TableSchema& schema, const Dataset& ds,
                      std::vector<Violation>& out) {
  std::size_t col = *schema.column_index(rule.column);
  for (std::size_t r = 0; r < ds.rows.size(); ++r) {
    if (ds.rows[r][col].is_null()) {
      out.push_back({c.id, c.table, r, {rule.column},
                     "NULL in not-null column '" + rule.column + "'"});
    }
  }
}

void collect_domain(const Constraint& c, const DomainRule& rule,
                    const TableSchema& schema, const Dataset& ds,
                    std::vector<Violation>& out) {
  std::size_t col = *schema.column_index(rule.column);
  const ValueDomain& dom = *schema.columns[col].domain;
  for (std::size_t r = 0; r < ds.rows.size(); ++r) {
    const Cell& cell = ds.rows[r][col];
    if (cell.is_null()) continue;  // NULLs are the not_null rule's business
    if (!dom.contains(cell)) {
      out.push_back({c.id, c.table, r, {rule.column},
                     "value " + quoted_cell(cell) + " outside domain of column '" +
                         rule.column + "'"});
    }
  }
}

void collect_unique(const Constraint& c, const UniqueRule& rule,
                    const TableSchema& schema, const Dataset& ds,
                    std::vector<Violation>& out) {
  auto idx = resolve_columns(schema, rule.columns);
  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t r = 0; r < ds.rows.size(); ++r) {
    if (row_has_null_at(ds.rows[r], idx)) continue;  // NULL never equals NULL
    groups[tuple_key(ds.rows[r], idx)].push_back(r);
  }
  for (const auto& [key, members] : groups) {
    if (members.size() < 2) continue;
    for (std::size_t r : members) {
      std::vector<std::string> parts;
      for (std::size_t i = 0; i < idx.size(); ++i) {
        parts.push_back(rule.columns[i] + "=" + quoted_cell(ds.rows[r][idx[i]]));
      }
      out.push_back({c.id, c.table, r, rule.columns,
                     "duplicate key (" + join(parts, ", ") + ") shared by " +
                         std::to_string(members.size()) + " rows"});
    }
  }
}

void collect_referential(const Constraint& c, const ReferentialRule& rule,
                         const Warehouse& warehouse, const TableSchema& schema,
                         const Dataset& ds, std::vector<Violation>& out) {
  const TableSchema& parent_schema = warehouse.schema(rule.parent_table);
  const Dataset& parent = warehouse.dataset(rule.parent_table);
  auto child_idx = resolve_columns(schema, rule.child_columns);
  auto parent_idx = resolve_columns(parent_schema, rule.parent_columns);

  std::set<std::string> parent_keys;
  for (const Row& row : parent.rows) {
    if (row_has_null_at(row, parent_idx)) continue;
    parent_keys.insert(tuple_key(row, parent_idx));
  }

  for (std::size_t r = 0; r < ds.rows.size(); ++r) {
    const Row& row = ds.rows[r];
    if (row_has_null_at(row, child_idx)) continue;  // exempt by decision
    if (parent_keys.count(tuple_key(row, child_idx))) continue;
    std::vector<std::string> parts;
    for (std::size_t i = 0; i < child_idx.size(); ++i) {
      parts.push_back(rule.child_columns[i] + "=" + quoted_cell(row[child_idx[i]]));
    }
    out.push_back({c.id, c.table, r, rule.child_columns,
                   "foreign key (" + join(parts, ", ") + ") has no match in " +
                       rule.parent_table + "(" + join(rule.parent_columns, ", ") +
                       ")"});
  }
}

void collect_check(const Constraint& c, const CheckRule& rule,
                   const TableSchema& schema, const Dataset& ds,
                   std::vector<Violation>& out) {
  std::size_t lhs_col = *schema.column_index(rule.column);
  std::optional<std::size_t> rhs_col;
  if (rule.other_column) rhs_col = *schema.column_index(*rule.other_column);

  std::string rule_text = rule.column + " " + check_op_name(rule.op) + " " +
                          (rule.other_column ? *rule.other_column
                                             : format_cell(*rule.literal));
  std::vector<std::string> involved{rule.column};
  if (rule.other_column) involved.push_back(*rule.other_column);

  for (std::size_t r = 0; r < ds.rows.size(); ++r) {
    const Cell& lhs = ds.rows[r][lhs_col];
    const Cell& rhs = rhs_col ? ds.rows[r][*rhs_col] : *rule.literal;
    auto ord = compare_cells(lhs, rhs);
    if (!ord) continue;  // NULL operand: unknown, not a failure
    if (!check_op_holds(rule.op, *ord)) {
      std::string detail = "check '" + rule_text + "' failed (" + rule.column + "=" +
                           quoted_cell(lhs);
      if (rule.other_column) {
        detail += ", " + *rule.other_column + "=" + quoted_cell(rhs);
      }
      detail += ")";
      out.push_back({c.id, c.table, r, involved, detail});
    }
  }
}

}  // namespace

std::vector<Violation> find_violations(const Warehouse& warehouse,
                                       const std::vector<std::string>& constraint_ids) {
  std::vector<Violation> out;
  for (const auto& id : constraint_ids) {
    const Constraint* c = warehouse.constraint(id);
    if (!c) throw InputError("unknown constraint '" + id + "'");
    const TableSchema& schema = warehouse.schema(c->table);
    const Dataset& ds = warehouse.dataset(c->table);
    if (const auto* nn = std::get_if<NotNullRule>(&c->rule)) {
      collect_not_null(*c, *nn, schema, ds, out);
    } else if (const auto* dr = std::get_if<DomainRule>(&c->rule)) {
      collect_domain(*c, *dr, schema, ds, out);
    } else if (const auto* uq = std::get_if<UniqueRule>(&c->rule)) {
      collect_unique(*c, *uq, schema, ds, out);
    } else if (const auto* rf = std::get_if<ReferentialRule>(&c->rule)) {
      collect_referential(*c, *rf, warehouse, schema, ds, out);
    } else if (const auto* ck = std::get_if<CheckRule>(&c->rule)) {
      collect_check(*c, *ck, schema, ds, out);
    }
  }
  std::sort(out.begin(), out.end(), [](const Violation& a, const Violation& b) {
    if (a.table != b.table) return a.table < b.table;
    if (a.row_index != b.row_index) return a.row_index < b.row_index;
    return a.constraint_id < b.constraint_id;
  });
  return out;
}

std::vector<ColumnProfile> profile_columns(const Dataset& dataset,
                                           const TableSchema& schema,
                                           std::size_t top_k) {
  std::vector<ColumnProfile> profiles;
  profiles.reserve(schema.columns.size());
  for (std::size_t c = 0; c < schema.columns.size(); ++c) {
    const ColumnSpec& col = schema.columns[c];
    ColumnProfile profile;
    profile.column = col.name;

    // Frequency map keyed by canonical text; keeps one representative Cell.
    std::map<std::string, std::pair<Cell, std::size_t>> freq;
    for (const Row& row : dataset.rows) {
      const Cell& cell = row[c];
      if (cell.is_null()) {
        ++profile.null_count;
        continue;
      }
      auto [it, inserted] = freq.emplace(format_cell(cell), std::make_pair(cell, 0));
      ++it->second.second;
      if (col.kind == Kind::Integer || col.kind == Kind::Decimal ||
          col.kind == Kind::Timestamp) {
        if (!profile.min_value || *compare_cells(cell, *profile.min_value) < 0) {
          profile.min_value = cell;
        }
        if (!profile.max_value || *compare_cells(cell, *profile.max_value) > 0) {
          profile.max_value = cell;
        }
      }
    }
    profile.distinct_count = freq.size();

    std::vector<std::pair<Cell, std::size_t>> ranked;
    ranked.reserve(freq.size());
    for (const auto& [key, entry] : freq) ranked.push_back(entry);
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) {
                       if (a.second != b.second) return a.second > b.second;
                       auto ord = compare_cells(a.first, b.first);
                       return ord && *ord < 0;
                     });
    if (ranked.size() > top_k) ranked.resize(top_k);
    profile.top_values = std::move(ranked);
    profiles.push_back(std::move(profile));
  }
  return profiles;
}

}  // namespace dqe
