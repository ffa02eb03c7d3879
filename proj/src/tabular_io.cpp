#include "dqe/tabular_io.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <sstream>

#include "dqe/csv.hpp"
#include "dqe/error.hpp"

namespace dqe {

namespace {

constexpr const char* kSchemaSuffix = ".schema.json";

Json domain_to_json(const ValueDomain& dom) {
  Json j = Json::object();
  if (dom.is_set()) {
    Json values = Json::array();
    for (const auto& v : dom.values) values.push_back(cell_to_json(v));
    j["values"] = std::move(values);
  } else {
    if (dom.min_value) j["min"] = cell_to_json(*dom.min_value);
    if (dom.max_value) j["max"] = cell_to_json(*dom.max_value);
  }
  return j;
}

ValueDomain domain_from_json(const Json& j, Kind kind, const std::string& context) {
  require_object(j, context);
  reject_unknown_keys(j, {"values", "min", "max"}, context);
  ValueDomain dom;
  if (auto it = j.find("values"); it != j.end()) {
    if (!it->is_array()) throw ParseError(context + ": 'values' must be an array");
    for (const auto& v : *it) {
      dom.values.push_back(coerce_to_kind(cell_from_json(v, kind, context), kind));
    }
  }
  if (auto it = j.find("min"); it != j.end()) {
    dom.min_value = cell_from_json(*it, kind, context);
  }
  if (auto it = j.find("max"); it != j.end()) {
    dom.max_value = cell_from_json(*it, kind, context);
  }
  return dom;
}

Json constraint_to_json(const Constraint& c) {
  Json j{{"id", c.id}};
  if (const auto* nn = std::get_if<NotNullRule>(&c.rule)) {
    j["kind"] = "not_null";
    j["column"] = nn->column;
  } else if (const auto* dr = std::get_if<DomainRule>(&c.rule)) {
    j["kind"] = "domain";
    j["column"] = dr->column;
  } else if (const auto* uq = std::get_if<UniqueRule>(&c.rule)) {
    j["kind"] = "unique";
    j["columns"] = uq->columns;
  } else if (const auto* rf = std::get_if<ReferentialRule>(&c.rule)) {
    j["kind"] = "referential";
    j["columns"] = rf->child_columns;
    j["parent_table"] = rf->parent_table;
    j["parent_columns"] = rf->parent_columns;
  } else if (const auto* ck = std::get_if<CheckRule>(&c.rule)) {
    j["kind"] = "check";
    j["column"] = ck->column;
    j["op"] = check_op_name(ck->op);
    if (ck->other_column) {
      j["other_column"] = *ck->other_column;
    } else {
      j["value"] = cell_to_json(*ck->literal);
    }
  }
  return j;
}

std::vector<std::string> string_list(const Json& j, const std::string& key,
                                     const std::string& context) {
  const Json& v = require_key(j, key, context);
  if (!v.is_array()) throw ParseError(context + ": '" + key + "' must be an array");
  std::vector<std::string> out;
  for (const auto& e : v) {
    if (!e.is_string()) {
      throw ParseError(context + ": '" + key + "' must contain strings");
    }
    out.push_back(e.get<std::string>());
  }
  return out;
}

Constraint constraint_from_json(const Json& j, const std::string& table,
                                const TableSchema& schema, const std::string& source) {
  require_object(j, source);
  std::string id = get_string(j, "id", source);
  std::string context = source + " constraint '" + id + "'";
  std::string kind = get_string(j, "kind", context);
  Constraint c;
  c.id = id;
  c.table = table;
  if (kind == "not_null") {
    reject_unknown_keys(j, {"id", "kind", "column"}, context);
    c.rule = NotNullRule{get_string(j, "column", context)};
  } else if (kind == "domain") {
    reject_unknown_keys(j, {"id", "kind", "column"}, context);
    c.rule = DomainRule{get_string(j, "column", context)};
  } else if (kind == "unique") {
    reject_unknown_keys(j, {"id", "kind", "columns"}, context);
    c.rule = UniqueRule{string_list(j, "columns", context)};
  } else if (kind == "referential") {
    reject_unknown_keys(j, {"id", "kind", "columns", "parent_table", "parent_columns"},
                        context);
    c.rule = ReferentialRule{string_list(j, "columns", context),
                             get_string(j, "parent_table", context),
                             string_list(j, "parent_columns", context)};
  } else if (kind == "check") {
    reject_unknown_keys(j, {"id", "kind", "column", "op", "value", "other_column"},
                        context);
    CheckRule rule;
    rule.column = get_string(j, "column", context);
    auto op = check_op_from_name(get_string(j, "op", context));
    if (!op) throw ParseError(context + ": unknown comparison operator");
    rule.op = *op;
    bool has_value = j.contains("value");
    bool has_other = j.contains("other_column");
    if (has_value == has_other) {
      throw ParseError(context + ": provide exactly one of 'value' or 'other_column'");
    }
    if (has_other) {
      rule.other_column = get_string(j, "other_column", context);
    } else {
      const ColumnSpec* col = schema.column(rule.column);
      Kind literal_kind = col ? col->kind : Kind::Text;
      rule.literal = cell_from_json(j.at("value"), literal_kind, context);
      if (rule.literal->is_null()) {
        throw ParseError(context + ": check literal cannot be null");
      }
    }
    c.rule = std::move(rule);
  } else {
    throw ParseError(context + ": unknown constraint kind '" + kind + "'");
  }
  return c;
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw StorageError("cannot open " + path.string());
  Json j = Json::parse(in, nullptr, false);
  if (j.is_discarded()) throw ParseError("malformed JSON in " + path.string());
  return j;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw StorageError("cannot write " + path.string());
  out << text;
  if (!out) throw StorageError("write failed for " + path.string());
}

}  // namespace

Json table_schema_to_json(const TableSchema& schema,
                          const std::vector<Constraint>& constraints) {
  Json columns = Json::array();
  for (const auto& col : schema.columns) {
    Json c{{"name", col.name},
           {"kind", kind_name(col.kind)},
           {"nullable", col.nullable},
           {"required", col.required}};
    if (col.domain) c["domain"] = domain_to_json(*col.domain);
    if (!col.description.empty()) c["description"] = col.description;
    if (col.temporal_role != TemporalRole::None) {
      c["temporal_role"] = temporal_role_name(col.temporal_role);
    }
    columns.push_back(std::move(c));
  }
  Json j{{"name", schema.name},
         {"columns", std::move(columns)},
         {"primary_key", schema.primary_key}};
  if (!schema.description.empty()) j["description"] = schema.description;
  Json cs = Json::array();
  for (const auto& c : constraints) {
    if (c.table == schema.name) cs.push_back(constraint_to_json(c));
  }
  if (!cs.empty()) j["constraints"] = std::move(cs);
  return j;
}

void table_schema_from_json(const Json& j, const std::string& source,
                            TableSchema& schema_out,
                            std::vector<Constraint>& constraints_out) {
  require_object(j, source);
  reject_unknown_keys(j, {"name", "description", "columns", "primary_key", "constraints"},
                      source);
  TableSchema schema;
  schema.name = get_string(j, "name", source);
  if (j.contains("description")) schema.description = get_string(j, "description", source);

  const Json& columns = require_key(j, "columns", source);
  if (!columns.is_array()) throw ParseError(source + ": 'columns' must be an array");
  for (const auto& cj : columns) {
    require_object(cj, source);
    ColumnSpec col;
    col.name = get_string(cj, "name", source);
    std::string context = source + " column '" + col.name + "'";
    reject_unknown_keys(cj,
                        {"name", "kind", "nullable", "required", "domain",
                         "description", "temporal_role"},
                        context);
    auto kind = kind_from_name(get_string(cj, "kind", context));
    if (!kind) throw ParseError(context + ": unknown kind");
    col.kind = *kind;
    col.nullable = get_bool(cj, "nullable", context, true);
    col.required = get_bool(cj, "required", context, false);
    if (cj.contains("description")) {
      col.description = get_string(cj, "description", context);
    }
    if (cj.contains("temporal_role")) {
      auto role = temporal_role_from_name(get_string(cj, "temporal_role", context));
      if (!role) throw ParseError(context + ": unknown temporal_role");
      col.temporal_role = *role;
    }
    if (cj.contains("domain") && !cj.at("domain").is_null()) {
      col.domain = domain_from_json(cj.at("domain"), col.kind, context);
    }
    schema.columns.push_back(std::move(col));
  }
  schema.primary_key = string_list(j, "primary_key", source);

  if (auto it = j.find("constraints"); it != j.end()) {
    if (!it->is_array()) throw ParseError(source + ": 'constraints' must be an array");
    for (const auto& cj : *it) {
      constraints_out.push_back(constraint_from_json(cj, schema.name, schema, source));
    }
  }
  schema_out = std::move(schema);
}

Row parse_row(const std::vector<std::string>& fields, const TableSchema& schema,
              std::size_t row_index) {
  if (fields.size() != schema.columns.size()) {
    throw ParseError("table '" + schema.name + "' row " + std::to_string(row_index) +
                     ": expected " + std::to_string(schema.columns.size()) +
                     " fields, got " + std::to_string(fields.size()));
  }
  Row row;
  row.reserve(fields.size());
  for (std::size_t c = 0; c < fields.size(); ++c) {
    try {
      row.push_back(parse_cell(fields[c], schema.columns[c].kind));
    } catch (const ParseError& e) {
      throw ParseError("table '" + schema.name + "' row " + std::to_string(row_index) +
                       " column '" + schema.columns[c].name + "': " + e.what());
    }
  }
  return row;
}

Warehouse load_warehouse(const std::filesystem::path& root) {
  if (!std::filesystem::is_directory(root)) {
    throw StorageError("warehouse directory not found: " + root.string());
  }
  Warehouse warehouse;

  std::vector<std::filesystem::path> sidecars;
  std::vector<std::filesystem::path> csvs;
  for (const auto& entry : std::filesystem::directory_iterator(root)) {
    if (!entry.is_regular_file()) continue;
    std::string name = entry.path().filename().string();
    if (name.size() > std::strlen(kSchemaSuffix) &&
        name.ends_with(kSchemaSuffix)) {
      sidecars.push_back(entry.path());
    } else if (name.ends_with(".csv")) {
      csvs.push_back(entry.path());
    }
  }
  std::sort(sidecars.begin(), sidecars.end());
  std::sort(csvs.begin(), csvs.end());

  for (const auto& path : sidecars) {
    Json j = read_json_file(path);
    TableSchema schema;
    table_schema_from_json(j, path.filename().string(), schema, warehouse.constraints);
    std::string stem = path.filename().string();
    stem.resize(stem.size() - std::strlen(kSchemaSuffix));
    if (stem != schema.name) {
      throw ParseError(path.filename().string() + ": table name '" + schema.name +
                       "' does not match file name");
    }
    if (warehouse.schemas.count(schema.name)) {
      throw ParseError("duplicate table '" + schema.name + "'");
    }
    warehouse.schemas.emplace(schema.name, std::move(schema));
  }

  for (const auto& path : csvs) {
    std::string table = path.stem().string();
    auto it = warehouse.schemas.find(table);
    if (it == warehouse.schemas.end()) {
      throw ParseError("data file '" + path.filename().string() +
                       "' has no schema sidecar");
    }
    const TableSchema& schema = it->second;
    std::ifstream in(path);
    if (!in) throw StorageError("cannot open " + path.string());
    auto records = csv::parse(in);
    if (records.empty()) {
      throw ParseError("table '" + table + "': missing header row");
    }
    std::vector<std::string> expected_header;
    for (const auto& col : schema.columns) expected_header.push_back(col.name);
    if (records[0] != expected_header) {
      throw ParseError("table '" + table + "': header row does not match schema columns");
    }
    Dataset ds;
    ds.table = table;
    for (std::size_t r = 1; r < records.size(); ++r) {
      ds.rows.push_back(parse_row(records[r], schema, r - 1));
    }
    warehouse.datasets.emplace(table, std::move(ds));
  }

  // Tables whose sidecar has no data file yet load as empty.
  for (const auto& [name, schema] : warehouse.schemas) {
    if (!warehouse.datasets.count(name)) {
      warehouse.datasets.emplace(name, Dataset{name, {}});
    }
  }

  warehouse.validate();
  return warehouse;
}

void save_warehouse(const Warehouse& warehouse, const std::filesystem::path& root) {
  std::filesystem::create_directories(root);
  for (const auto& [name, schema] : warehouse.schemas) {
    Json j = table_schema_to_json(schema, warehouse.constraints);
    write_text_file(root / (name + kSchemaSuffix), j.dump(2) + "\n");

    std::vector<std::vector<std::string>> records;
    std::vector<std::string> header;
    for (const auto& col : schema.columns) header.push_back(col.name);
    records.push_back(std::move(header));
    const Dataset& ds = warehouse.dataset(name);
    for (const Row& row : ds.rows) {
      std::vector<std::string> fields;
      fields.reserve(row.size());
      for (const Cell& cell : row) fields.push_back(format_cell(cell));
      records.push_back(std::move(fields));
    }
    std::ostringstream out;
    csv::write(out, records);
    write_text_file(root / (name + ".csv"), out.str());
  }
}

}  // namespace dqe
