#include "dqe/agents.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <unordered_map>

#include "dqe/error.hpp"

namespace dqe {

namespace {

bool row_incomplete(const Row& row, const TableSchema& schema) {
  for (std::size_t c = 0; c < schema.columns.size(); ++c) {
    if (schema.columns[c].required && row[c].is_null()) return true;
  }
  return false;
}

Measurement base(AgentKind kind, Unit unit, ObjectRef object, Rational value,
                 std::int64_t numerator, std::int64_t denominator) {
  Measurement m;
  m.object = std::move(object);
  m.value = value;
  m.unit = unit;
  m.agent_id = agent_kind_name(kind);
  m.detail = MeasurementDetail{numerator, denominator};
  return m;
}

std::string join_columns(const std::vector<std::string>& cols) {
  std::string out;
  for (const auto& c : cols) {
    if (!out.empty()) out += ", ";
    out += c;
  }
  return out;
}

}  // namespace

DefectPredicateSet DefectPredicateSet::defaults(const Warehouse& warehouse,
                                                const std::string& table) {
  DefectPredicateSet set;
  set.predicates.push_back(IncompleteRecordPredicate{});
  set.predicates.push_back(ViolationPredicate{warehouse.constraint_ids_for(table)});
  return set;
}

Measurement measure_completeness(const Dataset& ds, const TableSchema& schema) {
  std::int64_t incomplete = 0;
  for (const Row& row : ds.rows) {
    if (row_incomplete(row, schema)) ++incomplete;
  }
  auto r = static_cast<std::int64_t>(ds.rows.size());
  Rational value = r == 0 ? Rational{} : Rational::from_counts(100 * incomplete, r);
  return base(AgentKind::Completeness, Unit::Percent, ObjectRef::for_table(ds.table),
              value, incomplete, r);
}

Measurement measure_accessibility(const Dataset& ds, const TableSchema& schema) {
  std::int64_t nulls = 0;
  std::int64_t cells = 0;
  for (std::size_t c = 0; c < schema.columns.size(); ++c) {
    if (schema.columns[c].nullable) continue;
    for (const Row& row : ds.rows) {
      ++cells;
      if (row[c].is_null()) ++nulls;
    }
  }
  return base(AgentKind::Accessibility, Unit::Count, ObjectRef::for_table(ds.table),
              Rational::from_int(nulls), nulls, cells);
}

Measurement measure_consistency(const Warehouse& warehouse,
                                const std::vector<std::string>& constraint_ids) {
  std::set<std::pair<std::string, std::size_t>> records;
  std::set<std::string> tables;
  for (const auto& v : find_violations(warehouse, constraint_ids)) {
    records.emplace(v.table, v.row_index);
  }
  for (const auto& id : constraint_ids) tables.insert(warehouse.constraint(id)->table);
  std::int64_t scanned = 0;
  for (const auto& t : tables) {
    scanned += static_cast<std::int64_t>(warehouse.dataset(t).rows.size());
  }
  auto count = static_cast<std::int64_t>(records.size());
  return base(AgentKind::Consistency, Unit::Count, ObjectRef::warehouse(),
              Rational::from_int(count), count, scanned);
}

AccuracyResult measure_accuracy_credibility(const Dataset& ds, const TableSchema& schema,
                                            const Dataset& baseline,
                                            const TableSchema& baseline_schema,
                                            const std::vector<std::string>& key_columns,
                                            const std::vector<std::string>& compared_columns) {
  if (key_columns.empty()) throw InputError("accuracy agent needs key columns");
  auto index_of = [](const TableSchema& s, const std::string& name,
                     const char* side) {
    auto idx = s.column_index(name);
    if (!idx) {
      throw InputError(std::string("accuracy agent: no column '") + name + "' in " +
                       side + " table '" + s.name + "'");
    }
    return *idx;
  };
  std::vector<std::size_t> key_idx, bkey_idx, cmp_idx, bcmp_idx;
  for (const auto& k : key_columns) {
    key_idx.push_back(index_of(schema, k, "measured"));
    bkey_idx.push_back(index_of(baseline_schema, k, "baseline"));
  }
  for (const auto& c : compared_columns) {
    cmp_idx.push_back(index_of(schema, c, "measured"));
    bcmp_idx.push_back(index_of(baseline_schema, c, "baseline"));
  }

  auto key_of = [](const Row& row, const std::vector<std::size_t>& idx)
      -> std::optional<std::string> {
    std::string key;
    for (std::size_t i : idx) {
      if (row[i].is_null()) return std::nullopt;
      key += format_cell(row[i]);
      key += '\x1f';
    }
    return key;
  };

  std::unordered_map<std::string, const Row*> by_key;
  for (const Row& brow : baseline.rows) {
    auto key = key_of(brow, bkey_idx);
    if (!key) {
      throw InputError("accuracy agent: baseline '" + baseline.table +
                       "' has a NULL key (" + join_columns(key_columns) + ")");
    }
    if (!by_key.emplace(*key, &brow).second) {
      throw InputError("accuracy agent: duplicate key in baseline '" + baseline.table +
                       "' (" + join_columns(key_columns) + ")");
    }
  }

  std::int64_t accurate = 0, inaccurate = 0, unmatched = 0;
  for (const Row& row : ds.rows) {
    auto key = key_of(row, key_idx);
    const Row* match = nullptr;
    if (key) {
      auto it = by_key.find(*key);
      if (it != by_key.end()) match = it->second;
    }
    if (!match) {
      ++unmatched;
      continue;
    }
    bool agrees = true;
    for (std::size_t k = 0; k < cmp_idx.size(); ++k) {
      const Cell& a = row[cmp_idx[k]];
      const Cell& b = (*match)[bcmp_idx[k]];
      if (a.is_null() && b.is_null()) continue;  // both missing: agrees
      auto cmp = compare_cells(a, b);
      if (!cmp || *cmp != 0) {
        agrees = false;
        break;
      }
    }
    if (agrees) {
      ++accurate;
    } else {
      ++inaccurate;
    }
  }

  auto r = static_cast<std::int64_t>(ds.rows.size());
  AccuracyResult result;
  result.accuracy = base(AgentKind::Accuracy, Unit::Count, ObjectRef::for_table(ds.table),
                         Rational::from_int(accurate), accurate, r);
  result.credibility =
      base(AgentKind::Credibility, Unit::Count, ObjectRef::for_table(ds.table),
           Rational::from_int(inaccurate), inaccurate, r);
  result.unmatched = unmatched;
  return result;
}

namespace {

Measurement measure_temporal(const Dataset& ds, const TableSchema& schema,
                             TemporalRole role, AgentKind kind) {
  auto col = schema.temporal_column(role);
  if (!col) {
    throw InputError(std::string("table '") + schema.name + "' designates no " +
                     temporal_role_name(role) + " column");
  }
  std::int64_t missing = 0;
  for (const Row& row : ds.rows) {
    if (row[*col].is_null()) ++missing;
  }
  return base(kind, Unit::Count, ObjectRef::for_table(ds.table),
              Rational::from_int(missing), missing,
              static_cast<std::int64_t>(ds.rows.size()));
}

}  // namespace

Measurement measure_currency(const Dataset& ds, const TableSchema& schema) {
  return measure_temporal(ds, schema, TemporalRole::TransactionTime, AgentKind::Currency);
}

Measurement measure_volatility(const Dataset& ds, const TableSchema& schema) {
  return measure_temporal(ds, schema, TemporalRole::ValidTime, AgentKind::Volatility);
}

Measurement measure_interpretability(const Warehouse& warehouse) {
  auto blank = [](const std::string& s) {
    return std::all_of(s.begin(), s.end(),
                       [](unsigned char c) { return std::isspace(c) != 0; });
  };
  std::int64_t undocumented = 0, elements = 0;
  for (const auto& [name, schema] : warehouse.schemas) {
    ++elements;
    if (blank(schema.description)) ++undocumented;
    for (const auto& col : schema.columns) {
      ++elements;
      if (blank(col.description)) ++undocumented;
    }
  }
  return base(AgentKind::Interpretability, Unit::Count, ObjectRef::warehouse(),
              Rational::from_int(undocumented), undocumented, elements);
}

Measurement compute_defect_ratio(const Dataset& ds, const TableSchema& schema,
                                 const Warehouse& warehouse,
                                 const DefectPredicateSet& predicates) {
  if (predicates.predicates.empty()) {
    throw InputError("defect ratio needs at least one predicate");
  }
  std::set<std::size_t> defective;
  for (const auto& predicate : predicates.predicates) {
    if (std::holds_alternative<IncompleteRecordPredicate>(predicate)) {
      for (std::size_t r = 0; r < ds.rows.size(); ++r) {
        if (row_incomplete(ds.rows[r], schema)) defective.insert(r);
      }
    } else {
      const auto& ids = std::get<ViolationPredicate>(predicate).constraint_ids;
      for (const auto& v : find_violations(warehouse, ids)) {
        if (v.table == ds.table) defective.insert(v.row_index);
      }
    }
  }
  auto r = static_cast<std::int64_t>(ds.rows.size());
  auto ndr = r - static_cast<std::int64_t>(defective.size());
  Rational value = r == 0 ? Rational::from_int(1) : Rational::from_counts(ndr, r);
  return base(AgentKind::DefectRatio, Unit::Ratio, ObjectRef::for_table(ds.table), value,
              ndr, r);
}

std::vector<Measurement> ingest_declared(const Json& manifest,
                                         const QualityModelDoc& model,
                                         Timestamp ingestion_time) {
  if (!manifest.is_array()) {
    throw ParseError("declared manifest must be a JSON array");
  }
  std::vector<Measurement> out;
  for (const auto& entry : manifest) {
    require_object(entry, "declared entry");
    std::string metric_id = get_string(entry, "metric_id", "declared entry");
    std::string context = "declared entry for '" + metric_id + "'";
    reject_unknown_keys(entry, {"metric_id", "value", "unit", "source", "timestamp"},
                        context);
    const MetricSpec* spec = model.metric(metric_id);
    if (!spec) throw InputError(context + ": unknown metric id");
    if (spec->is_automated()) {
      throw InputError(context + ": metric uses an automated agent");
    }
    auto unit = unit_from_name(get_string(entry, "unit", context));
    if (!unit) {
      throw InputError(context + ": unknown unit '" +
                       get_string(entry, "unit", context) + "'");
    }
    if (*unit != spec->unit) {
      throw InputError(context + ": unit " + unit_name(*unit) + " does not match the " +
                       std::string(unit_name(spec->unit)) + " spec");
    }
    Measurement m;
    m.metric_id = metric_id;
    m.object = spec->object;
    m.value = rational_from_json(require_key(entry, "value", context), context);
    m.unit = *unit;
    if (m.value < Rational{}) {
      throw InputError(context + ": value must not be negative");
    }
    if (m.unit == Unit::Percent && Rational::from_int(100) < m.value) {
      throw InputError(context + ": percent value above 100");
    }
    if (m.unit == Unit::Ratio && Rational::from_int(1) < m.value) {
      throw InputError(context + ": ratio value above 1");
    }
    if (entry.contains("timestamp")) {
      auto ts = Timestamp::parse(get_string(entry, "timestamp", context));
      if (!ts) throw ParseError(context + ": bad timestamp");
      m.timestamp = *ts;
    } else {
      m.timestamp = ingestion_time;
    }
    m.agent_id = entry.contains("source") ? get_string(entry, "source", context)
                                          : std::get<DeclaredAgent>(spec->agent).source;
    out.push_back(std::move(m));
  }
  return out;
}

void DeclaredPool::add(Measurement m) {
  auto it = latest_.find(m.metric_id);
  if (it == latest_.end() || it->second.timestamp.seconds <= m.timestamp.seconds) {
    latest_.insert_or_assign(m.metric_id, std::move(m));
  }
}

const Measurement* DeclaredPool::latest(const std::string& metric_id) const {
  auto it = latest_.find(metric_id);
  return it == latest_.end() ? nullptr : &it->second;
}

namespace {

const Dataset& table_dataset(const MetricSpec& spec, const Warehouse& warehouse) {
  if (spec.object.scope != ObjectScope::Table) {
    throw InputError("metric '" + spec.id + "': agent '" +
                     agent_kind_name(std::get<AutomatedAgent>(spec.agent).kind) +
                     "' needs a table object, got " + spec.object.to_string());
  }
  if (!warehouse.has_table(spec.object.table)) {
    throw InputError("metric '" + spec.id + "': table '" + spec.object.table +
                     "' not in the warehouse");
  }
  return warehouse.dataset(spec.object.table);
}

std::vector<std::string> param_string_list(const MetricSpec& spec, const char* key) {
  std::vector<std::string> out;
  auto it = spec.params.find(key);
  if (it == spec.params.end()) return out;
  if (!it->is_array()) {
    throw InputError("metric '" + spec.id + "': param '" + key + "' must be an array");
  }
  for (const auto& item : *it) {
    if (!item.is_string()) {
      throw InputError("metric '" + spec.id + "': param '" + key +
                       "' must contain strings");
    }
    out.push_back(item.get<std::string>());
  }
  return out;
}

std::vector<std::string> consistency_constraints(const MetricSpec& spec,
                                                 const Warehouse& warehouse) {
  if (spec.params.contains("constraints")) {
    auto ids = param_string_list(spec, "constraints");
    for (const auto& id : ids) {
      if (!warehouse.constraint(id)) {
        throw InputError("metric '" + spec.id + "': unknown constraint '" + id + "'");
      }
    }
    return ids;
  }
  if (spec.object.scope == ObjectScope::Table) {
    return warehouse.constraint_ids_for(spec.object.table);
  }
  return warehouse.constraint_ids();
}

DefectPredicateSet defect_predicates(const MetricSpec& spec, const Warehouse& warehouse,
                                     const std::string& table) {
  if (!spec.params.contains("predicates")) {
    return DefectPredicateSet::defaults(warehouse, table);
  }
  const Json& pj = spec.params["predicates"];
  if (!pj.is_array() || pj.empty()) {
    throw InputError("metric '" + spec.id + "': 'predicates' must be a non-empty array");
  }
  DefectPredicateSet set;
  for (const auto& entry : pj) {
    require_object(entry, "metric '" + spec.id + "' predicate");
    std::string type = get_string(entry, "type", "metric '" + spec.id + "' predicate");
    if (type == "incomplete_record") {
      set.predicates.push_back(IncompleteRecordPredicate{});
    } else if (type == "violation_of") {
      ViolationPredicate vp;
      auto it = entry.find("constraints");
      if (it == entry.end() || !it->is_array()) {
        throw InputError("metric '" + spec.id +
                         "': violation_of predicate needs a 'constraints' array");
      }
      for (const auto& id : *it) {
        if (!id.is_string() || !warehouse.constraint(id.get<std::string>())) {
          throw InputError("metric '" + spec.id + "': unknown constraint in predicate");
        }
        vp.constraint_ids.push_back(id.get<std::string>());
      }
      set.predicates.push_back(std::move(vp));
    } else {
      throw InputError("metric '" + spec.id + "': unknown predicate type '" + type + "'");
    }
  }
  return set;
}

Measurement dispatch_automated(const MetricSpec& spec, AgentKind kind,
                               const Warehouse& warehouse) {
  switch (kind) {
    case AgentKind::Completeness: {
      const Dataset& ds = table_dataset(spec, warehouse);
      return measure_completeness(ds, warehouse.schema(ds.table));
    }
    case AgentKind::Accessibility: {
      const Dataset& ds = table_dataset(spec, warehouse);
      return measure_accessibility(ds, warehouse.schema(ds.table));
    }
    case AgentKind::Consistency:
      return measure_consistency(warehouse, consistency_constraints(spec, warehouse));
    case AgentKind::Accuracy:
    case AgentKind::Credibility: {
      const Dataset& ds = table_dataset(spec, warehouse);
      const TableSchema& schema = warehouse.schema(ds.table);
      auto it = spec.params.find("baseline");
      if (it == spec.params.end() || !it->is_string()) {
        throw InputError("metric '" + spec.id + "': param 'baseline' must name a table");
      }
      std::string baseline = it->get<std::string>();
      if (!warehouse.has_table(baseline)) {
        throw InputError("metric '" + spec.id + "': baseline table '" + baseline +
                         "' not in the warehouse");
      }
      auto key = param_string_list(spec, "key");
      if (key.empty()) key = schema.primary_key;
      auto compared = param_string_list(spec, "compared");
      if (compared.empty()) {
        for (const auto& col : schema.columns) {
          if (std::find(key.begin(), key.end(), col.name) == key.end()) {
            compared.push_back(col.name);
          }
        }
      }
      auto result = measure_accuracy_credibility(ds, schema, warehouse.dataset(baseline),
                                                 warehouse.schema(baseline), key, compared);
      return kind == AgentKind::Accuracy ? result.accuracy : result.credibility;
    }
    case AgentKind::Currency: {
      const Dataset& ds = table_dataset(spec, warehouse);
      return measure_currency(ds, warehouse.schema(ds.table));
    }
    case AgentKind::Volatility: {
      const Dataset& ds = table_dataset(spec, warehouse);
      return measure_volatility(ds, warehouse.schema(ds.table));
    }
    case AgentKind::Interpretability:
      return measure_interpretability(warehouse);
    case AgentKind::DefectRatio: {
      const Dataset& ds = table_dataset(spec, warehouse);
      return compute_defect_ratio(ds, warehouse.schema(ds.table), warehouse,
                                  defect_predicates(spec, warehouse, ds.table));
    }
  }
  throw InputError("metric '" + spec.id + "': unhandled agent kind");
}

}  // namespace

Measurement dispatch(const MetricSpec& spec, const Warehouse& warehouse,
                     const QualityModelDoc& model, const DeclaredPool& pool,
                     Timestamp now) {
  (void)model;
  if (const auto* automated = std::get_if<AutomatedAgent>(&spec.agent)) {
    Measurement m = dispatch_automated(spec, automated->kind, warehouse);
    m.metric_id = spec.id;
    m.object = spec.object;
    m.timestamp = now;
    if (m.unit != spec.unit) {
      throw InputError("metric '" + spec.id + "': agent reports " +
                       std::string(unit_name(m.unit)) + ", spec declares " +
                       unit_name(spec.unit));
    }
    return m;
  }
  const Measurement* declared = pool.latest(spec.id);
  if (!declared) {
    throw MeasurementMissingError("metric '" + spec.id +
                                  "': no declared measurement available");
  }
  return *declared;
}

std::vector<Measurement> run_all(const QualityModelDoc& model, const Warehouse& warehouse,
                                 const DeclaredPool& pool, Timestamp now,
                                 std::vector<std::string>* skipped) {
  std::vector<Measurement> out;
  for (const auto& spec : model.metrics) {
    try {
      out.push_back(dispatch(spec, warehouse, model, pool, now));
    } catch (const MeasurementMissingError&) {
      if (skipped) skipped->push_back(spec.id);
    }
  }
  return out;
}

}  // namespace dqe
