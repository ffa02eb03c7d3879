#include "dqe/quality_model.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

#include "dqe/error.hpp"

namespace dqe {

namespace {

const char* kRoleNames[] = {"decision_maker", "dw_administrator", "dw_designer",
                            "dw_programmer", "executive_manager"};

const char* kAgentKindNames[] = {"completeness", "accessibility", "consistency",
                                 "accuracy",     "credibility",   "currency",
                                 "volatility",   "interpretability", "defect_ratio"};

const char* kUnitNames[] = {"count", "percent", "ratio", "man_hours", "boolean_count"};

template <typename T>
const T* find_by_id(const std::vector<T>& items, const std::string& id) {
  for (const auto& item : items) {
    if (item.id == id) return &item;
  }
  return nullptr;
}

}  // namespace

const char* stakeholder_role_name(StakeholderRole role) {
  return kRoleNames[static_cast<int>(role)];
}

std::optional<StakeholderRole> stakeholder_role_from_name(const std::string& name) {
  for (int i = 0; i < 5; ++i) {
    if (name == kRoleNames[i]) return static_cast<StakeholderRole>(i);
  }
  return std::nullopt;
}

const char* agent_kind_name(AgentKind kind) {
  return kAgentKindNames[static_cast<int>(kind)];
}

std::optional<AgentKind> agent_kind_from_name(const std::string& name) {
  for (int i = 0; i < 9; ++i) {
    if (name == kAgentKindNames[i]) return static_cast<AgentKind>(i);
  }
  return std::nullopt;
}

const char* unit_name(Unit unit) { return kUnitNames[static_cast<int>(unit)]; }

std::optional<Unit> unit_from_name(const std::string& name) {
  for (int i = 0; i < 5; ++i) {
    if (name == kUnitNames[i]) return static_cast<Unit>(i);
  }
  return std::nullopt;
}

std::string ObjectRef::to_string() const {
  switch (scope) {
    case ObjectScope::Warehouse: return "warehouse";
    case ObjectScope::Table: return "table:" + table;
    case ObjectScope::Column: return "column:" + table + "." + column;
  }
  return "warehouse";
}

const Stakeholder* QualityModelDoc::stakeholder(const std::string& id) const {
  return find_by_id(stakeholders, id);
}
const QualityDimension* QualityModelDoc::dimension(const std::string& id) const {
  return find_by_id(dimensions, id);
}
const QualityGoal* QualityModelDoc::goal(const std::string& id) const {
  return find_by_id(goals, id);
}
const QualityQuery* QualityModelDoc::query(const std::string& id) const {
  return find_by_id(queries, id);
}
const MetricSpec* QualityModelDoc::metric(const std::string& id) const {
  return find_by_id(metrics, id);
}

const std::vector<std::string>& parameter_catalog() {
  static const std::vector<std::string> catalog = {
      "Functionality",
      "Reliability",
      "Usability",
      "Efficiency",
      "Maintainability",
      "Portability",
      "Accessibility",
      "Accuracy",
      "Consistency",
      "Security",
      "Compliance",
      "Recoverability",
      "Analyzability",
      "Changeability",
      "Testability",
      "Install ability",
      "Implementation Efficiency",
      "System Availability",
      "Currency",
      "Volatility",
      "Completeness",
      "Credibility",
      "Data Interpretability",
  };
  return catalog;
}

bool parameter_is_data_computable(const std::string& parameter) {
  return canonical_agent_kind(parameter).has_value();
}

std::optional<AgentKind> canonical_agent_kind(const std::string& parameter) {
  if (parameter == "Accessibility") return AgentKind::Accessibility;
  if (parameter == "Accuracy") return AgentKind::Accuracy;
  if (parameter == "Consistency") return AgentKind::Consistency;
  if (parameter == "Currency") return AgentKind::Currency;
  if (parameter == "Volatility") return AgentKind::Volatility;
  if (parameter == "Completeness") return AgentKind::Completeness;
  if (parameter == "Credibility") return AgentKind::Credibility;
  if (parameter == "Data Interpretability") return AgentKind::Interpretability;
  return std::nullopt;
}

namespace {

// The unit each automated agent reports in; a spec declaring anything
// else can never match its own measurements.
Unit agent_unit(AgentKind kind) {
  switch (kind) {
    case AgentKind::Completeness: return Unit::Percent;
    case AgentKind::DefectRatio: return Unit::Ratio;
    default: return Unit::Count;
  }
}

void check_object_ref(const ObjectRef& ref, const Warehouse& warehouse,
                      const std::string& owner, std::vector<std::string>& defects) {
  switch (ref.scope) {
    case ObjectScope::Warehouse:
      return;
    case ObjectScope::Table:
      if (!warehouse.has_table(ref.table)) {
        defects.push_back(owner + ": object table '" + ref.table +
                          "' not in the warehouse");
      }
      return;
    case ObjectScope::Column: {
      if (!warehouse.has_table(ref.table)) {
        defects.push_back(owner + ": object table '" + ref.table +
                          "' not in the warehouse");
        return;
      }
      if (!warehouse.schema(ref.table).column(ref.column)) {
        defects.push_back(owner + ": object column '" + ref.table + "." + ref.column +
                          "' not in the warehouse");
      }
      return;
    }
  }
}

template <typename T>
void check_unique_ids(const std::vector<T>& items, const char* kind,
                      std::vector<std::string>& defects) {
  std::set<std::string> seen;
  for (const auto& item : items) {
    if (item.id.empty()) {
      defects.push_back(std::string(kind) + " with empty id");
    } else if (!seen.insert(item.id).second) {
      defects.push_back(std::string(kind) + " id '" + item.id + "' declared twice");
    }
  }
}

}  // namespace

std::vector<std::string> validate_model(const QualityModelDoc& model,
                                        const Warehouse* warehouse) {
  std::vector<std::string> defects;
  check_unique_ids(model.stakeholders, "stakeholder", defects);
  check_unique_ids(model.dimensions, "dimension", defects);
  check_unique_ids(model.goals, "goal", defects);
  check_unique_ids(model.queries, "query", defects);
  check_unique_ids(model.metrics, "metric", defects);

  for (const auto& dim : model.dimensions) {
    if (dim.name.empty()) {
      defects.push_back("dimension '" + dim.id + "': name is empty");
    }
  }

  for (const auto& goal : model.goals) {
    std::string owner = "goal '" + goal.id + "'";
    if (!model.stakeholder(goal.stakeholder_id)) {
      defects.push_back(owner + ": unknown stakeholder '" + goal.stakeholder_id + "'");
    }
    if (!model.dimension(goal.dimension_id)) {
      defects.push_back(owner + ": unknown dimension '" + goal.dimension_id + "'");
    }
    if (goal.query_ids.empty()) {
      defects.push_back(owner + ": no queries");
    }
    for (const auto& qid : goal.query_ids) {
      if (!model.query(qid)) {
        defects.push_back(owner + ": unknown query '" + qid + "'");
      }
    }
    if (warehouse) check_object_ref(goal.object, *warehouse, owner, defects);
  }

  for (const auto& query : model.queries) {
    std::string owner = "query '" + query.id + "'";
    if (query.metric_ids.empty()) {
      defects.push_back(owner + ": no metrics");
    }
    for (const auto& mid : query.metric_ids) {
      if (!model.metric(mid)) {
        defects.push_back(owner + ": unknown metric '" + mid + "'");
      }
    }
  }

  const auto& catalog = parameter_catalog();
  for (const auto& metric : model.metrics) {
    std::string owner = "metric '" + metric.id + "'";
    if (std::find(catalog.begin(), catalog.end(), metric.parameter) == catalog.end()) {
      defects.push_back(owner + ": unknown parameter '" + metric.parameter + "'");
    }
    if (!(metric.expected.lo <= metric.expected.hi)) {
      defects.push_back(owner + ": malformed interval (lo " + metric.expected.lo.to_string() +
                        " > hi " + metric.expected.hi.to_string() + ")");
    }
    if (const auto* automated = std::get_if<AutomatedAgent>(&metric.agent)) {
      auto canonical = canonical_agent_kind(metric.parameter);
      if (!canonical) {
        defects.push_back(owner + ": parameter requires declared agent ('" +
                          metric.parameter + "' is not computable from warehouse data)");
      } else if (automated->kind != *canonical &&
                 automated->kind != AgentKind::DefectRatio) {
        defects.push_back(owner + ": agent '" + agent_kind_name(automated->kind) +
                          "' does not measure parameter '" + metric.parameter + "'");
      }
      if (metric.unit != agent_unit(automated->kind)) {
        defects.push_back(owner + ": agent '" + agent_kind_name(automated->kind) +
                          "' reports " + unit_name(agent_unit(automated->kind)) +
                          ", spec declares " + unit_name(metric.unit));
      }
    } else if (std::get<DeclaredAgent>(metric.agent).source.empty()) {
      defects.push_back(owner + ": declared agent without a source label");
    }
    if (warehouse) check_object_ref(metric.object, *warehouse, owner, defects);
  }
  return defects;
}

std::vector<MetricSpec> resolve_goal(const QualityModelDoc& model,
                                     const std::string& goal_id) {
  const QualityGoal* goal = model.goal(goal_id);
  if (!goal) throw InputError("unknown goal '" + goal_id + "'");
  std::vector<MetricSpec> out;
  std::set<std::string> seen;
  for (const auto& qid : goal->query_ids) {
    const QualityQuery* query = model.query(qid);
    if (!query) throw InputError("goal '" + goal_id + "': unknown query '" + qid + "'");
    for (const auto& mid : query->metric_ids) {
      const MetricSpec* spec = model.metric(mid);
      if (!spec) throw InputError("query '" + qid + "': unknown metric '" + mid + "'");
      if (seen.insert(mid).second) out.push_back(*spec);
    }
  }
  return out;
}

Json object_ref_to_json(const ObjectRef& ref) {
  switch (ref.scope) {
    case ObjectScope::Warehouse:
      return Json{{"scope", "warehouse"}};
    case ObjectScope::Table:
      return Json{{"scope", "table"}, {"table", ref.table}};
    case ObjectScope::Column:
      return Json{{"scope", "column"}, {"table", ref.table}, {"column", ref.column}};
  }
  return Json{{"scope", "warehouse"}};
}

ObjectRef object_ref_from_json(const Json& j, const std::string& context) {
  require_object(j, context);
  reject_unknown_keys(j, {"scope", "table", "column"}, context);
  std::string scope = get_string(j, "scope", context);
  if (scope == "warehouse") {
    reject_unknown_keys(j, {"scope"}, context);
    return ObjectRef::warehouse();
  }
  if (scope == "table") {
    reject_unknown_keys(j, {"scope", "table"}, context);
    return ObjectRef::for_table(get_string(j, "table", context));
  }
  if (scope == "column") {
    return ObjectRef::for_column(get_string(j, "table", context),
                                 get_string(j, "column", context));
  }
  throw ParseError(context + ": unknown scope '" + scope + "'");
}

namespace {

Json agent_to_json(const AgentBinding& agent) {
  if (const auto* automated = std::get_if<AutomatedAgent>(&agent)) {
    return Json{{"type", "automated"}, {"kind", agent_kind_name(automated->kind)}};
  }
  return Json{{"type", "declared"}, {"source", std::get<DeclaredAgent>(agent).source}};
}

AgentBinding agent_from_json(const Json& j, const std::string& context) {
  require_object(j, context);
  std::string type = get_string(j, "type", context);
  if (type == "automated") {
    reject_unknown_keys(j, {"type", "kind"}, context);
    auto kind = agent_kind_from_name(get_string(j, "kind", context));
    if (!kind) {
      throw ParseError(context + ": unknown agent kind '" +
                       get_string(j, "kind", context) + "'");
    }
    return AutomatedAgent{*kind};
  }
  if (type == "declared") {
    reject_unknown_keys(j, {"type", "source"}, context);
    return DeclaredAgent{get_string(j, "source", context)};
  }
  throw ParseError(context + ": unknown agent type '" + type + "'");
}

std::vector<std::string> string_list(const Json& j, const std::string& key,
                                     const std::string& context, bool required) {
  auto it = j.find(key);
  if (it == j.end()) {
    if (required) throw ParseError(context + ": missing key '" + key + "'");
    return {};
  }
  if (!it->is_array()) {
    throw ParseError(context + ": key '" + key + "' must be an array");
  }
  std::vector<std::string> out;
  for (const auto& item : *it) {
    if (!item.is_string()) {
      throw ParseError(context + ": key '" + key + "' must contain strings");
    }
    out.push_back(item.get<std::string>());
  }
  return out;
}

}  // namespace

Json model_to_json(const QualityModelDoc& model) {
  Json j = Json::object();
  j["stakeholders"] = Json::array();
  for (const auto& s : model.stakeholders) {
    j["stakeholders"].push_back(Json{{"id", s.id},
                                     {"name", s.name},
                                     {"role", stakeholder_role_name(s.role)},
                                     {"concerns", s.concerns}});
  }
  j["dimensions"] = Json::array();
  for (const auto& d : model.dimensions) {
    j["dimensions"].push_back(
        Json{{"id", d.id}, {"name", d.name}, {"description", d.description}});
  }
  j["goals"] = Json::array();
  for (const auto& g : model.goals) {
    j["goals"].push_back(Json{{"id", g.id},
                              {"stakeholder_id", g.stakeholder_id},
                              {"purpose", g.purpose},
                              {"dimension_id", g.dimension_id},
                              {"object_ref", object_ref_to_json(g.object)},
                              {"query_ids", g.query_ids}});
  }
  j["queries"] = Json::array();
  for (const auto& q : model.queries) {
    j["queries"].push_back(Json{{"id", q.id}, {"metric_ids", q.metric_ids}});
  }
  j["metrics"] = Json::array();
  for (const auto& m : model.metrics) {
    j["metrics"].push_back(Json{{"id", m.id},
                                {"parameter", m.parameter},
                                {"object_ref", object_ref_to_json(m.object)},
                                {"agent", agent_to_json(m.agent)},
                                {"unit", unit_name(m.unit)},
                                {"expected",
                                 Json{{"lo", rational_to_json(m.expected.lo)},
                                      {"hi", rational_to_json(m.expected.hi)}}},
                                {"params", m.params}});
  }
  return j;
}

QualityModelDoc model_from_json(const Json& j) {
  require_object(j, "quality model");
  reject_unknown_keys(j, {"stakeholders", "dimensions", "goals", "queries", "metrics"},
                      "quality model");
  QualityModelDoc model;

  auto section = [&](const char* key) -> const Json& {
    static const Json empty = Json::array();
    auto it = j.find(key);
    if (it == j.end()) return empty;
    if (!it->is_array()) {
      throw ParseError(std::string("quality model: '") + key + "' must be an array");
    }
    return *it;
  };

  for (const auto& sj : section("stakeholders")) {
    std::string context = "stakeholder";
    require_object(sj, context);
    Stakeholder s;
    s.id = get_string(sj, "id", context);
    context = "stakeholder '" + s.id + "'";
    reject_unknown_keys(sj, {"id", "name", "role", "concerns"}, context);
    s.name = sj.contains("name") ? get_string(sj, "name", context) : "";
    auto role = stakeholder_role_from_name(get_string(sj, "role", context));
    if (!role) {
      throw ParseError(context + ": unknown role '" + get_string(sj, "role", context) +
                       "'");
    }
    s.role = *role;
    s.concerns = string_list(sj, "concerns", context, false);
    model.stakeholders.push_back(std::move(s));
  }

  for (const auto& dj : section("dimensions")) {
    std::string context = "dimension";
    require_object(dj, context);
    QualityDimension d;
    d.id = get_string(dj, "id", context);
    context = "dimension '" + d.id + "'";
    reject_unknown_keys(dj, {"id", "name", "description"}, context);
    d.name = get_string(dj, "name", context);
    d.description = dj.contains("description") ? get_string(dj, "description", context) : "";
    model.dimensions.push_back(std::move(d));
  }

  for (const auto& gj : section("goals")) {
    std::string context = "goal";
    require_object(gj, context);
    QualityGoal g;
    g.id = get_string(gj, "id", context);
    context = "goal '" + g.id + "'";
    reject_unknown_keys(
        gj, {"id", "stakeholder_id", "purpose", "dimension_id", "object_ref", "query_ids"},
        context);
    g.stakeholder_id = get_string(gj, "stakeholder_id", context);
    g.purpose = gj.contains("purpose") ? get_string(gj, "purpose", context) : "";
    g.dimension_id = get_string(gj, "dimension_id", context);
    g.object = object_ref_from_json(require_key(gj, "object_ref", context), context);
    g.query_ids = string_list(gj, "query_ids", context, true);
    model.goals.push_back(std::move(g));
  }

  for (const auto& qj : section("queries")) {
    std::string context = "query";
    require_object(qj, context);
    QualityQuery q;
    q.id = get_string(qj, "id", context);
    context = "query '" + q.id + "'";
    reject_unknown_keys(qj, {"id", "metric_ids"}, context);
    q.metric_ids = string_list(qj, "metric_ids", context, true);
    model.queries.push_back(std::move(q));
  }

  for (const auto& mj : section("metrics")) {
    std::string context = "metric";
    require_object(mj, context);
    MetricSpec m;
    m.id = get_string(mj, "id", context);
    context = "metric '" + m.id + "'";
    reject_unknown_keys(
        mj, {"id", "parameter", "object_ref", "agent", "unit", "expected", "params"},
        context);
    m.parameter = get_string(mj, "parameter", context);
    m.object = object_ref_from_json(require_key(mj, "object_ref", context), context);
    m.agent = agent_from_json(require_key(mj, "agent", context), context);
    auto unit = unit_from_name(get_string(mj, "unit", context));
    if (!unit) {
      throw ParseError(context + ": unknown unit '" + get_string(mj, "unit", context) +
                       "'");
    }
    m.unit = *unit;
    const Json& ej = require_key(mj, "expected", context);
    require_object(ej, context + " expected");
    reject_unknown_keys(ej, {"lo", "hi"}, context + " expected");
    m.expected.lo = rational_from_json(require_key(ej, "lo", context), context + " lo");
    m.expected.hi = rational_from_json(require_key(ej, "hi", context), context + " hi");
    if (mj.contains("params")) {
      if (!mj["params"].is_object()) {
        throw ParseError(context + ": 'params' must be an object");
      }
      m.params = mj["params"];
    }
    model.metrics.push_back(std::move(m));
  }

  return model;
}

}  // namespace dqe
