#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dqe/json_util.hpp"
#include "dqe/numeric.hpp"
#include "dqe/tabular.hpp"

namespace dqe {

// Who cares about quality. The five roles are a closed catalog; concerns
// stay free text.
enum class StakeholderRole {
  DecisionMaker,
  DwAdministrator,
  DwDesigner,
  DwProgrammer,
  ExecutiveManager,
};

const char* stakeholder_role_name(StakeholderRole role);
std::optional<StakeholderRole> stakeholder_role_from_name(const std::string& name);

struct Stakeholder {
  std::string id;
  std::string name;
  StakeholderRole role = StakeholderRole::DecisionMaker;
  std::vector<std::string> concerns;

  bool operator==(const Stakeholder&) const = default;
};

// Abstract quality aspect. Descriptive only; evaluation never consults it.
struct QualityDimension {
  std::string id;
  std::string name;
  std::string description;

  bool operator==(const QualityDimension&) const = default;
};

enum class ObjectScope { Warehouse, Table, Column };

// What a goal or metric is about: the whole warehouse, one table, or one
// column of one table.
struct ObjectRef {
  ObjectScope scope = ObjectScope::Warehouse;
  std::string table;   // Table and Column scopes
  std::string column;  // Column scope only

  static ObjectRef warehouse() { return {}; }
  static ObjectRef for_table(std::string t) {
    return {ObjectScope::Table, std::move(t), {}};
  }
  static ObjectRef for_column(std::string t, std::string c) {
    return {ObjectScope::Column, std::move(t), std::move(c)};
  }

  std::string to_string() const;
  bool operator==(const ObjectRef&) const = default;
};

struct QualityGoal {
  std::string id;
  std::string stakeholder_id;
  std::string purpose;
  std::string dimension_id;
  ObjectRef object;
  std::vector<std::string> query_ids;  // non-empty

  bool operator==(const QualityGoal&) const = default;
};

// A query passes iff every referenced metric's verdict passes (fixed ALL
// rule; there is no per-query combinator).
struct QualityQuery {
  std::string id;
  std::vector<std::string> metric_ids;  // non-empty

  bool operator==(const QualityQuery&) const = default;
};

enum class AgentKind {
  Completeness,
  Accessibility,
  Consistency,
  Accuracy,
  Credibility,
  Currency,
  Volatility,
  Interpretability,
  DefectRatio,
};

const char* agent_kind_name(AgentKind kind);
std::optional<AgentKind> agent_kind_from_name(const std::string& name);

struct AutomatedAgent {
  AgentKind kind = AgentKind::Completeness;
  bool operator==(const AutomatedAgent&) const = default;
};

struct DeclaredAgent {
  std::string source;  // label of the human/process supplying values
  bool operator==(const DeclaredAgent&) const = default;
};

using AgentBinding = std::variant<AutomatedAgent, DeclaredAgent>;

enum class Unit { Count, Percent, Ratio, ManHours, BooleanCount };

const char* unit_name(Unit unit);
std::optional<Unit> unit_from_name(const std::string& name);

// Closed interval of acceptable actual values; both ends inclusive.
struct Interval {
  Rational lo;
  Rational hi;

  bool contains(const Rational& v) const { return lo <= v && v <= hi; }
  bool operator==(const Interval&) const = default;
};

struct MetricSpec {
  std::string id;
  std::string parameter;  // one of the catalog names, verbatim
  ObjectRef object;
  AgentBinding agent = DeclaredAgent{};
  Unit unit = Unit::Count;
  Interval expected;
  Json params = Json::object();  // agent-specific settings

  bool is_automated() const { return std::holds_alternative<AutomatedAgent>(agent); }
  bool operator==(const MetricSpec&) const = default;
};

struct QualityModelDoc {
  std::vector<Stakeholder> stakeholders;
  std::vector<QualityDimension> dimensions;
  std::vector<QualityGoal> goals;
  std::vector<QualityQuery> queries;
  std::vector<MetricSpec> metrics;

  const Stakeholder* stakeholder(const std::string& id) const;
  const QualityDimension* dimension(const std::string& id) const;
  const QualityGoal* goal(const std::string& id) const;
  const QualityQuery* query(const std::string& id) const;
  const MetricSpec* metric(const std::string& id) const;

  bool operator==(const QualityModelDoc&) const = default;
};

// The 23 quality parameters, names verbatim, in catalog order.
const std::vector<std::string>& parameter_catalog();

// The eight parameters whose metric can be computed from warehouse
// content; everything else takes declared measurements only.
bool parameter_is_data_computable(const std::string& parameter);

// The agent kind that computes a data-computable parameter's own metric.
std::optional<AgentKind> canonical_agent_kind(const std::string& parameter);

// Structural validation. Returns human-readable defects, empty when the
// model is sound. Pass the warehouse to also resolve object references;
// with nullptr only model-internal invariants are checked.
std::vector<std::string> validate_model(const QualityModelDoc& model,
                                        const Warehouse* warehouse);

// Metrics reachable from a goal: query order, then metric order within
// each query, duplicates dropped keeping the first occurrence. Throws
// InputError on an unknown goal id.
std::vector<MetricSpec> resolve_goal(const QualityModelDoc& model,
                                     const std::string& goal_id);

Json object_ref_to_json(const ObjectRef& ref);
ObjectRef object_ref_from_json(const Json& j, const std::string& context);

Json model_to_json(const QualityModelDoc& model);
QualityModelDoc model_from_json(const Json& j);

}  // namespace dqe
