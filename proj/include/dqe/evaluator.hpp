#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dqe/agents.hpp"
#include "dqe/quality_model.hpp"

namespace dqe {

enum class VerdictStatus { Pass, Fail, Missing };

const char* verdict_status_name(VerdictStatus status);

// One metric compared against its expected interval. `missing` means no
// measurement was available; it is not a failure.
struct Verdict {
  std::string metric_id;
  std::optional<Rational> actual;
  Interval expected;
  Unit unit = Unit::Count;
  VerdictStatus status = VerdictStatus::Missing;
  std::optional<Timestamp> timestamp;
  std::string agent_id;

  bool operator==(const Verdict&) const = default;
};

enum class GoalStatus { Achieved, NotAchieved, Indeterminate };

const char* goal_status_name(GoalStatus status);

struct QueryStatus {
  std::string query_id;
  GoalStatus status = GoalStatus::Indeterminate;

  bool operator==(const QueryStatus&) const = default;
};

// achieved: every contributing metric passes. not_achieved: at least one
// fails. indeterminate: no failure but at least one verdict missing.
struct GoalVerdict {
  std::string goal_id;
  GoalStatus status = GoalStatus::Indeterminate;
  std::vector<QueryStatus> queries;
  std::vector<Verdict> verdicts;  // query order, duplicates dropped

  bool operator==(const GoalVerdict&) const = default;
};

struct QualityReport {
  Timestamp run_timestamp;
  std::string warehouse_identity;
  std::vector<Verdict> verdicts;    // every model metric, ordered by id
  std::vector<GoalVerdict> goals;   // every model goal, ordered by id
  // Summaries lifted from the supplied measurements, not recomputed.
  std::vector<Measurement> defect_ratio_summary;
  std::vector<Measurement> completeness_summary;

  bool operator==(const QualityReport&) const = default;
};

// Inclusive containment; a boundary value passes. Pass measurement =
// nullptr for a missing verdict. Throws InputError on unit mismatch.
Verdict evaluate_metric(const Measurement* measurement, const MetricSpec& spec);

// Rolls verdicts up through the goal's queries. Metrics without an entry
// in `verdicts` are treated as missing; a dangling query reference leaves
// that query (and so the goal) indeterminate instead of throwing.
GoalVerdict evaluate_goal(const QualityModelDoc& model, const QualityGoal& goal,
                          const std::map<std::string, Verdict>& verdicts);

// Latest measurement per metric wins when the list carries history.
QualityReport build_report(const QualityModelDoc& model,
                           const std::vector<Measurement>& measurements,
                           const std::string& warehouse_identity,
                           Timestamp run_timestamp);

Json report_to_json(const QualityReport& report);
std::string render_report_text(const QualityReport& report);

// Value formatting shared by reports: percent and ratio render with two
// decimal places, counts as exact decimals.
std::string render_value(const Rational& value, Unit unit);

}  // namespace dqe
