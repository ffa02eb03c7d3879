#include "dqe/evaluator.hpp"

#include <algorithm>
#include <set>
#include <tuple>

#include "dqe/error.hpp"

namespace dqe {

namespace {

const char* kVerdictNames[] = {"pass", "fail", "missing"};
const char* kGoalNames[] = {"achieved", "not_achieved", "indeterminate"};

// Two-decimal rendering of an exact rational, rounding half up.
std::string two_places(const Rational& r) {
  using i128 = __int128;
  bool negative = r.num < 0;
  i128 n = negative ? -static_cast<i128>(r.num) : r.num;
  i128 d = r.den;
  i128 hundredths = (n * 100 * 2 + d) / (2 * d);
  std::string digits;
  i128 whole = hundredths / 100;
  i128 frac = hundredths % 100;
  if (whole == 0) {
    digits = "0";
  } else {
    while (whole > 0) {
      digits += static_cast<char>('0' + static_cast<int>(whole % 10));
      whole /= 10;
    }
    std::reverse(digits.begin(), digits.end());
  }
  digits += '.';
  digits += static_cast<char>('0' + static_cast<int>(frac / 10));
  digits += static_cast<char>('0' + static_cast<int>(frac % 10));
  return negative ? "-" + digits : digits;
}

std::string render_interval(const Interval& interval) {
  return "[" + interval.lo.to_string() + ", " + interval.hi.to_string() + "]";
}

// Left-aligned layout with two-space gutters; the last column is not
// padded so lines carry no trailing spaces.
std::string align_rows(const std::vector<std::vector<std::string>>& rows,
                       const std::string& indent) {
  std::size_t columns = 0;
  for (const auto& row : rows) columns = std::max(columns, row.size());
  std::vector<std::size_t> widths(columns, 0);
  for (const auto& row : rows) {
    for (std::size_t c = 0; c + 1 < row.size(); ++c) {
      widths[c] = std::max(widths[c], row[c].size());
    }
  }
  std::string out;
  for (const auto& row : rows) {
    out += indent;
    for (std::size_t c = 0; c < row.size(); ++c) {
      out += row[c];
      if (c + 1 < row.size()) {
        out.append(widths[c] - row[c].size() + 2, ' ');
      }
    }
    out += '\n';
  }
  return out;
}

}  // namespace

const char* verdict_status_name(VerdictStatus status) {
  return kVerdictNames[static_cast<int>(status)];
}

const char* goal_status_name(GoalStatus status) {
  return kGoalNames[static_cast<int>(status)];
}

std::string render_value(const Rational& value, Unit unit) {
  if (unit == Unit::Percent || unit == Unit::Ratio) return two_places(value);
  return value.to_string();
}

Verdict evaluate_metric(const Measurement* measurement, const MetricSpec& spec) {
  Verdict v;
  v.metric_id = spec.id;
  v.expected = spec.expected;
  v.unit = spec.unit;
  if (!measurement) {
    v.status = VerdictStatus::Missing;
    return v;
  }
  if (measurement->unit != spec.unit) {
    throw InputError("metric '" + spec.id + "': measurement unit " +
                     unit_name(measurement->unit) + " does not match the " +
                     std::string(unit_name(spec.unit)) + " spec");
  }
  v.actual = measurement->value;
  v.timestamp = measurement->timestamp;
  v.agent_id = measurement->agent_id;
  v.status = spec.expected.contains(measurement->value) ? VerdictStatus::Pass
                                                        : VerdictStatus::Fail;
  return v;
}

namespace {

GoalStatus roll_up(bool any_fail, bool any_missing) {
  if (any_fail) return GoalStatus::NotAchieved;
  if (any_missing) return GoalStatus::Indeterminate;
  return GoalStatus::Achieved;
}

}  // namespace

GoalVerdict evaluate_goal(const QualityModelDoc& model, const QualityGoal& goal,
                          const std::map<std::string, Verdict>& verdicts) {
  auto verdict_of = [&](const std::string& metric_id) -> Verdict {
    auto it = verdicts.find(metric_id);
    if (it != verdicts.end()) return it->second;
    Verdict missing;
    missing.metric_id = metric_id;
    if (const MetricSpec* spec = model.metric(metric_id)) {
      missing.expected = spec->expected;
      missing.unit = spec->unit;
    }
    return missing;
  };

  GoalVerdict gv;
  gv.goal_id = goal.id;
  bool goal_fail = false, goal_missing = false;
  for (const auto& qid : goal.query_ids) {
    const QualityQuery* query = model.query(qid);
    bool fail = false, missing = false;
    if (query) {
      for (const auto& mid : query->metric_ids) {
        switch (verdict_of(mid).status) {
          case VerdictStatus::Fail: fail = true; break;
          case VerdictStatus::Missing: missing = true; break;
          case VerdictStatus::Pass: break;
        }
      }
    } else {
      missing = true;  // dangling query reference never counts as achieved
    }
    gv.queries.push_back({qid, roll_up(fail, missing)});
    goal_fail = goal_fail || fail;
    goal_missing = goal_missing || missing;
  }
  std::set<std::string> seen;
  for (const auto& qid : goal.query_ids) {
    const QualityQuery* query = model.query(qid);
    if (!query) continue;
    for (const auto& mid : query->metric_ids) {
      if (seen.insert(mid).second) gv.verdicts.push_back(verdict_of(mid));
    }
  }
  gv.status = roll_up(goal_fail, goal_missing);
  return gv;
}

QualityReport build_report(const QualityModelDoc& model,
                           const std::vector<Measurement>& measurements,
                           const std::string& warehouse_identity,
                           Timestamp run_timestamp) {
  QualityReport report;
  report.run_timestamp = run_timestamp;
  report.warehouse_identity = warehouse_identity;

  std::map<std::string, Measurement> latest;
  for (const auto& m : measurements) {
    auto it = latest.find(m.metric_id);
    if (it == latest.end() || it->second.timestamp.seconds <= m.timestamp.seconds) {
      latest.insert_or_assign(m.metric_id, m);
    }
  }

  std::map<std::string, Verdict> by_metric;
  for (const auto& spec : model.metrics) {
    auto it = latest.find(spec.id);
    by_metric[spec.id] = evaluate_metric(it == latest.end() ? nullptr : &it->second, spec);
  }
  for (const auto& [id, verdict] : by_metric) report.verdicts.push_back(verdict);

  std::vector<const QualityGoal*> goals;
  for (const auto& goal : model.goals) goals.push_back(&goal);
  std::sort(goals.begin(), goals.end(),
            [](const QualityGoal* a, const QualityGoal* b) { return a->id < b->id; });
  for (const QualityGoal* goal : goals) {
    report.goals.push_back(evaluate_goal(model, *goal, by_metric));
  }

  for (const auto& [id, m] : latest) {
    if (m.unit == Unit::Percent && m.agent_id == agent_kind_name(AgentKind::Completeness)) {
      report.completeness_summary.push_back(m);
    }
    if (m.unit == Unit::Ratio && m.agent_id == agent_kind_name(AgentKind::DefectRatio)) {
      report.defect_ratio_summary.push_back(m);
    }
  }
  auto by_object = [](const Measurement& a, const Measurement& b) {
    return std::tie(a.object.table, a.metric_id) < std::tie(b.object.table, b.metric_id);
  };
  std::sort(report.completeness_summary.begin(), report.completeness_summary.end(),
            by_object);
  std::sort(report.defect_ratio_summary.begin(), report.defect_ratio_summary.end(),
            by_object);
  return report;
}

Json report_to_json(const QualityReport& report) {
  Json j;
  j["run_timestamp"] = report.run_timestamp.to_string();
  j["warehouse"] = report.warehouse_identity;

  j["verdicts"] = Json::array();
  for (const auto& v : report.verdicts) {
    Json vj;
    vj["metric_id"] = v.metric_id;
    vj["status"] = verdict_status_name(v.status);
    vj["actual"] = v.actual ? rational_to_json(*v.actual) : Json(nullptr);
    vj["expected"] = Json{{"lo", rational_to_json(v.expected.lo)},
                          {"hi", rational_to_json(v.expected.hi)}};
    vj["unit"] = unit_name(v.unit);
    vj["timestamp"] = v.timestamp ? Json(v.timestamp->to_string()) : Json(nullptr);
    vj["agent"] = v.agent_id;
    j["verdicts"].push_back(std::move(vj));
  }

  j["goals"] = Json::array();
  for (const auto& g : report.goals) {
    Json gj;
    gj["id"] = g.goal_id;
    gj["status"] = goal_status_name(g.status);
    gj["queries"] = Json::array();
    for (const auto& q : g.queries) {
      gj["queries"].push_back(Json{{"id", q.query_id}, {"status", goal_status_name(q.status)}});
    }
    gj["metric_ids"] = Json::array();
    for (const auto& v : g.verdicts) gj["metric_ids"].push_back(v.metric_id);
    j["goals"].push_back(std::move(gj));
  }

  j["completeness_summary"] = Json::array();
  for (const auto& m : report.completeness_summary) {
    Json mj;
    mj["metric_id"] = m.metric_id;
    mj["table"] = m.object.table;
    mj["percent"] = rational_to_json(m.value);
    if (m.detail) {
      mj["incomplete"] = m.detail->numerator;
      mj["records"] = m.detail->denominator;
    }
    j["completeness_summary"].push_back(std::move(mj));
  }

  j["defect_ratio_summary"] = Json::array();
  for (const auto& m : report.defect_ratio_summary) {
    Json mj;
    mj["metric_id"] = m.metric_id;
    mj["table"] = m.object.table;
    mj["ratio"] = rational_to_json(m.value);
    if (m.detail) {
      mj["non_defective"] = m.detail->numerator;
      mj["records"] = m.detail->denominator;
    }
    j["defect_ratio_summary"].push_back(std::move(mj));
  }
  return j;
}

std::string render_report_text(const QualityReport& report) {
  std::string out = "quality report\n";
  out += "  run:       " + report.run_timestamp.to_string() + "\n";
  out += "  warehouse: " + report.warehouse_identity + "\n";

  out += "\ngoals\n";
  if (report.goals.empty()) {
    out += "  (none)\n";
  } else {
    for (const auto& g : report.goals) {
      out += "  " + g.goal_id + "  " + goal_status_name(g.status) + "\n";
      for (const auto& q : g.queries) {
        out += "    query " + q.query_id + "  " + goal_status_name(q.status) + "\n";
      }
    }
  }

  out += "\nmetrics\n";
  if (report.verdicts.empty()) {
    out += "  (none)\n";
  } else {
    std::vector<std::vector<std::string>> rows;
    rows.push_back({"id", "status", "actual", "expected", "unit", "agent"});
    for (const auto& v : report.verdicts) {
      rows.push_back({v.metric_id, verdict_status_name(v.status),
                      v.actual ? render_value(*v.actual, v.unit) : "-",
                      render_interval(v.expected), unit_name(v.unit),
                      v.agent_id.empty() ? "-" : v.agent_id});
    }
    out += align_rows(rows, "  ");
  }

  if (!report.completeness_summary.empty()) {
    out += "\ncompleteness\n";
    std::vector<std::vector<std::string>> rows;
    rows.push_back({"table", "percent", "incomplete/records"});
    for (const auto& m : report.completeness_summary) {
      std::string counts = m.detail ? std::to_string(m.detail->numerator) + "/" +
                                          std::to_string(m.detail->denominator)
                                    : "-";
      rows.push_back({m.object.table, render_value(m.value, m.unit), counts});
    }
    out += align_rows(rows, "  ");
  }

  if (!report.defect_ratio_summary.empty()) {
    out += "\ndefect ratio\n";
    std::vector<std::vector<std::string>> rows;
    rows.push_back({"table", "ratio", "non-defective/records"});
    for (const auto& m : report.defect_ratio_summary) {
      std::string counts = m.detail ? std::to_string(m.detail->numerator) + "/" +
                                          std::to_string(m.detail->denominator)
                                    : "-";
      rows.push_back({m.object.table, render_value(m.value, m.unit), counts});
    }
    out += align_rows(rows, "  ");
  }
  return out;
}

}  // namespace dqe
