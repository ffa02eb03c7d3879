#include "dqe/cli.hpp"

#include <ctime>
#include <fstream>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"

#include "dqe/agents.hpp"
#include "dqe/cleanse.hpp"
#include "dqe/csv.hpp"
#include "dqe/error.hpp"
#include "dqe/evaluator.hpp"
#include "dqe/lint.hpp"
#include "dqe/quality_model.hpp"
#include "dqe/repository.hpp"
#include "dqe/tabular_io.hpp"

namespace dqe {

namespace {

struct CommonOpts {
  std::string repo = "quality_repo";
  std::string warehouse = ".";
  std::string format = "text";
  std::string at;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--repo", opts.repo, "Metadata repository root")
      ->capture_default_str();
  cmd->add_option("--warehouse", opts.warehouse, "Warehouse directory")
      ->capture_default_str();
  cmd->add_option("--format", opts.format, "Output format")
      ->check(CLI::IsMember({"json", "text"}))
      ->capture_default_str();
  cmd->add_option("--at", opts.at,
                  "Clock override (YYYY-MM-DDTHH:MM:SSZ) for reproducible runs");
}

Timestamp clock_now(const CommonOpts& opts) {
  if (!opts.at.empty()) {
    auto ts = Timestamp::parse(opts.at);
    if (!ts) {
      throw InputError("--at: bad timestamp '" + opts.at +
                       "' (want YYYY-MM-DDTHH:MM:SSZ)");
    }
    return *ts;
  }
  return Timestamp{static_cast<std::int64_t>(std::time(nullptr))};
}

bool json_format(const CommonOpts& opts) { return opts.format == "json"; }

// Model plus warehouse, cross-validated; most subcommands start here.
struct LoadedContext {
  Repository repo;
  QualityModelDoc model;
  Warehouse warehouse;
};

LoadedContext load_context(const CommonOpts& opts) {
  Repository repo = Repository::open(opts.repo);
  QualityModelDoc model = repo.load_model();
  Warehouse warehouse = load_warehouse(opts.warehouse);
  auto defects = validate_model(model, &warehouse);
  if (!defects.empty()) {
    std::string msg = "model does not fit the warehouse:";
    for (const auto& d : defects) msg += "\n  " + d;
    throw InputError(msg);
  }
  return {std::move(repo), std::move(model), std::move(warehouse)};
}

std::vector<MeasurementRecord> to_records(const std::vector<Measurement>& measurements,
                                          const std::string& run_id) {
  std::vector<MeasurementRecord> records;
  for (std::size_t i = 0; i < measurements.size(); ++i) {
    records.push_back({measurements[i], run_id, i});
  }
  return records;
}

struct MeasureOutcome {
  std::string run_id;
  std::vector<Measurement> measurements;
  std::vector<std::string> skipped;
};

// Shared by measure and evaluate: run every agent once, persist the run.
MeasureOutcome perform_run(LoadedContext& ctx, Timestamp now) {
  MeasureOutcome outcome;
  DeclaredPool pool = ctx.repo.declared_pool(ctx.model, now);
  outcome.measurements =
      run_all(ctx.model, ctx.warehouse, pool, now, &outcome.skipped);
  outcome.run_id = ctx.repo.next_run_id(now);
  ctx.repo.append_measurements(to_records(outcome.measurements, outcome.run_id));
  return outcome;
}

void warn_skipped(const MeasureOutcome& outcome, std::ostream& err) {
  for (const auto& id : outcome.skipped) {
    err << "warning: metric '" << id << "' has no declared measurement yet\n";
  }
}

int cmd_measure(const CommonOpts& opts, std::ostream& out, std::ostream& err) {
  LoadedContext ctx = load_context(opts);
  Timestamp now = clock_now(opts);
  MeasureOutcome outcome = perform_run(ctx, now);
  warn_skipped(outcome, err);
  if (json_format(opts)) {
    Json j;
    j["run_id"] = outcome.run_id;
    j["measurements"] = Json::array();
    for (const auto& m : outcome.measurements) {
      j["measurements"].push_back(measurement_to_json(m));
    }
    out << j.dump(2) << "\n";
  } else {
    out << "run " << outcome.run_id << " (" << outcome.measurements.size()
        << " measurements)\n";
    for (const auto& m : outcome.measurements) {
      out << "  " << m.metric_id << "  " << render_value(m.value, m.unit) << " "
          << unit_name(m.unit) << "  [" << m.agent_id << "]\n";
    }
  }
  return 0;
}

int evaluate_exit_code(const QualityReport& report, bool strict) {
  bool indeterminate = false;
  for (const auto& goal : report.goals) {
    if (goal.status == GoalStatus::NotAchieved) return 1;
    indeterminate = indeterminate || goal.status == GoalStatus::Indeterminate;
  }
  return strict && indeterminate ? 1 : 0;
}

void warn_indeterminate(const QualityReport& report, std::ostream& err) {
  for (const auto& goal : report.goals) {
    if (goal.status == GoalStatus::Indeterminate) {
      err << "warning: goal '" << goal.goal_id
          << "' is indeterminate (measurements missing)\n";
    }
  }
}

int cmd_evaluate(const CommonOpts& opts, bool strict, std::ostream& out,
                 std::ostream& err) {
  LoadedContext ctx = load_context(opts);
  Timestamp now = clock_now(opts);
  MeasureOutcome outcome = perform_run(ctx, now);
  warn_skipped(outcome, err);
  QualityReport report =
      build_report(ctx.model, outcome.measurements, opts.warehouse, now);
  if (json_format(opts)) {
    out << report_to_json(report).dump(2) << "\n";
  } else {
    out << render_report_text(report);
  }
  warn_indeterminate(report, err);
  return evaluate_exit_code(report, strict);
}

int cmd_report(const CommonOpts& opts, std::ostream& out, std::ostream&) {
  LoadedContext ctx = load_context(opts);
  Timestamp now = clock_now(opts);
  std::vector<Measurement> measurements;
  for (auto& record : ctx.repo.all_measurements()) {
    measurements.push_back(std::move(record.measurement));
  }
  QualityReport report = build_report(ctx.model, measurements, opts.warehouse, now);
  if (json_format(opts)) {
    out << report_to_json(report).dump(2) << "\n";
  } else {
    out << render_report_text(report);
  }
  return 0;
}

int cmd_audit(const CommonOpts& opts, const std::vector<std::string>& constraint_ids,
              std::ostream& out, std::ostream&) {
  Warehouse warehouse = load_warehouse(opts.warehouse);
  std::vector<std::string> ids =
      constraint_ids.empty() ? warehouse.constraint_ids() : constraint_ids;
  AuditReport report = audit(warehouse, ids, clock_now(opts));
  if (json_format(opts)) {
    out << audit_to_json(report).dump(2) << "\n";
  } else {
    out << render_audit_text(report);
  }
  return 0;
}

int cmd_admit(const CommonOpts& opts, const std::string& table,
              const std::string& input, bool commit, std::ostream& out,
              std::ostream&) {
  Warehouse warehouse = load_warehouse(opts.warehouse);
  if (!warehouse.has_table(table)) {
    throw InputError("no table '" + table + "' in the warehouse");
  }
  const TableSchema& schema = warehouse.schema(table);

  std::ifstream in(input, std::ios::binary);
  if (!in) throw InputError("cannot read batch file '" + input + "'");
  auto records = csv::parse(in);
  if (records.empty()) throw InputError("batch file '" + input + "' has no header row");
  std::vector<std::string> expected_header;
  for (const auto& col : schema.columns) expected_header.push_back(col.name);
  if (records.front() != expected_header) {
    throw InputError("batch header does not match the columns of table '" + table + "'");
  }
  std::vector<Row> batch;
  for (std::size_t i = 1; i < records.size(); ++i) {
    batch.push_back(parse_row(records[i], schema, i - 1));
  }

  AdmissionResult result = admit(batch, warehouse, table, warehouse.constraint_ids());

  if (json_format(opts)) {
    Json j;
    j["table"] = table;
    j["submitted"] = batch.size();
    j["accepted"] = result.accepted_indices;
    j["rejected"] = Json::array();
    for (const auto& r : result.rejected) {
      j["rejected"].push_back(Json{{"row", r.batch_index}, {"reasons", r.reasons}});
    }
    j["committed"] = commit;
    out << j.dump(2) << "\n";
  } else {
    out << "accepted " << result.accepted.size() << " of " << batch.size()
        << " rows into '" << table << "'\n";
    for (const auto& r : result.rejected) {
      std::string reasons;
      for (const auto& reason : r.reasons) {
        if (!reasons.empty()) reasons += ", ";
        reasons += reason;
      }
      out << "  row " << r.batch_index << " rejected: " << reasons << "\n";
    }
  }

  if (commit && !result.accepted.empty()) {
    Warehouse updated = warehouse;
    auto& rows = updated.datasets.at(table).rows;
    rows.insert(rows.end(), result.accepted.begin(), result.accepted.end());
    save_warehouse(updated, opts.warehouse);
  }
  return result.rejected.empty() ? 0 : 1;
}

struct TargetSpec {
  std::string table;
  std::size_t row = 0;
  std::optional<std::string> column;
};

TargetSpec parse_target(const std::string& text) {
  std::vector<std::string> parts;
  std::string part;
  std::istringstream in(text);
  while (std::getline(in, part, ':')) parts.push_back(part);
  if (parts.size() < 2 || parts.size() > 3) {
    throw InputError("bad target '" + text + "' (want table:row or table:row:column)");
  }
  TargetSpec spec;
  spec.table = parts[0];
  try {
    std::size_t used = 0;
    spec.row = std::stoul(parts[1], &used);
    if (used != parts[1].size()) throw std::invalid_argument("");
  } catch (const std::exception&) {
    throw InputError("bad target '" + text + "': row must be a non-negative integer");
  }
  if (parts.size() == 3) spec.column = parts[2];
  return spec;
}

int cmd_filter(const CommonOpts& opts, const std::string& mode,
               const std::vector<std::string>& target_args,
               const std::vector<std::string>& violating, const std::string& reason,
               std::ostream& out, std::ostream&) {
  Warehouse warehouse = load_warehouse(opts.warehouse);
  Timestamp now = clock_now(opts);

  std::vector<CellTarget> cells;
  std::vector<RowTarget> rows;
  for (const auto& arg : target_args) {
    TargetSpec spec = parse_target(arg);
    if (mode == "elements") {
      if (!spec.column) {
        throw InputError("element targets need table:row:column, got '" + arg + "'");
      }
      cells.push_back({spec.table, spec.row, *spec.column});
    } else {
      if (spec.column) {
        throw InputError(mode + " targets take table:row, got '" + arg + "'");
      }
      rows.push_back({spec.table, spec.row});
    }
  }
  if (!violating.empty()) {
    for (const auto& v : find_violations(warehouse, violating)) {
      if (mode == "elements") {
        for (const auto& column : v.columns) {
          cells.push_back({v.table, v.row_index, column});
        }
      } else {
        rows.push_back({v.table, v.row_index});
      }
    }
  }

  CleansingLog log;
  Warehouse post = warehouse;
  if (mode == "elements") {
    post = reason.empty() ? filter_elements(warehouse, cells, log, now)
                          : filter_elements(warehouse, cells, log, now, reason);
  } else if (mode == "rows") {
    post = reason.empty() ? filter_rows(warehouse, rows, log, now)
                          : filter_rows(warehouse, rows, log, now, reason);
  } else {
    post = reason.empty() ? filter_groups(warehouse, rows, log, now)
                          : filter_groups(warehouse, rows, log, now, reason);
  }

  Repository repo = Repository::init(opts.repo);
  std::string run_id = repo.next_run_id(now);
  repo.write_cleansing_log(run_id, log);
  save_warehouse(post, opts.warehouse);

  if (json_format(opts)) {
    Json j;
    j["mode"] = mode;
    j["run_id"] = run_id;
    j["entries"] = Json::array();
    for (const auto& entry : log.entries) {
      j["entries"].push_back(cleansing_entry_to_json(entry));
    }
    out << j.dump(2) << "\n";
  } else {
    out << "filter " << mode << ": " << log.entries.size()
        << (mode == "elements" ? " cells nulled" : " rows removed") << " (run "
        << run_id << ")\n";
    for (const auto& entry : log.entries) {
      out << "  " << entry.table << "[" << entry.row_index << "]";
      if (entry.column) out << "." << *entry.column;
      out << "  " << entry.reason << "\n";
    }
  }
  return 0;
}

int cmd_correct(const CommonOpts& opts, const std::string& rules_path, std::ostream& out,
                std::ostream&) {
  Warehouse warehouse = load_warehouse(opts.warehouse);
  Timestamp now = clock_now(opts);

  std::ifstream in(rules_path, std::ios::binary);
  if (!in) throw InputError("cannot read rules file '" + rules_path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  Json rules_json;
  try {
    rules_json = Json::parse(buffer.str());
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("rules file: ") + e.what());
  }
  auto rules = correction_rules_from_json(rules_json);

  auto violations = find_violations(warehouse, warehouse.constraint_ids());
  CleansingLog log;
  Warehouse post = correct(warehouse, rules, violations, log, now);

  Repository repo = Repository::init(opts.repo);
  std::string run_id = repo.next_run_id(now);
  repo.write_cleansing_log(run_id, log);
  save_warehouse(post, opts.warehouse);

  std::size_t corrected = 0, uncorrectable = 0;
  for (const auto& entry : log.entries) {
    if (entry.reason.rfind("uncorrectable", 0) == 0) {
      ++uncorrectable;
    } else {
      ++corrected;
    }
  }
  if (json_format(opts)) {
    Json j;
    j["run_id"] = run_id;
    j["corrected"] = corrected;
    j["uncorrectable"] = uncorrectable;
    j["entries"] = Json::array();
    for (const auto& entry : log.entries) {
      j["entries"].push_back(cleansing_entry_to_json(entry));
    }
    out << j.dump(2) << "\n";
  } else {
    out << "correct: " << corrected << " corrected, " << uncorrectable
        << " uncorrectable (run " << run_id << ")\n";
    for (const auto& entry : log.entries) {
      out << "  " << entry.table << "[" << entry.row_index << "]." << *entry.column
          << "  " << format_cell(entry.old_value) << " -> "
          << format_cell(entry.new_value) << "  " << entry.reason << "\n";
    }
  }
  return 0;
}

int cmd_lint(const CommonOpts& opts, const std::string& config_path, std::ostream& out,
             std::ostream&) {
  std::ifstream in(config_path, std::ios::binary);
  if (!in) throw InputError("cannot read pipeline config '" + config_path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  Json config_json;
  try {
    config_json = Json::parse(buffer.str());
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("pipeline config: ") + e.what());
  }
  PipelineConfig config = pipeline_config_from_json(config_json);
  auto findings = lint_pipeline(config);
  if (json_format(opts)) {
    out << lint_findings_to_json(findings).dump(2) << "\n";
  } else {
    out << render_lint_text(findings);
  }
  for (const auto& f : findings) {
    if (f.severity == LintSeverity::Error) return 1;
  }
  return 0;
}

int cmd_history(const CommonOpts& opts, const std::string& metric_id,
                const std::string& from, const std::string& to, std::ostream& out,
                std::ostream&) {
  Repository repo = Repository::open(opts.repo);
  auto parse_bound = [](const std::string& text,
                        const char* flag) -> std::optional<Timestamp> {
    if (text.empty()) return std::nullopt;
    auto ts = Timestamp::parse(text);
    if (!ts) {
      throw InputError(std::string(flag) + ": bad timestamp '" + text + "'");
    }
    return ts;
  };
  auto records = repo.query_history(metric_id, parse_bound(from, "--from"),
                                    parse_bound(to, "--to"));
  if (json_format(opts)) {
    Json j = Json::array();
    for (const auto& r : records) j.push_back(measurement_record_to_json(r));
    out << j.dump(2) << "\n";
  } else {
    out << "history for '" << metric_id << "' (" << records.size() << " records)\n";
    for (const auto& r : records) {
      out << "  " << r.measurement.timestamp.to_string() << "  " << r.run_id << "["
          << r.sequence << "]  " << render_value(r.measurement.value, r.measurement.unit)
          << " " << unit_name(r.measurement.unit) << "  [" << r.measurement.agent_id
          << "]\n";
    }
  }
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Metadata-driven data quality for tabular warehouses"};
  app.require_subcommand(1);
  int code = 0;

  CommonOpts measure_opts;
  auto* measure = app.add_subcommand("measure", "Run all measuring agents and record a run");
  add_common(measure, measure_opts);
  measure->callback([&] { code = cmd_measure(measure_opts, out, err); });

  CommonOpts evaluate_opts;
  bool strict = false;
  auto* evaluate =
      app.add_subcommand("evaluate", "Measure, compare against expected intervals, report");
  add_common(evaluate, evaluate_opts);
  evaluate->add_flag("--strict", strict, "Treat indeterminate goals as failure");
  evaluate->callback([&] { code = cmd_evaluate(evaluate_opts, strict, out, err); });

  CommonOpts report_opts;
  auto* report = app.add_subcommand("report", "Render a report from stored measurements");
  add_common(report, report_opts);
  report->callback([&] { code = cmd_report(report_opts, out, err); });

  CommonOpts audit_opts;
  std::vector<std::string> audit_constraints;
  auto* audit_cmd = app.add_subcommand("audit", "Test constraints and profile columns");
  add_common(audit_cmd, audit_opts);
  audit_cmd->add_option("--constraints", audit_constraints,
                        "Constraint ids to test (default: all)")
      ->delimiter(',');
  audit_cmd->callback([&] { code = cmd_audit(audit_opts, audit_constraints, out, err); });

  CommonOpts admit_opts;
  std::string admit_table, admit_input;
  bool admit_commit = false;
  auto* admit_cmd = app.add_subcommand("admit", "Validate a CSV batch before loading");
  add_common(admit_cmd, admit_opts);
  admit_cmd->add_option("--table", admit_table, "Target table")->required();
  admit_cmd->add_option("--input", admit_input, "CSV batch file (with header)")->required();
  admit_cmd->add_flag("--commit", admit_commit, "Append accepted rows to the warehouse");
  admit_cmd->callback(
      [&] { code = cmd_admit(admit_opts, admit_table, admit_input, admit_commit, out, err); });

  CommonOpts filter_opts;
  std::string filter_mode, filter_reason;
  std::vector<std::string> filter_targets, filter_violating;
  auto* filter_cmd = app.add_subcommand("filter", "Remove elements, rows or row groups");
  add_common(filter_cmd, filter_opts);
  filter_cmd->add_option("--mode", filter_mode, "What to remove")
      ->check(CLI::IsMember({"elements", "rows", "groups"}))
      ->required();
  filter_cmd->add_option("--target", filter_targets,
                         "table:row (rows/groups) or table:row:column (elements)");
  filter_cmd->add_option("--violating", filter_violating,
                         "Target every row violating these constraint ids")
      ->delimiter(',');
  filter_cmd->add_option("--reason", filter_reason, "Reason recorded in the log");
  filter_cmd->callback([&] {
    code = cmd_filter(filter_opts, filter_mode, filter_targets, filter_violating,
                      filter_reason, out, err);
  });

  CommonOpts correct_opts;
  std::string correct_rules;
  auto* correct_cmd = app.add_subcommand("correct", "Apply correction rules");
  add_common(correct_cmd, correct_opts);
  correct_cmd->add_option("--rules", correct_rules, "Correction rules JSON file")
      ->required();
  correct_cmd->callback([&] { code = cmd_correct(correct_opts, correct_rules, out, err); });

  CommonOpts lint_opts;
  std::string lint_config = "pipeline.json";
  auto* lint_cmd = app.add_subcommand("lint", "Check the pipeline configuration");
  add_common(lint_cmd, lint_opts);
  lint_cmd->add_option("--config", lint_config, "Pipeline config file")
      ->capture_default_str();
  lint_cmd->callback([&] { code = cmd_lint(lint_opts, lint_config, out, err); });

  CommonOpts history_opts;
  std::string history_metric, history_from, history_to;
  auto* history_cmd = app.add_subcommand("history", "Show recorded measurements");
  add_common(history_cmd, history_opts);
  history_cmd->add_option("--metric", history_metric, "Metric id")->required();
  history_cmd->add_option("--from", history_from, "Earliest timestamp (inclusive)");
  history_cmd->add_option("--to", history_to, "Latest timestamp (inclusive)");
  history_cmd->callback(
      [&] { code = cmd_history(history_opts, history_metric, history_from, history_to, out, err); });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return 0;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return code;
}

}  // namespace dqe
