#include "dqe/lint.hpp"

#include <filesystem>

#include "dqe/error.hpp"

namespace dqe {

namespace {

// Source-system hazards that stay advisory: nothing in a pipeline config
// can verify practices inside the source systems.
struct AdvisoryItem {
  char item;
  const char* text;
};

const AdvisoryItem kAdvisories[] = {
    {'a', "Selection of source systems that do not comply with business rules"},
    {'b', "Lack of data validation techniques practiced in source systems"},
    {'c', "Representation of data in different formats"},
    {'d', "Inability to update data in a timely manner"},
    {'e', "Data inconsistency problems in source systems"},
    {'f', "Lack of data quality testing performed on source systems"},
    {'g', "Missing values in certain columns of source system's table"},
    {'h', "Different default values used for missing columns in the source system"},
    {'l', "Incomplete or wrong requirement analysis results in a poor schema design and "
          "hence another source of possible quality problems"},
};

}  // namespace

PipelineConfig pipeline_config_from_json(const Json& j) {
  const std::string context = "pipeline config";
  require_object(j, context);
  reject_unknown_keys(j,
                      {"staging_integrity_constraints_enabled", "metadata_repository_root",
                       "cleaning_rules_in_repository", "source_validation_declared",
                       "notes"},
                      context);
  PipelineConfig config;
  config.staging_integrity_constraints_enabled =
      get_bool(j, "staging_integrity_constraints_enabled", context, true);
  if (j.contains("metadata_repository_root") && !j["metadata_repository_root"].is_null()) {
    config.metadata_repository_root = get_string(j, "metadata_repository_root", context);
  }
  config.cleaning_rules_in_repository =
      get_bool(j, "cleaning_rules_in_repository", context, true);
  config.source_validation_declared =
      get_bool(j, "source_validation_declared", context, false);
  config.notes = j.contains("notes") ? get_string(j, "notes", context) : "";
  return config;
}

Json pipeline_config_to_json(const PipelineConfig& config) {
  Json j;
  j["staging_integrity_constraints_enabled"] = config.staging_integrity_constraints_enabled;
  j["metadata_repository_root"] = config.metadata_repository_root
                                      ? Json(*config.metadata_repository_root)
                                      : Json(nullptr);
  j["cleaning_rules_in_repository"] = config.cleaning_rules_in_repository;
  j["source_validation_declared"] = config.source_validation_declared;
  j["notes"] = config.notes;
  return j;
}

const char* lint_severity_name(LintSeverity severity) {
  switch (severity) {
    case LintSeverity::Error: return "error";
    case LintSeverity::Warning: return "warning";
    case LintSeverity::Advisory: return "advisory";
  }
  return "advisory";
}

std::vector<LintFinding> lint_pipeline(const PipelineConfig& config) {
  std::vector<LintFinding> findings;

  if (!config.staging_integrity_constraints_enabled) {
    findings.push_back({'i', LintSeverity::Error,
                        "data integrity constraints are disabled in the staging area"});
  }
  if (!config.metadata_repository_root) {
    findings.push_back({'j', LintSeverity::Error,
                        "no centralized metadata repository root is configured"});
  } else if (!std::filesystem::is_directory(*config.metadata_repository_root)) {
    findings.push_back({'j', LintSeverity::Error,
                        "metadata repository root '" + *config.metadata_repository_root +
                            "' is absent or unreadable"});
  }
  if (!config.cleaning_rules_in_repository) {
    findings.push_back({'k', LintSeverity::Error,
                        "data cleaning rules are not stored in the metadata repository"});
  }

  if (!config.source_validation_declared) {
    for (const auto& advisory : kAdvisories) {
      findings.push_back({advisory.item, LintSeverity::Advisory, advisory.text});
    }
  }
  return findings;
}

Json lint_findings_to_json(const std::vector<LintFinding>& findings) {
  Json j = Json::array();
  for (const auto& f : findings) {
    j.push_back(Json{{"item", std::string(1, f.item)},
                     {"severity", lint_severity_name(f.severity)},
                     {"message", f.message}});
  }
  return j;
}

std::string render_lint_text(const std::vector<LintFinding>& findings) {
  if (findings.empty()) return "pipeline configuration: no findings\n";
  std::string out;
  for (const auto& f : findings) {
    out += std::string(1, f.item) + ". [" + lint_severity_name(f.severity) + "] " +
           f.message + "\n";
  }
  return out;
}

}  // namespace dqe
