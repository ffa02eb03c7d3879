#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dqe/json_util.hpp"

namespace dqe {

// How the surrounding load pipeline is configured; the linter's input.
struct PipelineConfig {
  bool staging_integrity_constraints_enabled = true;
  std::optional<std::string> metadata_repository_root;
  bool cleaning_rules_in_repository = true;
  bool source_validation_declared = false;
  std::string notes;

  bool operator==(const PipelineConfig&) const = default;
};

PipelineConfig pipeline_config_from_json(const Json& j);
Json pipeline_config_to_json(const PipelineConfig& config);

enum class LintSeverity { Error, Warning, Advisory };

const char* lint_severity_name(LintSeverity severity);

// item is the catalog letter a..l. Items i, j and k are mechanical
// checks; the rest name source-system practices nothing in the config
// can prove or disprove, so they stay advisory.
struct LintFinding {
  char item = 'a';
  LintSeverity severity = LintSeverity::Advisory;
  std::string message;

  bool operator==(const LintFinding&) const = default;
};

// Errors: constraints disabled (i), repository root unset or unreadable
// (j), cleaning rules kept outside the repository (k). When the config
// does not declare source-side validation, the catalog of source-system
// quality hazards (a-h, l) is emitted as advisories.
std::vector<LintFinding> lint_pipeline(const PipelineConfig& config);

Json lint_findings_to_json(const std::vector<LintFinding>& findings);
std::string render_lint_text(const std::vector<LintFinding>& findings);

}  // namespace dqe
