#include "doctest.h"

#include <algorithm>
#include <string>

#include "dqe/error.hpp"
#include "dqe/lint.hpp"
#include "tmpdir.hpp"

using namespace dqe;
using dqe::testgen::TempDir;

namespace {

// Every safeguard in place: nothing to report.
PipelineConfig clean_config(const TempDir& dir) {
  PipelineConfig config;
  config.staging_integrity_constraints_enabled = true;
  config.metadata_repository_root = dir.path().string();
  config.cleaning_rules_in_repository = true;
  config.source_validation_declared = true;
  return config;
}

std::vector<LintFinding> errors_only(const std::vector<LintFinding>& findings) {
  std::vector<LintFinding> out;
  for (const auto& f : findings) {
    if (f.severity == LintSeverity::Error) out.push_back(f);
  }
  return out;
}

}  // namespace

TEST_CASE("a fully safeguarded pipeline has no findings") {
  TempDir dir("lint");
  CHECK(lint_pipeline(clean_config(dir)).empty());
  CHECK(render_lint_text({}) == "pipeline configuration: no findings\n");
}

TEST_CASE("disabled staging constraints raise exactly one error") {
  TempDir dir("lint");
  PipelineConfig config = clean_config(dir);
  config.staging_integrity_constraints_enabled = false;

  auto findings = lint_pipeline(config);
  REQUIRE(findings.size() == 1);
  CHECK(findings[0].item == 'i');
  CHECK(findings[0].severity == LintSeverity::Error);
  CHECK(findings[0].message == "data integrity constraints are disabled in the staging area");
}

TEST_CASE("a missing metadata repository raises exactly one error") {
  TempDir dir("lint");

  SUBCASE("no root configured at all") {
    PipelineConfig config = clean_config(dir);
    config.metadata_repository_root.reset();
    auto findings = lint_pipeline(config);
    REQUIRE(findings.size() == 1);
    CHECK(findings[0].item == 'j');
    CHECK(findings[0].severity == LintSeverity::Error);
    CHECK(findings[0].message == "no centralized metadata repository root is configured");
  }

  SUBCASE("configured root does not exist") {
    PipelineConfig config = clean_config(dir);
    config.metadata_repository_root = (dir / "nowhere").string();
    auto findings = lint_pipeline(config);
    REQUIRE(findings.size() == 1);
    CHECK(findings[0].item == 'j');
    CHECK(findings[0].message == "metadata repository root '" + (dir / "nowhere").string() +
                                     "' is absent or unreadable");
  }
}

TEST_CASE("cleaning rules outside the repository raise exactly one error") {
  TempDir dir("lint");
  PipelineConfig config = clean_config(dir);
  config.cleaning_rules_in_repository = false;

  auto findings = lint_pipeline(config);
  REQUIRE(findings.size() == 1);
  CHECK(findings[0].item == 'k');
  CHECK(findings[0].severity == LintSeverity::Error);
  CHECK(findings[0].message == "data cleaning rules are not stored in the metadata repository");
}

TEST_CASE("undeclared source validation yields the fixed advisory list") {
  TempDir dir("lint");
  PipelineConfig config = clean_config(dir);
  config.source_validation_declared = false;

  auto findings = lint_pipeline(config);
  REQUIRE(findings.size() == 9);
  std::string items;
  for (const auto& f : findings) {
    CHECK(f.severity == LintSeverity::Advisory);
    items += f.item;
  }
  CHECK(items == "abcdefghl");
  CHECK(findings[0].message ==
        "Selection of source systems that do not comply with business rules");
  CHECK(findings[6].message ==
        "Missing values in certain columns of source system's table");
  CHECK(findings[8].message ==
        "Incomplete or wrong requirement analysis results in a poor schema design and "
        "hence another source of possible quality problems");
}

TEST_CASE("errors and advisories combine without interfering") {
  PipelineConfig config;  // defaults: no root, validation undeclared
  auto findings = lint_pipeline(config);

  auto errors = errors_only(findings);
  REQUIRE(errors.size() == 1);
  CHECK(errors[0].item == 'j');
  CHECK(findings.size() == 10);  // the j error plus nine advisories

  config.staging_integrity_constraints_enabled = false;
  config.cleaning_rules_in_repository = false;
  findings = lint_pipeline(config);
  errors = errors_only(findings);
  REQUIRE(errors.size() == 3);
  CHECK(errors[0].item == 'i');
  CHECK(errors[1].item == 'j');
  CHECK(errors[2].item == 'k');
}

TEST_CASE("pipeline config parses with safe defaults") {
  PipelineConfig defaults = pipeline_config_from_json(Json::object());
  CHECK(defaults.staging_integrity_constraints_enabled);
  CHECK_FALSE(defaults.metadata_repository_root.has_value());
  CHECK(defaults.cleaning_rules_in_repository);
  CHECK_FALSE(defaults.source_validation_declared);
  CHECK(defaults.notes.empty());

  Json j = Json{{"staging_integrity_constraints_enabled", false},
                {"metadata_repository_root", "/tmp/repo"},
                {"cleaning_rules_in_repository", false},
                {"source_validation_declared", true},
                {"notes", "quarterly review"}};
  PipelineConfig config = pipeline_config_from_json(j);
  CHECK_FALSE(config.staging_integrity_constraints_enabled);
  CHECK(config.metadata_repository_root == "/tmp/repo");
  CHECK_FALSE(config.cleaning_rules_in_repository);
  CHECK(config.source_validation_declared);
  CHECK(config.notes == "quarterly review");

  // Round-trip, including the null root.
  CHECK(pipeline_config_from_json(pipeline_config_to_json(config)).metadata_repository_root ==
        "/tmp/repo");
  Json with_null = pipeline_config_to_json(PipelineConfig{});
  CHECK(with_null["metadata_repository_root"].is_null());
  CHECK_FALSE(pipeline_config_from_json(with_null).metadata_repository_root.has_value());

  CHECK_THROWS_AS(pipeline_config_from_json(Json{{"surprise", 1}}), ParseError);
  CHECK_THROWS_AS(pipeline_config_from_json(Json::array()), ParseError);
}

TEST_CASE("findings render as JSON and as text") {
  std::vector<LintFinding> findings = {
      {'i', LintSeverity::Error, "data integrity constraints are disabled in the staging area"},
      {'a', LintSeverity::Advisory, "Selection of source systems that do not comply with business rules"},
  };

  Json j = lint_findings_to_json(findings);
  REQUIRE(j.size() == 2);
  CHECK(j[0]["item"] == "i");
  CHECK(j[0]["severity"] == "error");
  CHECK(j[0]["message"] == "data integrity constraints are disabled in the staging area");
  CHECK(j[1]["severity"] == "advisory");

  std::string text = render_lint_text(findings);
  CHECK(text ==
        "i. [error] data integrity constraints are disabled in the staging area\n"
        "a. [advisory] Selection of source systems that do not comply with business rules\n");
}
