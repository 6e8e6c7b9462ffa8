#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "forge/analysis.hpp"
#include "json.hpp"

namespace forge {

using Json = nlohmann::json;

/// Command line overrides; unset fields keep the spec's budgets.
struct PipelineOptions {
  std::optional<std::size_t> radius;
  std::optional<std::size_t> angle_bound;
  std::optional<std::size_t> threshold;
  std::optional<std::size_t> max_vertices;
  bool trust_monomorphisms = false;
  bool timings = false;
  bool audits_only = false;   // report audit steps only and skip exports
  bool write_exports = true;
};

struct StepOutcome {
  std::string id;
  std::string op;
  std::string status = "ok";  // ok | error | budget-exhausted
  std::string detail;
  Json data = Json::object();
};

struct VerdictEntry {
  std::string step;
  std::string name;
  Verdict verdict = Verdict::Inconclusive;
  std::string detail;
};

struct RunReport {
  std::string name;
  std::vector<StepOutcome> steps;
  std::vector<VerdictEntry> verdicts;
  Json budgets = Json::object();
  std::map<std::string, double> timings_ms;
  bool invalid = false;
  bool budget_exhausted = false;
  std::string error;

  /// 3 invalid spec, 2 budget exhausted, 1 some audit failed, 0 otherwise.
  int exit_code() const;
  Json to_json() const;
};

RunReport run_pipeline(const Json& spec, const PipelineOptions& opts = {});
/// Reads a spec file; unreadable or unparsable files give an invalid report.
RunReport run_pipeline_file(const std::string& path, const PipelineOptions& opts = {});

struct NamedSpec {
  std::string name;
  std::string summary;
  Json spec;
};
std::vector<NamedSpec> builtin_examples();
std::optional<Json> builtin_example(const std::string& name);

/// DOT text for a window: vertices labeled and colored by orbit, `cut` vertices double-circled.
std::string export_dot(const BallView& b, const std::string& name = "ball", const std::vector<std::size_t>& cut = {});
/// Window as JSON (vertices with labels and depths, edges as index pairs).
Json export_ball_json(const BallView& b);
/// Throws IOError.
void write_text(const std::string& path, const std::string& text);

}  // namespace forge
