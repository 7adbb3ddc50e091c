// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "molbench/descriptors/fingerprint.h"
#include "molbench/taskgen/generate.h"

namespace molbench {

// Output ids that name no instance, or an id given twice.
class KeyMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The stored source molecule of a MolEdit/MolOpt instance no longer parses.
class InstanceCorrupt : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EmptyRecordSet : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class FailureReason {
  None,
  MissingOutput,     // no entry in the output file
  GenerationFailed,  // the adapter recorded an error instead of text
  NoMolecule,        // nothing in the text parses
  CheckFailed,       // parsed, but the requirement is not met
};

const char* failure_reason_name(FailureReason r);
FailureReason parse_failure_reason(std::string_view name);

// One line of a model-output file: {"id": ..., "output": "..."} or
// {"id": ..., "output": null, "error": "..."}.
struct ModelOutput {
  std::string id;
  std::optional<std::string> text;
  std::string error;
};

nlohmann::json output_to_json(const ModelOutput& o);
ModelOutput output_from_json(const nlohmann::json& j);
// Throws KeyMismatch on a repeated id.
std::vector<ModelOutput> load_outputs(const std::filesystem::path& path);

struct EvalRecord {
  std::string instance_id;
  Subtask subtask = Subtask::AddComponent;
  std::string raw_output;
  std::optional<std::string> extracted_smiles;
  bool valid = false;
  bool pass = false;
  std::optional<double> similarity;  // MolEdit and MolOpt
  std::optional<double> novelty;     // MolCustom
  FailureReason failure_reason = FailureReason::MissingOutput;
  // Fragments in the parsed output; only the largest one is checked.
  int fragments = 0;
};

nlohmann::json record_to_json(const EvalRecord& r);
EvalRecord record_from_json(const nlohmann::json& j);

struct EvalOptions {
  unsigned threads = 0;
  // Needed as soon as a MolCustom output parses.
  const ReferenceIndex* reference = nullptr;
};

// One record per instance, sorted by instance id. The result depends only on
// the inputs, not on the worker count.
std::vector<EvalRecord> evaluate(std::span<const TaskInstance> instances, std::span<const ModelOutput> outputs,
                                 const EvalOptions& opt = {});

struct SubtaskResult {
  Subtask subtask = Subtask::AddComponent;
  std::size_t n = 0;
  std::size_t passes = 0;
  std::size_t valid = 0;
  double sr = 0;
  // Mean similarity or mean novelty over valid records; 0 when none is valid.
  double quality = 0;
  double validity = 0;
  double wsr = 0;
};

bool uses_novelty(Subtask s);

double weighted_success_rate(double sr, double quality);

// SR counts every record in the denominator; the quality mean only valid ones.
// Throws EmptyRecordSet, and std::invalid_argument on mixed subtasks.
SubtaskResult score_subtask(std::span<const EvalRecord> records);

// Groups records by subtask and scores each of the nine. A subtask without
// records throws EmptyRecordSet.
std::vector<SubtaskResult> score_all(std::span<const EvalRecord> records);

struct Report {
  std::string model;
  std::vector<SubtaskResult> results;  // in kSubtasks order
  double average_sr = 0;
  double average_wsr = 0;
  nlohmann::json provenance = nlohmann::json::object();
};

// Needs each of the nine subtasks exactly once (std::invalid_argument
// otherwise).
Report aggregate(std::vector<SubtaskResult> results, std::string model = {},
                 nlohmann::json provenance = nlohmann::json::object());

nlohmann::json report_to_json(const Report& r);
Report report_from_json(const nlohmann::json& j);

// Fractions rendered as percentages with two decimals. Values whose two
// decimal forms collide while their three decimal forms differ are written
// with the third digit in parentheses, e.g. "13.13(7)".
std::vector<std::string> format_percent_column(std::span<const double> fractions);

// Per-subtask block in the layout of the detailed result tables: one line per
// task with SR, Similarity or Novelty, WSR and Validity for each subtask.
std::string render_leaderboard_row(const Report& r);

// Ranked comparison: average WSR descending, ties by model name.
std::string render_comparison(std::span<const Report> reports);

}  // namespace molbench
