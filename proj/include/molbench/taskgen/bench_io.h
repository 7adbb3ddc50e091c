// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "molbench/taskgen/generate.h"

namespace molbench {

// "<Subtask>.jsonl", one file per subtask in a benchmark or training directory.
std::string subtask_file_name(Subtask s);

std::string instances_to_jsonl(std::span<const TaskInstance> instances);
std::string pairs_to_jsonl(std::span<const TrainingPair> pairs);

// A single JSONL file, or a directory holding per-subtask files (read in
// subtask order; absent files are skipped). Throws std::runtime_error with
// the file and line of a malformed record.
std::vector<TaskInstance> load_instances(const std::filesystem::path& path);

// SHA-256 over the per-subtask template texts, for manifests.
std::string templates_checksum();

}  // namespace molbench
