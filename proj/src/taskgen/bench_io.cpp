// SPDX-License-Identifier: Apache-2.0
#include "molbench/taskgen/bench_io.h"

#include "molbench/taskgen/templates.h"
#include "molbench/util/fs.h"
#include "molbench/util/hash.h"

namespace molbench {

namespace {

void load_file(const std::filesystem::path& p, std::vector<TaskInstance>& out) {
  std::size_t lineno = 0;
  for (const std::string& line : read_lines(p)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(instance_from_json(nlohmann::json::parse(line)));
    } catch (const std::exception& e) {
      throw std::runtime_error(p.string() + ":" + std::to_string(lineno) + ": bad instance: " + e.what());
    }
  }
}

}  // namespace

std::string subtask_file_name(Subtask s) { return std::string(subtask_name(s)) + ".jsonl"; }

std::string instances_to_jsonl(std::span<const TaskInstance> instances) {
  std::string s;
  for (const TaskInstance& t : instances) {
    s += instance_to_json(t).dump();
    s += '\n';
  }
  return s;
}

std::string pairs_to_jsonl(std::span<const TrainingPair> pairs) {
  std::string s;
  for (const TrainingPair& p : pairs) {
    s += pair_to_json(p).dump();
    s += '\n';
  }
  return s;
}

std::vector<TaskInstance> load_instances(const std::filesystem::path& path) {
  std::vector<TaskInstance> out;
  if (std::filesystem::is_directory(path)) {
    bool any = false;
    for (Subtask s : kSubtasks) {
      const auto p = path / subtask_file_name(s);
      if (!std::filesystem::exists(p)) continue;
      any = true;
      load_file(p, out);
    }
    if (!any) throw std::runtime_error("no benchmark files in " + path.string());
  } else {
    load_file(path, out);
  }
  return out;
}

std::string templates_checksum() {
  Sha256 h;
  for (Subtask s : kSubtasks) {
    h.update(subtask_name(s));
    h.update("\n");
    for (const std::string& t : TemplatePool::builtin().templates(s)) {
      h.update(t);
      h.update("\n");
    }
  }
  return h.hex_digest();
}

}  // namespace molbench
