// SPDX-License-Identifier: Apache-2.0
#include "molbench/eval/evaluator.h"

#include <algorithm>
#include <map>
#include <unordered_map>

#include "molbench/chem/errors.h"
#include "molbench/chem/smiles.h"
#include "molbench/eval/checks.h"
#include "molbench/eval/extract.h"
#include "molbench/util/fs.h"
#include "molbench/util/parallel.h"

namespace molbench {

namespace {

constexpr std::pair<FailureReason, const char*> kReasons[] = {
    {FailureReason::None, "none"},
    {FailureReason::MissingOutput, "missing_output"},
    {FailureReason::GenerationFailed, "generation_failed"},
    {FailureReason::NoMolecule, "no_molecule"},
    {FailureReason::CheckFailed, "check_failed"},
};

EvalRecord evaluate_one(const TaskInstance& inst, const Molecule* original, const ModelOutput* out,
                        std::optional<Fingerprint>& novelty_fp) {
  EvalRecord r;
  r.instance_id = inst.id;
  r.subtask = inst.subtask;
  if (out == nullptr) {
    r.failure_reason = FailureReason::MissingOutput;
    return r;
  }
  if (!out->text) {
    r.raw_output = out->error;
    r.failure_reason = FailureReason::GenerationFailed;
    return r;
  }
  r.raw_output = *out->text;
  r.extracted_smiles = extract_smiles(r.raw_output);
  if (!r.extracted_smiles) {
    r.failure_reason = FailureReason::NoMolecule;
    return r;
  }
  const Molecule parsed = parse_smiles(*r.extracted_smiles);
  r.valid = true;
  r.fragments = parsed.num_fragments();
  const Molecule gen = scored_molecule(parsed);
  r.pass = check_requirement(inst.subtask, original, gen, inst.requirement);
  r.failure_reason = r.pass ? FailureReason::None : FailureReason::CheckFailed;
  if (uses_novelty(inst.subtask))
    novelty_fp = morgan_fingerprint(gen);
  else
    r.similarity = tanimoto(morgan_fingerprint(gen), morgan_fingerprint(*original));
  return r;
}

}  // namespace

const char* failure_reason_name(FailureReason r) {
  for (const auto& [k, name] : kReasons)
    if (k == r) return name;
  return "none";
}

FailureReason parse_failure_reason(std::string_view name) {
  for (const auto& [k, n] : kReasons)
    if (name == n) return k;
  throw std::invalid_argument("unknown failure reason: " + std::string(name));
}

nlohmann::json output_to_json(const ModelOutput& o) {
  nlohmann::json j{{"id", o.id}};
  if (o.text) {
    j["output"] = *o.text;
  } else {
    j["output"] = nullptr;
    j["error"] = o.error;
  }
  return j;
}

ModelOutput output_from_json(const nlohmann::json& j) {
  ModelOutput o;
  o.id = j.at("id").get<std::string>();
  const auto& out = j.at("output");
  if (out.is_null())
    o.error = j.value("error", std::string("unspecified"));
  else
    o.text = out.get<std::string>();
  return o;
}

std::vector<ModelOutput> load_outputs(const std::filesystem::path& path) {
  std::vector<ModelOutput> outs;
  std::unordered_map<std::string, std::size_t> seen;
  for (const std::string& line : read_lines(path)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    ModelOutput o = output_from_json(nlohmann::json::parse(line));
    if (!seen.emplace(o.id, outs.size()).second) throw KeyMismatch("duplicate output id: " + o.id);
    outs.push_back(std::move(o));
  }
  return outs;
}

nlohmann::json record_to_json(const EvalRecord& r) {
  nlohmann::json j{{"instance_id", r.instance_id},
                   {"subtask", subtask_name(r.subtask)},
                   {"raw_output", r.raw_output},
                   {"extracted_smiles", nullptr},
                   {"valid", r.valid},
                   {"pass", r.pass},
                   {"failure_reason", failure_reason_name(r.failure_reason)},
                   {"fragments", r.fragments}};
  if (r.extracted_smiles) j["extracted_smiles"] = *r.extracted_smiles;
  if (r.similarity) j["similarity"] = *r.similarity;
  if (r.novelty) j["novelty"] = *r.novelty;
  return j;
}

EvalRecord record_from_json(const nlohmann::json& j) {
  EvalRecord r;
  r.instance_id = j.at("instance_id").get<std::string>();
  r.subtask = parse_subtask(j.at("subtask").get<std::string>());
  r.raw_output = j.at("raw_output").get<std::string>();
  if (!j.at("extracted_smiles").is_null()) r.extracted_smiles = j["extracted_smiles"].get<std::string>();
  r.valid = j.at("valid").get<bool>();
  r.pass = j.at("pass").get<bool>();
  r.failure_reason = parse_failure_reason(j.at("failure_reason").get<std::string>());
  r.fragments = j.value("fragments", 0);
  if (j.contains("similarity")) r.similarity = j["similarity"].get<double>();
  if (j.contains("novelty")) r.novelty = j["novelty"].get<double>();
  return r;
}

std::vector<EvalRecord> evaluate(std::span<const TaskInstance> instances, std::span<const ModelOutput> outputs,
                                 const EvalOptions& opt) {
  std::vector<std::size_t> order(instances.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return instances[a].id < instances[b].id; });
  std::unordered_map<std::string_view, std::size_t> by_id;
  for (std::size_t i = 0; i < instances.size(); ++i)
    if (!by_id.emplace(instances[i].id, i).second) throw InstanceCorrupt("duplicate instance id: " + instances[i].id);

  std::vector<const ModelOutput*> output_of(instances.size(), nullptr);
  for (const ModelOutput& o : outputs) {
    const auto it = by_id.find(o.id);
    if (it == by_id.end()) throw KeyMismatch("output id names no instance: " + o.id);
    if (output_of[it->second] != nullptr) throw KeyMismatch("duplicate output id: " + o.id);
    output_of[it->second] = &o;
  }

  // Sources are parsed up front so a corrupt instance aborts the run
  // before anything is scored.
  std::vector<std::optional<Molecule>> originals(instances.size());
  std::vector<char> corrupt(instances.size(), 0);
  parallel_for(instances.size(), opt.threads, [&](std::size_t i) {
    const TaskInstance& inst = instances[i];
    if (task_of(inst.subtask) == Task::MolCustom) return;
    try {
      if (!inst.source_smiles) throw ChemError("missing source molecule");
      originals[i] = parse_smiles(*inst.source_smiles);
    } catch (const ChemError&) {
      corrupt[i] = 1;
    }
  });
  for (std::size_t i : order)
    if (corrupt[i]) throw InstanceCorrupt("source molecule of " + instances[i].id + " does not parse");

  std::vector<EvalRecord> records(instances.size());
  std::vector<std::optional<Fingerprint>> fps(instances.size());
  parallel_for(order.size(), opt.threads, [&](std::size_t k) {
    const std::size_t i = order[k];
    records[k] = evaluate_one(instances[i], originals[i] ? &*originals[i] : nullptr, output_of[i], fps[k]);
  });

  std::vector<Fingerprint> queries;
  std::vector<std::size_t> slots;
  for (std::size_t k = 0; k < fps.size(); ++k)
    if (fps[k]) {
      queries.push_back(std::move(*fps[k]));
      slots.push_back(k);
    }
  if (!queries.empty()) {
    if (opt.reference == nullptr) throw EmptyReference("novelty needs a reference index");
    const std::vector<double> nov = novelty_batch(queries, *opt.reference, opt.threads);
    for (std::size_t q = 0; q < slots.size(); ++q) records[slots[q]].novelty = nov[q];
  }
  return records;
}

}  // namespace molbench
