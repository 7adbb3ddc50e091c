// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "molbench/taskgen/corpus.h"
#include "molbench/taskgen/editor.h"
#include "molbench/taskgen/requirement.h"
#include "molbench/taskgen/templates.h"
#include "molbench/util/rng.h"

namespace molbench {

inline constexpr int kRetryBudget = 50;

class ResampleExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ExclusionExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Everything needed to regenerate one instance or pair: its RNG is seeded
// with derive_seed(derive_seed(seed, stream, index), attempt, 0).
struct SeedTrace {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  std::uint64_t index = 0;
  std::uint64_t attempt = 0;

  std::uint64_t rng_seed() const { return derive_seed(derive_seed(seed, stream, index), attempt, 0); }
  bool operator==(const SeedTrace&) const = default;
};

struct TaskInstance {
  std::string id;
  Subtask subtask = Subtask::AddComponent;
  std::string prompt;
  Requirement requirement;
  std::optional<std::string> source_smiles;
  int template_id = 0;
  SeedTrace seed_trace;
  // Product of the editor proving the MolEdit instance is satisfiable; kept
  // for audit and never shown to a model.
  std::optional<std::string> witness;
};

nlohmann::json instance_to_json(const TaskInstance& t);
TaskInstance instance_from_json(const nlohmann::json& j);

// Instance generators. Each draws with `rng` only, so a seed reproduces the
// instance. Prompts are rendered from the builtin pools.
TaskInstance gen_moledit(const Corpus& corpus, Rng& rng, Subtask s);
TaskInstance gen_molopt(const Corpus& corpus, Rng& rng, Subtask s);
TaskInstance gen_molopt(const Corpus& corpus, Rng& rng, Property p, Direction d);
TaskInstance gen_molcustom(Rng& rng, Subtask s);
// Single requirement draws, exposed for sampler statistics.
Requirement sample_molcustom_requirement(Rng& rng, Subtask s);
std::string sample_add_group(Rng& rng);

struct BenchmarkOptions {
  std::size_t per_subtask = 5000;
  std::uint64_t seed = 0;
  unsigned threads = 0;
};

// Nine subtasks in table order, ids "<Subtask>-<index>". MolCustom
// instances with a requirement already emitted are redrawn (next attempt).
std::vector<TaskInstance> generate_benchmark(const Corpus& corpus, const BenchmarkOptions& opt);

enum class Scale { Light, Small, Medium, Large, XLarge };

struct ScaleConfig {
  Scale level;
  std::size_t total_pairs;

  static ScaleConfig of(Scale s);
  // Throws std::invalid_argument.
  static ScaleConfig parse(std::string_view name);
  std::string_view name() const;
  // Equal split; when 9 does not divide the total the first subtasks get
  // one more pair each.
  std::size_t per_subtask(Subtask s) const;
};

struct TrainingPair {
  std::string id;
  Subtask subtask = Subtask::AddComponent;
  std::string instruction;
  std::string response;
  Requirement requirement;
  std::optional<std::string> source_smiles;
  // The edit applied (MolEdit, MolOpt) or "statistics" (MolCustom).
  nlohmann::json provenance;
  int template_id = 0;
  SeedTrace seed_trace;
};

nlohmann::json pair_to_json(const TrainingPair& p);

struct TrainingOptions {
  std::uint64_t seed = 0;
  unsigned threads = 0;
};

// OpenMolIns pairs. Source molecules and responses whose canonical SMILES
// is in `exclusion` are never used; each pair passes its own checker. A
// slot that finds no acceptable pair in kRetryBudget attempts throws
// ExclusionExhausted.
std::vector<TrainingPair> gen_openmolins(const Corpus& corpus, const ScaleConfig& scale,
                                         const std::unordered_set<std::string>& exclusion,
                                         const TrainingOptions& opt);

}  // namespace molbench
