// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "molbench/taskgen/requirement.h"
#include "molbench/util/rng.h"

namespace molbench {

class SlotMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Printed prompt templates per subtask. "{}" marks a slot; a slot after
// "molecule " takes the SMILES, a slot followed by " atom(s)", " bond(s)" or
// " group(s)" takes the MolCustom item list, any other slot takes the next
// group name. "lower/higher" and "decrease/increase" are resolved by the
// optimization direction.
class TemplatePool {
 public:
  static const TemplatePool& builtin();

  const std::vector<std::string>& templates(Subtask s) const { return pools_[subtask_index(s)]; }

 private:
  std::array<std::vector<std::string>, 9> pools_;
};

struct PromptSlots {
  std::optional<std::string> molecule;
  std::vector<std::string> names;
  std::optional<Direction> direction;
  std::vector<std::pair<int, std::string>> items;  // count, item name ("carbon", "single", "benzene ring")
};

PromptSlots slots_for(const Requirement& req, const std::optional<std::string>& source_smiles);

// Throws SlotMismatch when the template's slots and the supplied values
// disagree in number or kind.
std::string render_template(std::string_view tmpl, const PromptSlots& slots);

struct RenderedPrompt {
  std::string text;
  int template_id;  // 1-based position in the subtask's pool
};

// Draws a template uniformly and fills it.
RenderedPrompt render_prompt(Subtask s, const Requirement& req, const std::optional<std::string>& source_smiles,
                             const TemplatePool& pool, Rng& rng);

// "a", "a and b", "a, b and c".
std::string join_list(const std::vector<std::string>& parts);

}  // namespace molbench
