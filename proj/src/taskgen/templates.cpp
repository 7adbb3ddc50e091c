// SPDX-License-Identifier: Apache-2.0
#include "molbench/taskgen/templates.h"

#include <tuple>

#include "molbench/chem/element.h"

namespace molbench {

namespace {

std::vector<std::string> custom_pool(const std::string& noun) {
  const std::string slot = "{} " + noun + "(s).";
  return {"Please generate a molecule with " + slot,
          "Please generate a molecule composed of " + slot,
          "Please generate a molecule consisting " + slot,
          "The molecule has " + slot,
          "The molecule is composed of " + slot,
          "The molecule consists of " + slot,
          "There is a molecule with " + slot,
          "There is a molecule composed of " + slot,
          "There is a molecule consisting of " + slot,
          "The molecule contains " + slot};
}

std::vector<std::string> opt_pool(const std::string& prop) {
  return {"Please optimize the molecule {} to have a lower/higher " + prop + " value.",
          "Modify the molecule {} to decrease/increase its " + prop + " value.",
          "Optimize the molecule {} to have a lower/higher " + prop + " value.",
          "Please modify the molecule {} to decrease/increase its " + prop + " value.",
          "Modify the molecule {} to have a lower/higher " + prop + " value."};
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

}  // namespace

const TemplatePool& TemplatePool::builtin() {
  static const TemplatePool pool = [] {
    TemplatePool p;
    p.pools_[subtask_index(Subtask::AddComponent)] = {"Please add a {} to the molecule {}.",
                                                       "Modify the molecule {} by adding a {}.",
                                                       "Add a {} to the molecule {}."};
    p.pools_[subtask_index(Subtask::DelComponent)] = {"Please remove a {} from the molecule {}.",
                                                       "Modify the molecule {} by removing a {}.",
                                                       "Remove a {} from the molecule {}."};
    p.pools_[subtask_index(Subtask::SubComponent)] = {"Please substitute a {} in the molecule {} by {}.",
                                                       "Modify the molecule {} by replacing a {} by {}.",
                                                       "Replace a {} in the molecule {} by {}.",
                                                       "Please replace a {} in the molecule {} with {}.",
                                                       "Modify the molecule {} by substituting a {} with {}.",
                                                       "Substitute a {} in the molecule {} with {}."};
    p.pools_[subtask_index(Subtask::LogP)] = opt_pool("LogP");
    p.pools_[subtask_index(Subtask::MR)] = opt_pool("MR");
    p.pools_[subtask_index(Subtask::QED)] = opt_pool("QED");
    p.pools_[subtask_index(Subtask::AtomNum)] = custom_pool("atom");
    p.pools_[subtask_index(Subtask::BondNum)] = custom_pool("bond");
    p.pools_[subtask_index(Subtask::FunctionalGroup)] = custom_pool("group");
    return p;
  }();
  return pool;
}

std::string join_list(const std::vector<std::string>& parts) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += i + 1 == parts.size() ? " and " : ", ";
    out += parts[i];
  }
  return out;
}

PromptSlots slots_for(const Requirement& req, const std::optional<std::string>& source_smiles) {
  PromptSlots s;
  s.molecule = source_smiles;
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, AddGroup> || std::is_same_v<T, DelGroup>) {
          s.names = {v.group};
        } else if constexpr (std::is_same_v<T, SubGroup>) {
          s.names = {v.from, v.to};
        } else if constexpr (std::is_same_v<T, OptimizeProperty>) {
          s.direction = v.direction;
        } else if constexpr (std::is_same_v<T, AtomCounts>) {
          for (const auto& [z, n] : v.counts) s.items.emplace_back(n, std::string(element(z)->name));
        } else if constexpr (std::is_same_v<T, BondCounts>) {
          for (const auto& [c, n] : v.counts) s.items.emplace_back(n, std::string(bond_category_name(c)));
        } else {
          for (const auto& [g, n] : v.counts) s.items.emplace_back(n, g);
        }
      },
      req);
  return s;
}

std::string render_template(std::string_view tmpl, const PromptSlots& slots) {
  static constexpr std::string_view kNouns[] = {"atom", "bond", "group"};
  std::string out;
  std::size_t names_used = 0;
  bool molecule_used = false, items_used = false, direction_used = false;
  std::size_t i = 0;
  while (i < tmpl.size()) {
    if (tmpl.compare(i, 2, "{}") == 0) {
      i += 2;
      if (ends_with(out, "molecule ")) {
        if (!slots.molecule || molecule_used) throw SlotMismatch("template needs a molecule: " + std::string(tmpl));
        out += *slots.molecule;
        molecule_used = true;
        continue;
      }
      bool custom = false;
      for (std::string_view noun : kNouns) {
        const std::string suffix = " " + std::string(noun) + "(s)";
        if (tmpl.compare(i, suffix.size(), suffix) != 0) continue;
        if (slots.items.empty() || items_used) throw SlotMismatch("template needs count items: " + std::string(tmpl));
        std::vector<std::string> parts;
        for (const auto& [n, name] : slots.items)
          parts.push_back(std::to_string(n) + " " + name + " " + std::string(noun) + (n == 1 ? "" : "s"));
        out += join_list(parts);
        items_used = true;
        i += suffix.size();
        custom = true;
        break;
      }
      if (custom) continue;
      if (names_used >= slots.names.size()) throw SlotMismatch("template has more name slots than values");
      out += slots.names[names_used++];
      continue;
    }
    bool replaced = false;
    for (auto [pair, lo, hi] : {std::tuple{std::string_view("lower/higher"), "lower", "higher"},
                                std::tuple{std::string_view("decrease/increase"), "decrease", "increase"}}) {
      if (tmpl.compare(i, pair.size(), pair) != 0) continue;
      if (!slots.direction) throw SlotMismatch("template needs a direction: " + std::string(tmpl));
      out += *slots.direction == Direction::Higher ? hi : lo;
      direction_used = true;
      i += pair.size();
      replaced = true;
      break;
    }
    if (!replaced) out += tmpl[i++];
  }
  if (names_used != slots.names.size() || molecule_used != slots.molecule.has_value() ||
      items_used != !slots.items.empty() || direction_used != slots.direction.has_value())
    throw SlotMismatch("values left unused by template: " + std::string(tmpl));
  return out;
}

RenderedPrompt render_prompt(Subtask s, const Requirement& req, const std::optional<std::string>& source_smiles,
                             const TemplatePool& pool, Rng& rng) {
  const auto& templates = pool.templates(s);
  if (templates.empty()) throw SlotMismatch("no templates for " + std::string(subtask_name(s)));
  const long k = rng.uniform_int(0, static_cast<long>(templates.size()) - 1);
  return {render_template(templates[k], slots_for(req, source_smiles)), static_cast<int>(k) + 1};
}

}  // namespace molbench
