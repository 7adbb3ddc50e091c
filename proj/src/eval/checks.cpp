// SPDX-License-Identifier: Apache-2.0
#include "molbench/eval/checks.h"

#include <stdexcept>

#include "molbench/patterns/groups.h"

namespace molbench {

bool check_moledit(const Molecule& original, const Molecule& generated, const Requirement& req) {
  const GroupRegistry& reg = GroupRegistry::builtin();
  if (const auto* add = std::get_if<AddGroup>(&req))
    return reg.count(generated, add->group) == reg.count(original, add->group) + 1;
  if (const auto* del = std::get_if<DelGroup>(&req))
    return reg.count(generated, del->group) == reg.count(original, del->group) - 1;
  if (const auto* sub = std::get_if<SubGroup>(&req))
    return reg.count(generated, sub->from) == reg.count(original, sub->from) - 1 &&
           reg.count(generated, sub->to) == reg.count(original, sub->to) + 1;
  return false;
}

bool check_molopt(const Molecule& original, const Molecule& generated, const OptimizeProperty& req) {
  const double g = property_value(generated, req.property);
  const double o = property_value(original, req.property);
  if (g > o && req.direction == Direction::Higher) return true;
  if (g < o && req.direction == Direction::Lower) return true;
  return false;
}

bool check_molcustom(const Molecule& generated, const Requirement& req) {
  bool flag = true;
  if (const auto* atoms = std::get_if<AtomCounts>(&req)) {
    const auto counts = heavy_atom_counts(generated);
    for (const auto& [z, n] : atoms->counts) {
      const auto it = counts.find(z);
      if ((it == counts.end() ? 0 : it->second) != n) flag = false;
    }
  } else if (const auto* bonds = std::get_if<BondCounts>(&req)) {
    const auto counts = bond_counts(generated);
    for (const auto& [c, n] : bonds->counts) {
      const auto it = counts.find(c);
      if ((it == counts.end() ? 0 : it->second) != n) flag = false;
    }
  } else if (const auto* groups = std::get_if<GroupCounts>(&req)) {
    const GroupRegistry& reg = GroupRegistry::builtin();
    for (const auto& [g, n] : groups->counts)
      if (reg.count(generated, g) != n) flag = false;
  } else {
    flag = false;
  }
  return flag;
}

bool check_requirement(Subtask s, const Molecule* original, const Molecule& generated, const Requirement& req) {
  switch (task_of(s)) {
    case Task::MolEdit:
      if (!original) throw std::invalid_argument("MolEdit check needs the original molecule");
      return check_moledit(*original, generated, req);
    case Task::MolOpt: {
      if (!original) throw std::invalid_argument("MolOpt check needs the original molecule");
      const auto* opt = std::get_if<OptimizeProperty>(&req);
      return opt && opt->property == property_of(s) && check_molopt(*original, generated, *opt);
    }
    case Task::MolCustom: return check_molcustom(generated, req);
  }
  return false;
}

Molecule scored_molecule(const Molecule& parsed) {
  return parsed.num_fragments() > 1 ? parsed.largest_fragment() : parsed;
}

}  // namespace molbench
