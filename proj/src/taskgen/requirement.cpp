// SPDX-License-Identifier: Apache-2.0
#include "molbench/taskgen/requirement.h"

#include <algorithm>
#include <set>

#include "molbench/chem/element.h"
#include "molbench/descriptors/properties.h"
#include "molbench/patterns/groups.h"
#include "molbench/taskgen/tables.h"

namespace molbench {

namespace {

constexpr std::array<std::string_view, 9> kSubtaskNames = {
    "AddComponent", "DelComponent", "SubComponent", "LogP", "MR", "QED", "AtomNum", "BondNum", "FunctionalGroup"};

template <class Items>
void check_unique(const Items& items) {
  std::set<typename Items::value_type::first_type> seen;
  for (const auto& [k, v] : items)
    if (!seen.insert(k).second) throw RequirementError("requirement lists an item twice");
}

void check_range(int n, CountRange r, std::string_view what) {
  if (n < r.min || n > r.max)
    throw RequirementError(std::string(what) + " count " + std::to_string(n) + " outside " + std::to_string(r.min) +
                           "-" + std::to_string(r.max));
}

bool in_weights(const std::vector<std::pair<std::string, int>>& w, const std::string& name) {
  return std::any_of(w.begin(), w.end(), [&](const auto& p) { return p.first == name; });
}

const std::string& str(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_string()) throw RequirementError(std::string("requirement needs string ") + key);
  return j[key].get_ref<const std::string&>();
}

}  // namespace

std::string_view subtask_name(Subtask s) { return kSubtaskNames[static_cast<int>(s)]; }

std::string_view task_name(Task t) {
  switch (t) {
    case Task::MolEdit: return "MolEdit";
    case Task::MolOpt: return "MolOpt";
    case Task::MolCustom: return "MolCustom";
  }
  return "";
}

Subtask parse_subtask(std::string_view name) {
  for (Subtask s : kSubtasks)
    if (subtask_name(s) == name) return s;
  throw std::invalid_argument("unknown subtask: " + std::string(name));
}

Task task_of(Subtask s) {
  const int i = static_cast<int>(s);
  return i < 3 ? Task::MolEdit : i < 6 ? Task::MolOpt : Task::MolCustom;
}

int subtask_index(Subtask s) { return static_cast<int>(s); }

std::string_view property_name(Property p) {
  switch (p) {
    case Property::LogP: return "LogP";
    case Property::MR: return "MR";
    case Property::QED: return "QED";
  }
  return "";
}

double property_value(const Molecule& mol, Property p) {
  switch (p) {
    case Property::LogP: return logp(mol);
    case Property::MR: return mr(mol);
    case Property::QED: return qed(mol);
  }
  return 0.0;
}

Property property_of(Subtask s) {
  switch (s) {
    case Subtask::LogP: return Property::LogP;
    case Subtask::MR: return Property::MR;
    case Subtask::QED: return Property::QED;
    default: throw std::invalid_argument("not a MolOpt subtask: " + std::string(subtask_name(s)));
  }
}

void validate_requirement(Subtask s, const Requirement& r) {
  const GroupRegistry& reg = GroupRegistry::builtin();
  const SamplingTables& tab = SamplingTables::builtin();
  const auto add_vocab = reg.weights_addcomponent();
  const auto ends = reg.end_groups();
  auto is_end = [&](const std::string& g) { return std::find(ends.begin(), ends.end(), g) != ends.end(); };
  auto mismatch = [&] { throw RequirementError("requirement does not fit subtask " + std::string(subtask_name(s))); };
  switch (s) {
    case Subtask::AddComponent:
    case Subtask::DelComponent: {
      const std::string* g = nullptr;
      if (s == Subtask::AddComponent && std::holds_alternative<AddGroup>(r)) g = &std::get<AddGroup>(r).group;
      if (s == Subtask::DelComponent && std::holds_alternative<DelGroup>(r)) g = &std::get<DelGroup>(r).group;
      if (!g) mismatch();
      if (!in_weights(add_vocab, *g)) throw RequirementError("group not editable: " + *g);
      return;
    }
    case Subtask::SubComponent: {
      const auto* sub = std::get_if<SubGroup>(&r);
      if (!sub) mismatch();
      if (!is_end(sub->from) || !is_end(sub->to)) throw RequirementError("substitution endpoints must be end groups");
      if (sub->from == sub->to) throw RequirementError("substitution endpoints must differ");
      return;
    }
    case Subtask::LogP:
    case Subtask::MR:
    case Subtask::QED: {
      const auto* opt = std::get_if<OptimizeProperty>(&r);
      if (!opt || opt->property != property_of(s)) mismatch();
      return;
    }
    case Subtask::AtomNum: {
      const auto* a = std::get_if<AtomCounts>(&r);
      if (!a) mismatch();
      check_unique(a->counts);
      bool mandatory = false;
      int extra = 0;
      for (const auto& [z, n] : a->counts) {
        const auto* row = tab.atom(z);
        if (!row) throw RequirementError("element not in the atom table: " + std::to_string(z));
        check_range(n, row->range, element(z)->name);
        mandatory |= row->mandatory;
        extra += !row->mandatory;
      }
      for (const auto& row : tab.atoms)
        if (row.mandatory && !mandatory) throw RequirementError("atom requirement lacks the mandatory element");
      check_range(extra, tab.atom_types, "extra atom type");
      return;
    }
    case Subtask::BondNum: {
      const auto* b = std::get_if<BondCounts>(&r);
      if (!b) mismatch();
      check_unique(b->counts);
      check_range(static_cast<int>(b->counts.size()), tab.bond_types, "bond category");
      for (const auto& [c, n] : b->counts) {
        const auto* row = tab.bond(c);
        if (!row) throw RequirementError("bond category not in the table: " + std::string(bond_category_name(c)));
        check_range(n, row->range, bond_category_name(c));
      }
      return;
    }
    case Subtask::FunctionalGroup: {
      const auto* g = std::get_if<GroupCounts>(&r);
      if (!g) mismatch();
      check_unique(g->counts);
      check_range(static_cast<int>(g->counts.size()), tab.group_types, "functional group type");
      const auto vocab = reg.weights_functionalgroup();
      for (const auto& [name, n] : g->counts) {
        if (!in_weights(vocab, name)) throw RequirementError("group not countable: " + name);
        check_range(n, tab.group_count, name);
      }
      return;
    }
  }
}

nlohmann::json requirement_to_json(const Requirement& r) {
  using nlohmann::json;
  return std::visit(
      [](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, AddGroup>) {
          return {{"type", "AddGroup"}, {"group", v.group}};
        } else if constexpr (std::is_same_v<T, DelGroup>) {
          return {{"type", "DelGroup"}, {"group", v.group}};
        } else if constexpr (std::is_same_v<T, SubGroup>) {
          return {{"type", "SubGroup"}, {"from", v.from}, {"to", v.to}};
        } else if constexpr (std::is_same_v<T, OptimizeProperty>) {
          return {{"type", "OptimizeProperty"},
                  {"property", property_name(v.property)},
                  {"direction", v.direction == Direction::Higher ? "higher" : "lower"}};
        } else {
          json counts = json::array();
          for (const auto& [k, n] : v.counts) {
            if constexpr (std::is_same_v<T, AtomCounts>)
              counts.push_back({element(k)->symbol, n});
            else if constexpr (std::is_same_v<T, BondCounts>)
              counts.push_back({bond_category_name(k), n});
            else
              counts.push_back({k, n});
          }
          const char* type = std::is_same_v<T, AtomCounts> ? "AtomCounts"
                             : std::is_same_v<T, BondCounts> ? "BondCounts"
                                                             : "GroupCounts";
          return {{"type", type}, {"counts", counts}};
        }
      },
      r);
}

Requirement requirement_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw RequirementError("requirement must be an object");
  const std::string& type = str(j, "type");
  if (type == "AddGroup") return AddGroup{str(j, "group")};
  if (type == "DelGroup") return DelGroup{str(j, "group")};
  if (type == "SubGroup") return SubGroup{str(j, "from"), str(j, "to")};
  if (type == "OptimizeProperty") {
    const std::string& p = str(j, "property");
    const std::string& d = str(j, "direction");
    OptimizeProperty o{};
    if (p == "LogP") o.property = Property::LogP;
    else if (p == "MR") o.property = Property::MR;
    else if (p == "QED") o.property = Property::QED;
    else throw RequirementError("unknown property: " + p);
    if (d == "higher") o.direction = Direction::Higher;
    else if (d == "lower") o.direction = Direction::Lower;
    else throw RequirementError("unknown direction: " + d);
    return o;
  }
  if (!j.contains("counts") || !j["counts"].is_array()) throw RequirementError("requirement needs counts");
  std::vector<std::pair<std::string, int>> raw;
  for (const auto& item : j["counts"]) {
    if (!item.is_array() || item.size() != 2 || !item[0].is_string() || !item[1].is_number_integer())
      throw RequirementError("count items are [name, integer] pairs");
    raw.emplace_back(item[0].get<std::string>(), item[1].get<int>());
  }
  if (type == "AtomCounts") {
    AtomCounts a;
    for (const auto& [sym, n] : raw) {
      const Element* e = element_by_symbol(sym);
      if (!e) throw RequirementError("unknown element: " + sym);
      a.counts.emplace_back(e->z, n);
    }
    return a;
  }
  if (type == "BondCounts") {
    BondCounts b;
    for (const auto& [name, n] : raw) {
      BondCategory c;
      if (!parse_bond_category(name, c)) throw RequirementError("unknown bond category: " + name);
      b.counts.emplace_back(c, n);
    }
    return b;
  }
  if (type == "GroupCounts") return GroupCounts{raw};
  throw RequirementError("unknown requirement type: " + type);
}

}  // namespace molbench
