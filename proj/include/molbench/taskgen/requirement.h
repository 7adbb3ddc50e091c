// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "molbench/chem/counts.h"
#include "molbench/chem/molecule.h"

namespace molbench {

enum class Task { MolEdit, MolOpt, MolCustom };

enum class Subtask { AddComponent, DelComponent, SubComponent, LogP, MR, QED, AtomNum, BondNum, FunctionalGroup };

inline constexpr std::array<Subtask, 9> kSubtasks = {
    Subtask::AddComponent, Subtask::DelComponent, Subtask::SubComponent, Subtask::LogP,           Subtask::MR,
    Subtask::QED,          Subtask::AtomNum,      Subtask::BondNum,      Subtask::FunctionalGroup};

std::string_view subtask_name(Subtask s);
std::string_view task_name(Task t);
// Throws std::invalid_argument for unknown names.
Subtask parse_subtask(std::string_view name);
Task task_of(Subtask s);
int subtask_index(Subtask s);

enum class Property { LogP, MR, QED };
enum class Direction { Higher, Lower };

std::string_view property_name(Property p);
double property_value(const Molecule& mol, Property p);
Property property_of(Subtask s);  // LogP, MR or QED subtasks only

struct AddGroup {
  std::string group;
  bool operator==(const AddGroup&) const = default;
};
struct DelGroup {
  std::string group;
  bool operator==(const DelGroup&) const = default;
};
struct SubGroup {
  std::string from;
  std::string to;
  bool operator==(const SubGroup&) const = default;
};
struct OptimizeProperty {
  Property property;
  Direction direction;
  bool operator==(const OptimizeProperty&) const = default;
};
// Counts keep the order in which the items were drawn; prompts list them in
// that order.
struct AtomCounts {
  std::vector<std::pair<int, int>> counts;  // atomic number, count
  bool operator==(const AtomCounts&) const = default;
};
struct BondCounts {
  std::vector<std::pair<BondCategory, int>> counts;
  bool operator==(const BondCounts&) const = default;
};
struct GroupCounts {
  std::vector<std::pair<std::string, int>> counts;
  bool operator==(const GroupCounts&) const = default;
};

using Requirement = std::variant<AddGroup, DelGroup, SubGroup, OptimizeProperty, AtomCounts, BondCounts, GroupCounts>;

class RequirementError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Throws RequirementError when the variant does not belong to the subtask
// or a name or count is out of its vocabulary or range.
void validate_requirement(Subtask s, const Requirement& r);

nlohmann::json requirement_to_json(const Requirement& r);
// Throws RequirementError on malformed input.
Requirement requirement_from_json(const nlohmann::json& j);

}  // namespace molbench
