// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "molbench/chem/molecule.h"
#include "molbench/patterns/smarts.h"

namespace molbench {

class UnknownGroup : public std::invalid_argument {
 public:
  explicit UnknownGroup(const std::string& name) : std::invalid_argument("unknown group: " + name) {}
};

class GroupFileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GroupPattern {
  std::string name;  // display form with spaces, e.g. "benzene ring"
  // Alternatives; atoms with map number 1 form the group proper.
  std::vector<Pattern> alternatives;
  // Six-membered all-carbon aromatic SSSR rings instead of a pattern.
  bool benzene = false;
  // Scaffold atoms an added copy may bond to; nullopt = any carbon.
  std::optional<Pattern> site;
  // SMILES fragments whose first atom bonds to the scaffold (the leading
  // '*' of the data file is stripped).
  std::vector<std::string> attachments;
  std::optional<int> weight_add;
  std::optional<int> weight_functional;
  bool end_group = false;
};

struct MatchSet {
  std::string group;
  // Sorted atom indices of each distinct occurrence, in discovery order.
  std::vector<std::vector<int>> matches;
  std::size_t count() const { return matches.size(); }
};

class GroupRegistry {
 public:
  // Registry compiled from data/groups.txt.
  static const GroupRegistry& builtin();
  // Throws GroupFileError on malformed input.
  static GroupRegistry parse(std::string_view text);

  const std::vector<GroupPattern>& groups() const { return groups_; }
  // Accepts "benzene ring" or "benzene_ring". Throws UnknownGroup.
  const GroupPattern& get(std::string_view name) const;
  bool contains(std::string_view name) const;
  // SHA-256 of the group file text.
  const std::string& checksum() const { return checksum_; }

  std::vector<std::pair<std::string, int>> weights_addcomponent() const;
  std::vector<std::pair<std::string, int>> weights_functionalgroup() const;
  std::vector<std::string> end_groups() const;

  MatchSet match(const Molecule& mol, std::string_view group) const;
  int count(const Molecule& mol, std::string_view group) const;
  // Every registered group with a non-zero count, in registry order.
  std::vector<std::pair<std::string, int>> present(const Molecule& mol) const;

 private:
  MatchSet match(Matcher& m, const GroupPattern& g) const;

  std::vector<GroupPattern> groups_;
  std::string checksum_;
};

// Shorthands over GroupRegistry::builtin().
int count_group(const Molecule& mol, std::string_view group);
std::vector<std::pair<std::string, int>> enumerate_present_groups(const Molecule& mol);

}  // namespace molbench
