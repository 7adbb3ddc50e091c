// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

namespace molbench {

class EmptyCorpus : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Molecule list in canonical SMILES, in file order.
struct Corpus {
  std::vector<std::string> smiles;
  std::size_t skipped = 0;  // unparseable lines
  std::string checksum;     // SHA-256 of the source file

  // One SMILES per line (first whitespace-separated token). Blank lines are
  // ignored; invalid lines are skipped and counted.
  static Corpus load(const std::filesystem::path& path);
  static Corpus from_smiles(const std::vector<std::string>& smiles);

  std::unordered_set<std::string> canonical_set() const { return {smiles.begin(), smiles.end()}; }
  // Copy without the molecules in `exclude`.
  Corpus without(const std::unordered_set<std::string>& exclude) const;
};

}  // namespace molbench
