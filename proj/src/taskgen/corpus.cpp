// SPDX-License-Identifier: Apache-2.0
#include "molbench/taskgen/corpus.h"

#include <sstream>

#include "molbench/chem/errors.h"
#include "molbench/chem/smiles.h"
#include "molbench/util/fs.h"
#include "molbench/util/hash.h"

namespace molbench {

Corpus Corpus::load(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  Corpus c;
  c.checksum = sha256_hex(text);
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;
    try {
      c.smiles.push_back(canonical_smiles(tok));
    } catch (const ChemError&) {
      ++c.skipped;
    }
  }
  return c;
}

Corpus Corpus::from_smiles(const std::vector<std::string>& smiles) {
  Corpus c;
  Sha256 h;
  for (const auto& s : smiles) {
    h.update(s);
    h.update("\n");
    try {
      c.smiles.push_back(canonical_smiles(s));
    } catch (const ChemError&) {
      ++c.skipped;
    }
  }
  c.checksum = h.hex_digest();
  return c;
}

Corpus Corpus::without(const std::unordered_set<std::string>& exclude) const {
  Corpus c;
  c.skipped = skipped;
  c.checksum = checksum;
  for (const auto& s : smiles)
    if (!exclude.count(s)) c.smiles.push_back(s);
  return c;
}

}  // namespace molbench
