// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "molbench/chem/counts.h"

namespace molbench {

class SamplingTableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CountRange {
  int min = 1;
  int max = 1;
};

// Weights and count ranges for MolCustom requirements (data/sampling.txt).
struct SamplingTables {
  struct AtomRow {
    int z;
    int weight;  // 0 for the mandatory element
    bool mandatory;
    CountRange range;
  };
  struct BondRow {
    BondCategory category;
    int weight;
    CountRange range;
  };
  std::vector<AtomRow> atoms;
  std::vector<BondRow> bonds;
  CountRange atom_types{0, 3};
  CountRange bond_types{1, 3};
  CountRange group_types{1, 3};
  CountRange group_count{1, 5};
  std::string checksum;

  static const SamplingTables& builtin();
  // Throws SamplingTableError.
  static SamplingTables parse(std::string_view text);

  const AtomRow* atom(int z) const;
  const BondRow* bond(BondCategory c) const;
};

}  // namespace molbench
