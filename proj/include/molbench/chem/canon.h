// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "molbench/chem/molecule.h"

namespace molbench {

// Canonical atom ranks, a permutation of 0..n-1. Atoms are first ordered by
// (element, isotope, charge, degree, hydrogens, aromaticity), refined by
// neighbour ranks and bond orders until stable. Remaining ties are resolved
// by an individualization-refinement search that keeps the labeling with the
// smallest certificate, so isomorphic inputs get identical ranks.
std::vector<int> canonical_rank(const Molecule& mol);

// Ranks after refinement but before any tie-break; equal values mark atoms
// the invariants cannot distinguish.
std::vector<int> symmetry_classes(const Molecule& mol);

}  // namespace molbench
