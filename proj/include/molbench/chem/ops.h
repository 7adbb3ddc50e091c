// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "molbench/chem/molecule.h"

namespace molbench {

// Implicit (non-node) hydrogen count per atom.
std::vector<int> implicit_hydrogens(const Molecule& mol);

// Per-atom aromatic flags as perceived when the molecule was built.
std::vector<bool> aromatic_atoms(const Molecule& mol);

const std::vector<std::vector<int>>& find_sssr(const Molecule& mol);

// Copy in which every carried hydrogen becomes a graph node. Original atoms
// keep their indices; hydrogens are appended in atom order.
Molecule add_hydrogens(const Molecule& mol);

// Line-oriented dump for fixture diffs:
//   atoms <n>
//   atom <i> <symbol> charge=<q> isotope=<m> h=<n> aromatic=<0|1> ring=<0|1>
//   bonds <n>
//   bond <i> <a> <b> order=<1|2|3|ar> kekule=<1|2|3> ring=<0|1>
//   rings <sssr size>
//   ring <atom> <atom> ...
std::string debug_dump(const Molecule& mol);

}  // namespace molbench
