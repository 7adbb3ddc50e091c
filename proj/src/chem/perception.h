// SPDX-License-Identifier: Apache-2.0
// Graph algorithms behind MolBuilder::build. Not installed.
#pragma once

#include <cstdint>
#include <vector>

#include "molbench/chem/molecule.h"

namespace molbench::detail {

// Plain adjacency view used before a Molecule exists.
struct Graph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;
  std::vector<std::vector<Neighbor>> adj;

  Graph(int atoms, const std::vector<std::pair<int, int>>& e);
};

// true for bonds lying on at least one cycle.
std::vector<bool> cycle_edges(const Graph& g);

struct RingSets {
  std::vector<std::vector<int>> sssr;    // ordered atom cycles
  std::vector<std::vector<int>> family;  // relevant cycles, superset of sssr
};

RingSets find_rings(const Graph& g, const std::vector<bool>& on_cycle);

// Chooses localized orders (1 or 2) for aromatic bonds. `needs_double` marks
// aromatic atoms that must receive exactly one double bond; `aromatic_bond`
// marks the candidate bonds. Returns per-bond 0/1 "is double" flags, or
// throws KekulizationError.
std::vector<std::uint8_t> kekulize(const Graph& g, const std::vector<bool>& needs_double,
                                   const std::vector<bool>& aromatic_bond);

// Flags aromatic atoms and bonds from a localized structure.
struct AromaticInput {
  const std::vector<Atom>* atoms;
  const std::vector<Bond>* bonds;
  const Graph* graph;
  const std::vector<std::vector<int>>* rings;
};
void perceive_aromaticity(const AromaticInput& in, std::vector<bool>& atom_aromatic,
                          std::vector<bool>& bond_aromatic);

}  // namespace molbench::detail
