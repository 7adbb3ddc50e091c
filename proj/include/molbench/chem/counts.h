// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <map>
#include <string_view>

#include "molbench/chem/molecule.h"

namespace molbench {

enum class BondCategory : std::uint8_t { Single, Double, Triple, Aromatic, Rotatable };
inline constexpr std::array<BondCategory, 5> kBondCategories = {
    BondCategory::Single, BondCategory::Double, BondCategory::Triple, BondCategory::Aromatic,
    BondCategory::Rotatable};

std::string_view bond_category_name(BondCategory c);
// Accepts the names above ("single", "rotatable" ...); false when unknown.
bool parse_bond_category(std::string_view name, BondCategory& out);

// Heavy atoms per atomic number; hydrogens (implicit or as graph nodes) are
// not counted.
std::map<int, int> heavy_atom_counts(const Molecule& mol);

// Bond counts per category over bonds between heavy atoms. Aromatic bonds
// are not single; rotatable bonds are a subset of single bonds.
std::map<BondCategory, int> bond_counts(const Molecule& mol);

// Acyclic single bonds between two atoms of heavy degree >= 2, excluding the
// C-N bond of an amide (N bonded to a carbon that carries C=O).
bool is_rotatable_bond(const Molecule& mol, int bond);
int count_rotatable_bonds(const Molecule& mol);

}  // namespace molbench
