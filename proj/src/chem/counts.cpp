// SPDX-License-Identifier: Apache-2.0
#include "molbench/chem/counts.h"

namespace molbench {

namespace {

bool has_carbonyl(const Molecule& mol, int c) {
  for (const Neighbor& nb : mol.neighbors(c)) {
    const Bond& b = mol.bond(nb.bond);
    if (mol.atom(nb.atom).z == 8 && b.order == BondOrder::Double) return true;
  }
  return false;
}

}  // namespace

std::string_view bond_category_name(BondCategory c) {
  switch (c) {
    case BondCategory::Single: return "single";
    case BondCategory::Double: return "double";
    case BondCategory::Triple: return "triple";
    case BondCategory::Aromatic: return "aromatic";
    case BondCategory::Rotatable: return "rotatable";
  }
  return "";
}

bool parse_bond_category(std::string_view name, BondCategory& out) {
  for (BondCategory c : kBondCategories)
    if (bond_category_name(c) == name) {
      out = c;
      return true;
    }
  return false;
}

std::map<int, int> heavy_atom_counts(const Molecule& mol) {
  std::map<int, int> out;
  for (const Atom& a : mol.atoms())
    if (a.z != 1) ++out[a.z];
  return out;
}

bool is_rotatable_bond(const Molecule& mol, int bond) {
  const Bond& b = mol.bond(bond);
  if (b.order != BondOrder::Single || b.in_ring) return false;
  const Atom& x = mol.atom(b.begin);
  const Atom& y = mol.atom(b.end);
  if (x.z == 1 || y.z == 1) return false;
  if (mol.heavy_degree(b.begin) < 2 || mol.heavy_degree(b.end) < 2) return false;
  if (x.z == 6 && y.z == 7 && has_carbonyl(mol, b.begin)) return false;
  if (y.z == 6 && x.z == 7 && has_carbonyl(mol, b.end)) return false;
  return true;
}

int count_rotatable_bonds(const Molecule& mol) {
  int n = 0;
  for (const Bond& b : mol.bonds())
    if (is_rotatable_bond(mol, b.index)) ++n;
  return n;
}

std::map<BondCategory, int> bond_counts(const Molecule& mol) {
  std::map<BondCategory, int> out;
  for (BondCategory c : kBondCategories) out[c] = 0;
  for (const Bond& b : mol.bonds()) {
    if (mol.atom(b.begin).z == 1 || mol.atom(b.end).z == 1) continue;
    switch (b.order) {
      case BondOrder::Single: ++out[BondCategory::Single]; break;
      case BondOrder::Double: ++out[BondCategory::Double]; break;
      case BondOrder::Triple: ++out[BondCategory::Triple]; break;
      case BondOrder::Aromatic: ++out[BondCategory::Aromatic]; break;
    }
    if (is_rotatable_bond(mol, b.index)) ++out[BondCategory::Rotatable];
  }
  return out;
}

}  // namespace molbench
