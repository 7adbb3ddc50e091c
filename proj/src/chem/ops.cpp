// SPDX-License-Identifier: Apache-2.0
#include "molbench/chem/ops.h"

#include <sstream>

namespace molbench {

std::vector<int> implicit_hydrogens(const Molecule& mol) {
  std::vector<int> out;
  out.reserve(mol.num_atoms());
  for (const Atom& a : mol.atoms()) out.push_back(a.hydrogens);
  return out;
}

std::vector<bool> aromatic_atoms(const Molecule& mol) {
  std::vector<bool> out;
  out.reserve(mol.num_atoms());
  for (const Atom& a : mol.atoms()) out.push_back(a.aromatic);
  return out;
}

const std::vector<std::vector<int>>& find_sssr(const Molecule& mol) { return mol.sssr(); }

Molecule add_hydrogens(const Molecule& mol) {
  MolBuilder b = MolBuilder::from(mol);
  const int n = static_cast<int>(mol.num_atoms());
  for (int i = 0; i < n; ++i) {
    const int h = mol.atom(i).hydrogens;
    b.atom(i).hydrogens = 0;
    for (int k = 0; k < h; ++k) {
      MolBuilder::AtomSpec hs;
      hs.z = 1;
      hs.hydrogens = 0;
      b.add_bond(i, b.add_atom(hs), BondOrder::Single);
    }
  }
  return b.build();
}

std::string debug_dump(const Molecule& mol) {
  std::ostringstream os;
  os << "atoms " << mol.num_atoms() << '\n';
  for (const Atom& a : mol.atoms())
    os << "atom " << a.index << ' ' << a.elem().symbol << " charge=" << int(a.formal_charge)
       << " isotope=" << a.isotope << " h=" << int(a.hydrogens) << " aromatic=" << int(a.aromatic)
       << " ring=" << int(mol.atom_in_ring(a.index)) << '\n';
  os << "bonds " << mol.num_bonds() << '\n';
  for (const Bond& b : mol.bonds()) {
    os << "bond " << b.index << ' ' << b.begin << ' ' << b.end << " order=";
    if (b.order == BondOrder::Aromatic)
      os << "ar";
    else
      os << int(b.order);
    os << " kekule=" << int(b.kekule) << " ring=" << int(b.in_ring) << '\n';
  }
  os << "rings " << mol.sssr().size() << '\n';
  for (const auto& r : mol.sssr()) {
    os << "ring";
    for (int a : r) os << ' ' << a;
    os << '\n';
  }
  return os.str();
}

}  // namespace molbench
