// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "molbench/chem/element.h"

namespace molbench {

enum class BondOrder : std::uint8_t { Single = 1, Double = 2, Triple = 3, Aromatic = 4 };

// Directional marks on single bonds ('/' and '\'), kept as written.
enum class BondStereo : std::uint8_t { None, Up, Down };

// Tetrahedral marks ('@' and '@@'), kept as written.
enum class Chirality : std::uint8_t { None, CounterClockwise, Clockwise };

struct Atom {
  std::uint8_t z = 6;
  std::int8_t formal_charge = 0;
  std::uint16_t isotope = 0;  // 0 = unspecified
  // Hydrogen count written inside brackets; nullopt for atoms whose count is
  // implied by the valence model.
  std::optional<std::uint8_t> explicit_h;
  // Hydrogens carried by this atom (implicit or bracket count). Hydrogen
  // atoms present as graph nodes are not included; see Molecule::total_h.
  std::uint8_t hydrogens = 0;
  bool aromatic = false;
  Chirality chirality = Chirality::None;
  int index = 0;

  const Element& elem() const { return *element(z); }
  bool is_hydrogen() const { return z == 1; }
};

struct Bond {
  int begin = 0;
  int end = 0;
  BondOrder order = BondOrder::Single;
  std::uint8_t kekule = 1;  // localized order; aromatic bonds get 1 or 2
  BondStereo stereo = BondStereo::None;
  bool in_ring = false;
  int index = 0;

  int other(int atom) const { return atom == begin ? end : begin; }
};

struct Neighbor {
  int atom;
  int bond;
};

class MolBuilder;

// Immutable molecular graph. Instances come from parse_smiles or
// MolBuilder::build, which assign hydrogens, rings and aromaticity.
class Molecule {
 public:
  Molecule() = default;

  std::size_t num_atoms() const { return atoms_.size(); }
  std::size_t num_bonds() const { return bonds_.size(); }
  const std::vector<Atom>& atoms() const { return atoms_; }
  const std::vector<Bond>& bonds() const { return bonds_; }
  const Atom& atom(int i) const { return atoms_[i]; }
  const Bond& bond(int i) const { return bonds_[i]; }

  std::span<const Neighbor> neighbors(int atom) const {
    return {adj_.data() + adj_start_[atom], adj_.data() + adj_start_[atom + 1]};
  }
  int degree(int atom) const { return adj_start_[atom + 1] - adj_start_[atom]; }
  int heavy_degree(int atom) const;
  // Attached hydrogens: the atom's own count plus hydrogen-atom neighbours.
  int total_h(int atom) const;
  // Sum of localized bond orders plus carried hydrogens.
  int kekule_valence(int atom) const;
  // -1 when the atoms are not bonded.
  int bond_between(int a, int b) const;

  // Smallest set of smallest rings: exactly |bonds| - |atoms| + |fragments|
  // cycles, each an ordered atom list.
  const std::vector<std::vector<int>>& sssr() const { return sssr_; }
  // Every cycle belonging to some minimum cycle basis. Superset of sssr();
  // independent of atom order, so ring-size queries use it.
  const std::vector<std::vector<int>>& ring_family() const { return rings_; }
  bool atom_in_ring(int atom) const { return ring_count_[atom] > 0; }
  int ring_count(int atom) const { return ring_count_[atom]; }
  bool atom_in_ring_of_size(int atom, int size) const;
  int smallest_ring_size(int atom) const;

  int num_fragments() const { return num_fragments_; }
  int fragment_of(int atom) const { return fragment_[atom]; }
  // Atoms of the fragment with the most heavy atoms (lowest fragment id on
  // ties), as a new molecule.
  Molecule largest_fragment() const;

  int num_heavy_atoms() const;

 private:
  friend class MolBuilder;
  void finalize_adjacency();

  std::vector<Atom> atoms_;
  std::vector<Bond> bonds_;
  std::vector<int> adj_start_{0};
  std::vector<Neighbor> adj_;
  std::vector<std::vector<int>> sssr_;
  std::vector<std::vector<int>> rings_;
  std::vector<std::uint8_t> ring_count_;
  std::vector<int> fragment_;
  int num_fragments_ = 0;
};

// Mutable staging area for molecules. build() validates elements and
// valences, localizes aromatic input into a Kekulé structure, assigns
// implicit hydrogens, perceives rings and re-perceives aromaticity.
class MolBuilder {
 public:
  struct AtomSpec {
    int z = 6;
    int charge = 0;
    int isotope = 0;
    std::optional<int> hydrogens;  // nullopt: derive from the valence model
    bool aromatic = false;         // lower-case input spelling
    Chirality chirality = Chirality::None;
  };

  MolBuilder() = default;
  // Editable copy with localized bond orders and every hydrogen count made
  // explicit, so edits control hydrogens exactly.
  static MolBuilder from(const Molecule& mol);

  int add_atom(const AtomSpec& spec);
  // Throws std::invalid_argument on self-bonds, duplicates or bad indices.
  int add_bond(int a, int b, BondOrder order, BondStereo stereo = BondStereo::None);
  void set_bond_order(int bond, BondOrder order);
  void remove_bond(int bond);
  // Drops the atoms and every bond touching them; remaining atoms keep their
  // relative order.
  void remove_atoms(std::span<const int> atoms);

  AtomSpec& atom(int i) { return atoms_[i]; }
  const AtomSpec& atom(int i) const { return atoms_[i]; }
  std::size_t num_atoms() const { return atoms_.size(); }
  std::size_t num_bonds() const { return bonds_.size(); }
  int bond_between(int a, int b) const;
  struct BondSpec {
    int a;
    int b;
    BondOrder order;
    BondStereo stereo;
  };
  const BondSpec& bond(int i) const { return bonds_[i]; }

  Molecule build() const;

 private:
  std::vector<AtomSpec> atoms_;
  std::vector<BondSpec> bonds_;
};

}  // namespace molbench
