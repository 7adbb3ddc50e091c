// SPDX-License-Identifier: Apache-2.0
#include "molbench/chem/molecule.h"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "molbench/chem/errors.h"
#include "perception.h"

namespace molbench {

namespace {

int order_value(BondOrder o) {
  switch (o) {
    case BondOrder::Single: return 1;
    case BondOrder::Double: return 2;
    case BondOrder::Triple: return 3;
    case BondOrder::Aromatic: return 1;
  }
  return 1;
}

std::string describe(const MolBuilder::AtomSpec& a, int index) {
  const Element* e = element(a.z);
  std::string s = e ? std::string(e->symbol) : "?";
  if (a.charge != 0) s += (a.charge > 0 ? "+" : "") + std::to_string(a.charge);
  return s + " (atom " + std::to_string(index) + ")";
}

// Smallest allowed valence >= used, or -1.
int fit_valence(std::span<const std::uint8_t> allowed, int used) {
  for (std::uint8_t v : allowed)
    if (v >= used) return v;
  return -1;
}

}  // namespace

int Molecule::heavy_degree(int atom) const {
  int d = 0;
  for (const Neighbor& nb : neighbors(atom))
    if (atoms_[nb.atom].z != 1) ++d;
  return d;
}

int Molecule::total_h(int atom) const {
  int h = atoms_[atom].hydrogens;
  for (const Neighbor& nb : neighbors(atom))
    if (atoms_[nb.atom].z == 1) ++h;
  return h;
}

int Molecule::kekule_valence(int atom) const {
  int v = atoms_[atom].hydrogens;
  for (const Neighbor& nb : neighbors(atom)) v += bonds_[nb.bond].kekule;
  return v;
}

int Molecule::bond_between(int a, int b) const {
  for (const Neighbor& nb : neighbors(a))
    if (nb.atom == b) return nb.bond;
  return -1;
}

bool Molecule::atom_in_ring_of_size(int atom, int size) const {
  for (const auto& r : rings_)
    if (static_cast<int>(r.size()) == size && std::find(r.begin(), r.end(), atom) != r.end()) return true;
  return false;
}

int Molecule::smallest_ring_size(int atom) const {
  int best = 0;
  for (const auto& r : rings_)
    if (std::find(r.begin(), r.end(), atom) != r.end() && (best == 0 || static_cast<int>(r.size()) < best))
      best = static_cast<int>(r.size());
  return best;
}

int Molecule::num_heavy_atoms() const {
  int n = 0;
  for (const Atom& a : atoms_)
    if (a.z != 1) ++n;
  return n;
}

Molecule Molecule::largest_fragment() const {
  if (num_fragments_ <= 1) return *this;
  std::vector<int> heavy(num_fragments_, 0);
  for (const Atom& a : atoms_)
    if (a.z != 1) ++heavy[fragment_[a.index]];
  const int keep = static_cast<int>(std::max_element(heavy.begin(), heavy.end()) - heavy.begin());
  MolBuilder b = MolBuilder::from(*this);
  std::vector<int> drop;
  for (const Atom& a : atoms_)
    if (fragment_[a.index] != keep) drop.push_back(a.index);
  b.remove_atoms(drop);
  return b.build();
}

void Molecule::finalize_adjacency() {
  const int n = static_cast<int>(atoms_.size());
  adj_start_.assign(n + 1, 0);
  for (const Bond& b : bonds_) {
    ++adj_start_[b.begin + 1];
    ++adj_start_[b.end + 1];
  }
  for (int i = 0; i < n; ++i) adj_start_[i + 1] += adj_start_[i];
  adj_.assign(adj_start_[n], Neighbor{0, 0});
  std::vector<int> fill(adj_start_.begin(), adj_start_.end() - 1);
  for (const Bond& b : bonds_) {
    adj_[fill[b.begin]++] = {b.end, b.index};
    adj_[fill[b.end]++] = {b.begin, b.index};
  }
}

MolBuilder MolBuilder::from(const Molecule& mol) {
  MolBuilder b;
  for (const Atom& a : mol.atoms()) {
    AtomSpec s;
    s.z = a.z;
    s.charge = a.formal_charge;
    s.isotope = a.isotope;
    s.hydrogens = a.hydrogens;
    s.chirality = a.chirality;
    b.atoms_.push_back(s);
  }
  for (const Bond& bd : mol.bonds())
    b.bonds_.push_back({bd.begin, bd.end, static_cast<BondOrder>(bd.kekule), bd.stereo});
  return b;
}

int MolBuilder::add_atom(const AtomSpec& spec) {
  atoms_.push_back(spec);
  return static_cast<int>(atoms_.size()) - 1;
}

int MolBuilder::bond_between(int a, int b) const {
  for (std::size_t i = 0; i < bonds_.size(); ++i)
    if ((bonds_[i].a == a && bonds_[i].b == b) || (bonds_[i].a == b && bonds_[i].b == a))
      return static_cast<int>(i);
  return -1;
}

int MolBuilder::add_bond(int a, int b, BondOrder order, BondStereo stereo) {
  const int n = static_cast<int>(atoms_.size());
  if (a < 0 || b < 0 || a >= n || b >= n) throw std::invalid_argument("bond endpoint out of range");
  if (a == b) throw std::invalid_argument("bond joins an atom to itself");
  if (bond_between(a, b) >= 0) throw std::invalid_argument("duplicate bond");
  bonds_.push_back({a, b, order, stereo});
  return static_cast<int>(bonds_.size()) - 1;
}

void MolBuilder::set_bond_order(int bond, BondOrder order) { bonds_.at(bond).order = order; }

void MolBuilder::remove_bond(int bond) { bonds_.erase(bonds_.begin() + bond); }

void MolBuilder::remove_atoms(std::span<const int> atoms) {
  std::vector<bool> drop(atoms_.size(), false);
  for (int a : atoms) drop.at(a) = true;
  std::vector<int> remap(atoms_.size(), -1);
  std::vector<AtomSpec> kept;
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    if (drop[i]) continue;
    remap[i] = static_cast<int>(kept.size());
    kept.push_back(atoms_[i]);
  }
  std::vector<BondSpec> kept_bonds;
  for (const BondSpec& b : bonds_) {
    if (drop[b.a] || drop[b.b]) continue;
    kept_bonds.push_back({remap[b.a], remap[b.b], b.order, b.stereo});
  }
  atoms_ = std::move(kept);
  bonds_ = std::move(kept_bonds);
}

Molecule MolBuilder::build() const {
  Molecule m;
  const int n = static_cast<int>(atoms_.size());
  m.atoms_.resize(n);
  for (int i = 0; i < n; ++i) {
    const AtomSpec& s = atoms_[i];
    const Element* e = element(s.z);
    if (e == nullptr || !e->supported)
      throw ElementError("unsupported element " + std::string(e ? e->symbol : "?"));
    if (s.charge < -8 || s.charge > 8) throw ValenceError("formal charge out of range on " + describe(s, i));
    if (s.hydrogens && (*s.hydrogens < 0 || *s.hydrogens > 8))
      throw ValenceError("hydrogen count out of range on " + describe(s, i));
    Atom& a = m.atoms_[i];
    a.z = static_cast<std::uint8_t>(s.z);
    a.formal_charge = static_cast<std::int8_t>(s.charge);
    a.isotope = static_cast<std::uint16_t>(s.isotope);
    if (s.hydrogens) a.explicit_h = static_cast<std::uint8_t>(*s.hydrogens);
    a.chirality = s.chirality;
    a.index = i;
  }

  std::vector<std::pair<int, int>> edges;
  edges.reserve(bonds_.size());
  for (const BondSpec& b : bonds_) edges.emplace_back(b.a, b.b);
  const detail::Graph g(n, edges);
  const std::vector<bool> on_cycle = detail::cycle_edges(g);

  // Aromatic input: bonds between two lower-case atoms on a cycle stay
  // aromatic; everything else is localized as written.
  std::vector<bool> arom_bond(bonds_.size(), false);
  for (std::size_t i = 0; i < bonds_.size(); ++i) {
    const BondSpec& b = bonds_[i];
    if (b.order != BondOrder::Aromatic) continue;
    if (!atoms_[b.a].aromatic || !atoms_[b.b].aromatic)
      throw KekulizationError("aromatic bond between non-aromatic atoms");
    arom_bond[i] = on_cycle[i];
  }
  std::vector<bool> need(n, false);
  std::vector<int> sum(n, 0);
  for (std::size_t i = 0; i < bonds_.size(); ++i) {
    const int v = order_value(bonds_[i].order);
    sum[bonds_[i].a] += v;
    sum[bonds_[i].b] += v;
  }
  for (int i = 0; i < n; ++i) {
    const AtomSpec& s = atoms_[i];
    if (!s.aromatic) continue;
    bool has_arom = false;
    for (const Neighbor& nb : g.adj[i])
      if (arom_bond[nb.bond]) has_arom = true;
    if (!has_arom) throw KekulizationError("non-ring atom marked aromatic: " + describe(s, i));
    const int used = sum[i] + s.hydrogens.value_or(0);
    const int v = fit_valence(charged_valences(s.z, s.charge), used);
    need[i] = v > used;
  }
  std::vector<std::uint8_t> is_double;
  bool any_arom = std::find(arom_bond.begin(), arom_bond.end(), true) != arom_bond.end();
  if (any_arom) is_double = detail::kekulize(g, need, arom_bond);

  m.bonds_.resize(bonds_.size());
  for (std::size_t i = 0; i < bonds_.size(); ++i) {
    Bond& b = m.bonds_[i];
    b.begin = bonds_[i].a;
    b.end = bonds_[i].b;
    b.index = static_cast<int>(i);
    b.stereo = bonds_[i].stereo;
    b.in_ring = on_cycle[i];
    if (bonds_[i].order == BondOrder::Aromatic)
      b.kekule = (arom_bond[i] && is_double[i]) ? 2 : 1;
    else
      b.kekule = static_cast<std::uint8_t>(order_value(bonds_[i].order));
    b.order = static_cast<BondOrder>(b.kekule);
  }
  m.finalize_adjacency();

  for (int i = 0; i < n; ++i) {
    const AtomSpec& s = atoms_[i];
    int used = 0;
    for (const Neighbor& nb : m.neighbors(i)) used += m.bonds_[nb.bond].kekule;
    const auto allowed = charged_valences(s.z, s.charge);
    if (allowed.empty()) throw ValenceError("no valence state for " + describe(s, i));
    if (s.hydrogens) {
      // Written counts are taken as given; radicals stay below the ceiling.
      if (used + *s.hydrogens > allowed.back())
        throw ValenceError("valence exceeded on " + describe(s, i));
      m.atoms_[i].hydrogens = static_cast<std::uint8_t>(*s.hydrogens);
    } else {
      const int v = fit_valence(allowed, used);
      if (v < 0) throw ValenceError("valence exceeded on " + describe(s, i));
      m.atoms_[i].hydrogens = static_cast<std::uint8_t>(v - used);
    }
  }

  detail::RingSets rings = detail::find_rings(g, on_cycle);
  m.sssr_ = std::move(rings.sssr);
  m.rings_ = std::move(rings.family);
  m.ring_count_.assign(n, 0);
  for (const auto& r : m.rings_)
    for (int a : r) ++m.ring_count_[a];

  std::vector<bool> atom_arom, bond_arom;
  detail::perceive_aromaticity({&m.atoms_, &m.bonds_, &g, &m.rings_}, atom_arom, bond_arom);
  for (int i = 0; i < n; ++i) m.atoms_[i].aromatic = atom_arom[i];
  for (std::size_t i = 0; i < m.bonds_.size(); ++i)
    if (bond_arom[i]) m.bonds_[i].order = BondOrder::Aromatic;

  m.fragment_.assign(n, -1);
  int frag = 0;
  std::vector<int> stack;
  for (int i = 0; i < n; ++i) {
    if (m.fragment_[i] >= 0) continue;
    m.fragment_[i] = frag;
    stack.assign(1, i);
    while (!stack.empty()) {
      const int a = stack.back();
      stack.pop_back();
      for (const Neighbor& nb : m.neighbors(a))
        if (m.fragment_[nb.atom] < 0) {
          m.fragment_[nb.atom] = frag;
          stack.push_back(nb.atom);
        }
    }
    ++frag;
  }
  m.num_fragments_ = frag;
  return m;
}

}  // namespace molbench
