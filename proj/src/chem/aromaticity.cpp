// SPDX-License-Identifier: Apache-2.0
#include <bit>
#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "molbench/chem/errors.h"
#include "perception.h"

namespace molbench::detail {

namespace {

class Matcher {
 public:
  Matcher(const Graph& g, const std::vector<bool>& need, const std::vector<bool>& arom)
      : g_(g), need_(need), arom_(arom), mate_(g.n, -1), is_double_(g.edges.size(), 0) {}

  bool solve() {
    // Atom with the fewest open partners first keeps the search near-linear
    // on real ring systems.
    int best = -1, best_opts = 1 << 30;
    for (int a = 0; a < g_.n; ++a) {
      if (!need_[a] || mate_[a] >= 0) continue;
      const int opts = options(a);
      if (opts < best_opts) {
        best = a;
        best_opts = opts;
        if (opts <= 1) break;
      }
    }
    if (best < 0) return true;
    if (best_opts == 0) return false;
    if (++steps_ > kBudget) throw KekulizationError("kekulization search budget exhausted");
    for (const Neighbor& nb : g_.adj[best]) {
      if (!open(best, nb)) continue;
      mate_[best] = nb.atom;
      mate_[nb.atom] = best;
      is_double_[nb.bond] = 1;
      if (solve()) return true;
      mate_[best] = mate_[nb.atom] = -1;
      is_double_[nb.bond] = 0;
    }
    return false;
  }

  std::vector<std::uint8_t> result() const { return is_double_; }

 private:
  static constexpr long kBudget = 200000;

  bool open(int a, const Neighbor& nb) const {
    return arom_[nb.bond] && need_[nb.atom] && mate_[nb.atom] < 0 && nb.atom != a;
  }
  int options(int a) const {
    int n = 0;
    for (const Neighbor& nb : g_.adj[a])
      if (open(a, nb)) ++n;
    return n;
  }

  const Graph& g_;
  const std::vector<bool>& need_;
  const std::vector<bool>& arom_;
  std::vector<int> mate_;
  std::vector<std::uint8_t> is_double_;
  long steps_ = 0;
};

// Pi electrons an atom donates to a ring it sits in, or -1 when the atom
// cannot be part of an aromatic ring.
int donor_electrons(const AromaticInput& in, int a) {
  const Atom& atom = (*in.atoms)[a];
  const auto& adj = in.graph->adj[a];
  if (atom.z == 1) return -1;
  int connections = static_cast<int>(adj.size()) + atom.hydrogens;
  if (connections > 3) return -1;
  int doubles = 0, triples = 0, valence = atom.hydrogens;
  int double_partner = -1, double_bond = -1;
  for (const Neighbor& nb : adj) {
    const int order = (*in.bonds)[nb.bond].kekule;
    valence += order;
    if (order == 2) {
      ++doubles;
      double_partner = nb.atom;
      double_bond = nb.bond;
    }
    if (order == 3) ++triples;
  }
  if (triples > 0 || doubles > 1) return -1;
  if (doubles == 1) {
    if ((*in.bonds)[double_bond].in_ring) return 1;
    const int pz = (*in.atoms)[double_partner].z;
    // An exocyclic double bond to a more electronegative atom leaves a vacant
    // p orbital, but only for atoms at their lowest valence (C=O, [N+]=O;
    // not S(=O)).
    const auto allowed = charged_valences(atom.z, atom.formal_charge);
    if (!allowed.empty() && allowed.front() == valence &&
        electronegativity(pz) > electronegativity(atom.z))
      return 0;
    return -1;
  }
  const int ve = valence_electrons(atom.z);
  if (ve < 0) return -1;
  const int free_electrons = ve - atom.formal_charge - valence;
  if (free_electrons >= 2) return 2;
  if (free_electrons == 0) return 0;
  return -1;  // radical
}

bool huckel(int electrons) { return electrons >= 2 && (electrons - 2) % 4 == 0; }

}  // namespace

std::vector<std::uint8_t> kekulize(const Graph& g, const std::vector<bool>& needs_double,
                                   const std::vector<bool>& aromatic_bond) {
  Matcher m(g, needs_double, aromatic_bond);
  if (!m.solve()) throw KekulizationError("aromatic system admits no alternating bond assignment");
  return m.result();
}

void perceive_aromaticity(const AromaticInput& in, std::vector<bool>& atom_aromatic,
                          std::vector<bool>& bond_aromatic) {
  const auto& rings = *in.rings;
  const int n = in.graph->n;
  atom_aromatic.assign(n, false);
  bond_aromatic.assign(in.graph->edges.size(), false);
  if (rings.empty()) return;

  std::vector<int> donor(n, -1);
  std::vector<bool> in_some_ring(n, false);
  for (const auto& r : rings)
    for (int a : r) in_some_ring[a] = true;
  for (int a = 0; a < n; ++a)
    if (in_some_ring[a]) donor[a] = donor_electrons(in, a);

  auto ring_bond = [&](int a, int b) {
    for (const Neighbor& nb : in.graph->adj[a])
      if (nb.atom == b) return nb.bond;
    return -1;
  };

  // Rings whose every atom can donate.
  std::vector<int> candidates;
  std::vector<std::vector<int>> ring_bonds(rings.size());
  for (std::size_t r = 0; r < rings.size(); ++r) {
    bool ok = true;
    for (int a : rings[r])
      if (donor[a] < 0) ok = false;
    if (!ok) continue;
    const auto& ring = rings[r];
    for (std::size_t i = 0; i < ring.size(); ++i)
      ring_bonds[r].push_back(ring_bond(ring[i], ring[(i + 1) % ring.size()]));
    candidates.push_back(static_cast<int>(r));
  }

  auto mark = [&](const std::vector<int>& atoms, const std::vector<int>& bonds) {
    for (int a : atoms) atom_aromatic[a] = true;
    for (int b : bonds) bond_aromatic[b] = true;
  };

  for (int r : candidates) {
    int electrons = 0;
    for (int a : rings[r]) electrons += donor[a];
    if (huckel(electrons)) mark(rings[r], ring_bonds[r]);
  }

  // Fused candidates (rings sharing exactly one bond) are also tested as the
  // union of every connected subset of rings (azulene-type and
  // larger envelopes).
  const int k = static_cast<int>(candidates.size());
  std::vector<std::uint32_t> fused(k, 0);
  for (int i = 0; i < k; ++i) {
    std::set<int> b1(ring_bonds[candidates[i]].begin(), ring_bonds[candidates[i]].end());
    for (int j = 0; j < k; ++j) {
      if (i == j) continue;
      int shared = 0;
      for (int b : ring_bonds[candidates[j]])
        if (b1.count(b)) ++shared;
      if (shared == 1 && j < 32) fused[i] |= 1u << j;
    }
  }
  std::vector<bool> seen(k, false);
  for (int s0 = 0; s0 < k && s0 < 32; ++s0) {
    if (seen[s0] || fused[s0] == 0) continue;
    std::vector<int> comp;
    std::vector<int> todo{s0};
    seen[s0] = true;
    while (!todo.empty()) {
      const int r = todo.back();
      todo.pop_back();
      comp.push_back(r);
      for (int j = 0; j < k && j < 32; ++j)
        if ((fused[r] >> j & 1u) && !seen[j]) {
          seen[j] = true;
          todo.push_back(j);
        }
    }
    const int m = static_cast<int>(comp.size());
    if (m > 16) continue;  // TODO: bounded search for very large fused systems
    for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
      const int pc = std::popcount(mask);
      if (pc < 2) continue;
      // Connectivity of the chosen rings.
      std::uint32_t reach = mask & (~mask + 1), grown = 0;
      while (reach != grown) {
        grown = reach;
        for (int i = 0; i < m; ++i)
          if (reach >> i & 1u)
            for (int j = 0; j < m; ++j)
              if ((mask >> j & 1u) && (fused[comp[i]] >> comp[j] & 1u)) reach |= 1u << j;
      }
      if (reach != mask) continue;
      std::set<int> atoms;
      std::map<int, int> uses;
      bool all_done = true;
      for (int i = 0; i < m; ++i) {
        if (!(mask >> i & 1u)) continue;
        const int r = candidates[comp[i]];
        atoms.insert(rings[r].begin(), rings[r].end());
        for (int b : ring_bonds[r]) {
          ++uses[b];
          if (!bond_aromatic[b]) all_done = false;
        }
      }
      if (all_done) continue;
      // Only the perimeter becomes aromatic; bonds shared inside the union
      // keep their localized order unless another ring claims them.
      std::vector<int> bonds;
      for (auto [b, k] : uses)
        if (k == 1) bonds.push_back(b);
      int electrons = 0;
      for (int a : atoms) electrons += donor[a];
      if (huckel(electrons)) mark(std::vector<int>(atoms.begin(), atoms.end()), bonds);
    }
  }
}

}  // namespace molbench::detail
