// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <string>
#include <vector>

#include "molbench/chem/canon.h"
#include "molbench/chem/smiles.h"

namespace molbench {

namespace {

int fit_valence(std::span<const std::uint8_t> allowed, int used) {
  for (std::uint8_t v : allowed)
    if (v >= used) return v;
  return -1;
}

bool plain_aromatic(int z) { return z == 5 || z == 6 || z == 7 || z == 8 || z == 15 || z == 16; }

class Writer {
 public:
  explicit Writer(const Molecule& m) : m_(m), rank_(canonical_rank(m)) {
    const int n = static_cast<int>(m.num_atoms());
    visited_.assign(n, false);
    bond_used_.assign(m.num_bonds(), false);
    children_.resize(n);
    closures_.resize(n);
    digit_.assign(m.num_bonds(), -1);
  }

  std::string run() {
    const int n = static_cast<int>(m_.num_atoms());
    std::vector<int> by_rank(n);
    for (int a = 0; a < n; ++a) by_rank[rank_[a]] = a;
    std::string out;
    for (int a : by_rank) {
      if (visited_[a]) continue;
      plan(a);
      if (!out.empty()) out += '.';
      emit(a, out);
    }
    return out;
  }

 private:
  struct Closure {
    int bond;
    int partner;
    bool opening;
  };

  std::vector<Neighbor> sorted_neighbors(int a) const {
    std::vector<Neighbor> nbs(m_.neighbors(a).begin(), m_.neighbors(a).end());
    std::sort(nbs.begin(), nbs.end(), [&](const Neighbor& x, const Neighbor& y) { return rank_[x.atom] < rank_[y.atom]; });
    return nbs;
  }

  void plan(int root) {
    struct Frame {
      int atom;
      std::vector<Neighbor> nbs;
      std::size_t next;
    };
    std::vector<Frame> stack;
    visited_[root] = true;
    stack.push_back({root, sorted_neighbors(root), 0});
    while (!stack.empty()) {
      Frame& f = stack.back();
      if (f.next == f.nbs.size()) {
        stack.pop_back();
        continue;
      }
      const Neighbor nb = f.nbs[f.next++];
      if (bond_used_[nb.bond]) continue;
      bond_used_[nb.bond] = true;
      if (visited_[nb.atom]) {
        closures_[nb.atom].push_back({nb.bond, f.atom, true});
        closures_[f.atom].push_back({nb.bond, nb.atom, false});
        continue;
      }
      const int parent = f.atom;
      children_[parent].push_back(nb);
      visited_[nb.atom] = true;
      stack.push_back({nb.atom, sorted_neighbors(nb.atom), 0});
    }
  }

  std::string bond_symbol(int b) const {
    const Bond& bd = m_.bond(b);
    switch (bd.order) {
      case BondOrder::Aromatic: return "";
      case BondOrder::Single:
        return (m_.atom(bd.begin).aromatic && m_.atom(bd.end).aromatic) ? "-" : "";
      case BondOrder::Double: return "=";
      case BondOrder::Triple: return "#";
    }
    return "";
  }

  std::string atom_text(int a) const {
    const Atom& at = m_.atom(a);
    const Element& e = at.elem();
    std::string sym(e.symbol);
    if (at.aromatic) sym[0] = static_cast<char>(sym[0] - 'A' + 'a');
    bool plain = e.organic_subset && at.formal_charge == 0 && at.isotope == 0 && (!at.aromatic || plain_aromatic(at.z));
    if (plain) {
      int used = 0;
      for (const Neighbor& nb : m_.neighbors(a)) {
        const Bond& bd = m_.bond(nb.bond);
        used += bd.order == BondOrder::Aromatic ? 1 : static_cast<int>(bd.order);
      }
      int predicted;
      if (at.aromatic) {
        const int v = fit_valence(e.valences, used);
        const int need = v > used ? 1 : 0;
        const int v2 = fit_valence(e.valences, used + need);
        predicted = v2 < 0 ? -1 : v2 - used - need;
      } else {
        const int v = fit_valence(e.valences, used);
        predicted = v < 0 ? -1 : v - used;
      }
      plain = predicted == at.hydrogens;
    }
    if (plain) return sym;
    std::string s = "[";
    if (at.isotope != 0) s += std::to_string(at.isotope);
    s += sym;
    if (at.hydrogens > 0) {
      s += 'H';
      if (at.hydrogens > 1) s += std::to_string(at.hydrogens);
    }
    if (at.formal_charge != 0) {
      s += at.formal_charge > 0 ? '+' : '-';
      const int mag = at.formal_charge > 0 ? at.formal_charge : -at.formal_charge;
      if (mag > 1) s += std::to_string(mag);
    }
    s += ']';
    return s;
  }

  int take_digit() {
    for (int d = 1;; ++d) {
      if (d >= static_cast<int>(digit_busy_.size())) digit_busy_.resize(d + 1, false);
      if (!digit_busy_[d]) {
        digit_busy_[d] = true;
        return d;
      }
    }
  }

  static std::string digit_text(int d) {
    if (d < 10) return std::to_string(d);
    if (d < 100) return "%" + std::to_string(d);
    return "%(" + std::to_string(d) + ")";
  }

  void emit(int root, std::string& out) {
    // Iterative pre-order walk; ')' is pushed as a marker.
    struct Item {
      int atom;  // -1 marks a closing parenthesis
      int bond;
      bool branch;
    };
    std::vector<Item> stack{{root, -1, false}};
    while (!stack.empty()) {
      const Item it = stack.back();
      stack.pop_back();
      if (it.atom < 0) {
        out += ')';
        continue;
      }
      if (it.branch) out += '(';
      if (it.bond >= 0) out += bond_symbol(it.bond);
      out += atom_text(it.atom);
      std::vector<int> to_free;
      auto& cl = closures_[it.atom];
      std::stable_sort(cl.begin(), cl.end(), [&](const Closure& x, const Closure& y) {
        if (x.opening != y.opening) return !x.opening;
        return rank_[x.partner] < rank_[y.partner];
      });
      for (const Closure& c : cl) {
        if (c.opening) {
          const int d = take_digit();
          digit_[c.bond] = d;
          out += bond_symbol(c.bond);
          out += digit_text(d);
        } else {
          out += digit_text(digit_[c.bond]);
          to_free.push_back(digit_[c.bond]);
        }
      }
      for (int d : to_free) digit_busy_[d] = false;
      const auto& kids = children_[it.atom];
      for (std::size_t k = kids.size(); k-- > 0;) {
        const bool branch = k + 1 < kids.size();
        if (branch) stack.push_back({-1, -1, false});
        stack.push_back({kids[k].atom, kids[k].bond, branch});
      }
    }
  }

  const Molecule& m_;
  std::vector<int> rank_;
  std::vector<bool> visited_;
  std::vector<bool> bond_used_;
  std::vector<std::vector<Neighbor>> children_;
  std::vector<std::vector<Closure>> closures_;
  std::vector<int> digit_;
  std::vector<bool> digit_busy_;
};

}  // namespace

std::string write_smiles(const Molecule& mol) {
  if (mol.num_atoms() == 0) return "";
  return Writer(mol).run();
}

}  // namespace molbench
