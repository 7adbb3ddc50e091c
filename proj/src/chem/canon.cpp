// SPDX-License-Identifier: Apache-2.0
#include "molbench/chem/canon.h"

#include <algorithm>
#include <array>
#include <numeric>
#include <tuple>

namespace molbench {

namespace {

// rank[a] = number of atoms whose key sorts strictly before a's key.
template <class Less>
int assign_ranks(std::vector<int>& order, std::vector<int>& rank, Less less) {
  std::sort(order.begin(), order.end(), less);
  int classes = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (i == 0 || less(order[i - 1], order[i])) {
      rank[order[i]] = static_cast<int>(i);
      ++classes;
    } else {
      rank[order[i]] = rank[order[i - 1]];
    }
  }
  return classes;
}

int refine(const Molecule& mol, std::vector<int>& rank) {
  const int n = static_cast<int>(mol.num_atoms());
  std::vector<std::vector<std::pair<int, int>>> env(n);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<int> seen = rank;
  std::sort(seen.begin(), seen.end());
  int classes = static_cast<int>(std::unique(seen.begin(), seen.end()) - seen.begin());
  while (true) {
    for (int a = 0; a < n; ++a) {
      env[a].clear();
      for (const Neighbor& nb : mol.neighbors(a))
        env[a].emplace_back(rank[nb.atom], static_cast<int>(mol.bond(nb.bond).order));
      std::sort(env[a].begin(), env[a].end());
    }
    std::vector<int> next(n);
    const int c = assign_ranks(order, next, [&](int x, int y) {
      if (rank[x] != rank[y]) return rank[x] < rank[y];
      return env[x] < env[y];
    });
    rank = std::move(next);
    if (c == classes) return c;
    classes = c;
  }
}

std::vector<int> initial_ranks(const Molecule& mol) {
  const int n = static_cast<int>(mol.num_atoms());
  std::vector<int> order(n), rank(n);
  std::iota(order.begin(), order.end(), 0);
  auto key = [&](int a) {
    const Atom& at = mol.atom(a);
    return std::make_tuple(at.z, at.isotope, at.formal_charge, mol.degree(a), mol.total_h(a), at.aromatic);
  };
  assign_ranks(order, rank, [&](int x, int y) { return key(x) < key(y); });
  return rank;
}

// Individualization-refinement search over the tied classes. Each leaf is a
// discrete ranking; the one with the smallest certificate wins. Leaves equal
// to an earlier leaf yield automorphisms, which prune symmetric branches.
class CanonSearch {
 public:
  explicit CanonSearch(const Molecule& mol) : mol_(mol), n_(static_cast<int>(mol.num_atoms())) {}

  std::vector<int> run(std::vector<int> rank) {
    if (classes(rank) == n_) return rank;
    dfs(std::move(rank), 0);
    return best_rank_;
  }

 private:
  static constexpr int kNoJump = 1 << 30;
  static constexpr long kLeafBudget = 20000;

  int classes(const std::vector<int>& rank) const {
    std::vector<char> used(n_, 0);
    int c = 0;
    for (int r : rank)
      if (!used[r]) {
        used[r] = 1;
        ++c;
      }
    return c;
  }

  std::vector<int> certificate(const std::vector<int>& rank) const {
    std::vector<int> by_rank(n_);
    for (int a = 0; a < n_; ++a) by_rank[rank[a]] = a;
    std::vector<int> cert;
    cert.reserve(5 * n_ + 3 * mol_.num_bonds());
    for (int a : by_rank) {
      const Atom& at = mol_.atom(a);
      cert.insert(cert.end(), {at.z, at.isotope, at.formal_charge, at.hydrogens, at.aromatic ? 1 : 0});
    }
    std::vector<std::array<int, 3>> edges;
    for (const Bond& b : mol_.bonds()) {
      int x = rank[b.begin], y = rank[b.end];
      if (x > y) std::swap(x, y);
      edges.push_back({x, y, static_cast<int>(b.order)});
    }
    std::sort(edges.begin(), edges.end());
    for (const auto& e : edges) cert.insert(cert.end(), e.begin(), e.end());
    return cert;
  }

  // gamma maps each atom to the atom holding the same rank in `other`.
  std::vector<int> automorphism(const std::vector<int>& rank, const std::vector<int>& other) const {
    std::vector<int> at_rank(n_);
    for (int a = 0; a < n_; ++a) at_rank[other[a]] = a;
    std::vector<int> gamma(n_);
    for (int a = 0; a < n_; ++a) gamma[a] = at_rank[rank[a]];
    return gamma;
  }

  int find(std::vector<int>& uf, int x) const {
    while (uf[x] != x) x = uf[x] = uf[uf[x]];
    return x;
  }

  // Orbits under the stored automorphisms that fix the current path.
  std::vector<int> orbits() {
    std::vector<int> uf(n_);
    std::iota(uf.begin(), uf.end(), 0);
    for (const auto& g : gens_) {
      bool fixes = true;
      for (int p : path_)
        if (g[p] != p) fixes = false;
      if (!fixes) continue;
      for (int a = 0; a < n_; ++a) {
        const int x = find(uf, a), y = find(uf, g[a]);
        if (x != y) uf[std::max(x, y)] = std::min(x, y);
      }
    }
    for (int a = 0; a < n_; ++a) uf[a] = find(uf, a);
    return uf;
  }

  int leaf(const std::vector<int>& rank) {
    ++leaves_;
    std::vector<int> cert = certificate(rank);
    if (first_cert_.empty()) {
      first_cert_ = cert;
      first_rank_ = rank;
      first_path_ = path_;
      best_cert_ = std::move(cert);
      best_rank_ = rank;
      return kNoJump;
    }
    if (cert == first_cert_) {
      gens_.push_back(automorphism(rank, first_rank_));
      std::size_t d = 0;
      while (d < path_.size() && d < first_path_.size() && path_[d] == first_path_[d]) ++d;
      return static_cast<int>(d);
    }
    if (cert == best_cert_) {
      gens_.push_back(automorphism(rank, best_rank_));
    } else if (cert < best_cert_) {
      best_cert_ = std::move(cert);
      best_rank_ = rank;
    }
    return kNoJump;
  }

  int dfs(std::vector<int> rank, int level) {
    if (classes(rank) == n_) return leaf(rank);
    std::vector<int> count(n_, 0);
    for (int r : rank) ++count[r];
    int tied = 0;
    while (count[tied] < 2) ++tied;
    std::vector<int> cell;
    for (int a = 0; a < n_; ++a)
      if (rank[a] == tied) cell.push_back(a);
    std::vector<int> explored;
    for (int v : cell) {
      if (leaves_ >= kLeafBudget) return -1;
      if (!explored.empty()) {
        const std::vector<int> orb = orbits();
        bool seen = false;
        for (int u : explored)
          if (orb[u] == orb[v]) seen = true;
        if (seen) continue;
      }
      std::vector<int> child = rank;
      for (int a : cell)
        if (a != v) child[a] = tied + 1;
      refine(mol_, child);
      path_.push_back(v);
      const int jump = dfs(std::move(child), level + 1);
      path_.pop_back();
      explored.push_back(v);
      if (jump < level) return jump;
    }
    return kNoJump;
  }

  const Molecule& mol_;
  const int n_;
  std::vector<int> path_, first_path_;
  std::vector<int> first_cert_, first_rank_, best_cert_, best_rank_;
  std::vector<std::vector<int>> gens_;
  long leaves_ = 0;
};

}  // namespace

std::vector<int> symmetry_classes(const Molecule& mol) {
  std::vector<int> rank = initial_ranks(mol);
  refine(mol, rank);
  return rank;
}

std::vector<int> canonical_rank(const Molecule& mol) {
  std::vector<int> rank = initial_ranks(mol);
  refine(mol, rank);
  return CanonSearch(mol).run(std::move(rank));
}

}  // namespace molbench
