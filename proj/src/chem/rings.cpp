// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <vector>

#include "perception.h"

namespace molbench::detail {

Graph::Graph(int atoms, const std::vector<std::pair<int, int>>& e) : n(atoms), edges(e), adj(atoms) {
  for (int i = 0; i < static_cast<int>(edges.size()); ++i) {
    adj[edges[i].first].push_back({edges[i].second, i});
    adj[edges[i].second].push_back({edges[i].first, i});
  }
}

std::vector<bool> cycle_edges(const Graph& g) {
  // Bridges via iterative low-link DFS; every non-bridge edge lies on a cycle.
  std::vector<bool> on_cycle(g.edges.size(), true);
  std::vector<int> disc(g.n, -1), low(g.n, 0);
  int timer = 0;
  struct Frame {
    int atom;
    int parent_edge;
    std::size_t next;
  };
  std::vector<Frame> stack;
  for (int root = 0; root < g.n; ++root) {
    if (disc[root] >= 0) continue;
    disc[root] = low[root] = timer++;
    stack.push_back({root, -1, 0});
    while (!stack.empty()) {
      Frame& f = stack.back();
      if (f.next < g.adj[f.atom].size()) {
        const Neighbor nb = g.adj[f.atom][f.next++];
        if (nb.bond == f.parent_edge) continue;
        if (disc[nb.atom] < 0) {
          disc[nb.atom] = low[nb.atom] = timer++;
          stack.push_back({nb.atom, nb.bond, 0});
        } else {
          low[f.atom] = std::min(low[f.atom], disc[nb.atom]);
        }
        continue;
      }
      const Frame done = f;
      stack.pop_back();
      if (!stack.empty()) {
        Frame& parent = stack.back();
        low[parent.atom] = std::min(low[parent.atom], low[done.atom]);
        if (low[done.atom] > disc[parent.atom]) on_cycle[done.parent_edge] = false;
      }
    }
  }
  return on_cycle;
}

namespace {

using Bits = std::vector<std::uint64_t>;

struct Candidate {
  Bits bits;
  int length;
  std::vector<int> atoms;
};

int lowest_bit(const Bits& b) {
  for (std::size_t w = 0; w < b.size(); ++w)
    if (b[w] != 0) return static_cast<int>(w * 64 + __builtin_ctzll(b[w]));
  return -1;
}

// Row-echelon basis over GF(2) keyed by pivot (lowest set bit).
class Basis {
 public:
  explicit Basis(std::size_t nbits) : rows_(nbits) {}

  // Reduces v in place; returns true when it is independent.
  bool reduce(Bits& v) const {
    for (int p = lowest_bit(v); p >= 0; p = lowest_bit(v)) {
      if (!rows_[p]) return true;
      const Bits& r = *rows_[p];
      for (std::size_t w = 0; w < v.size(); ++w) v[w] ^= r[w];
    }
    return false;
  }
  void insert_reduced(Bits v) {
    const int p = lowest_bit(v);
    rows_[p] = std::move(v);
  }

 private:
  std::vector<std::optional<Bits>> rows_;
};

}  // namespace

RingSets find_rings(const Graph& g, const std::vector<bool>& on_cycle) {
  RingSets out;
  std::vector<int> edge_slot(g.edges.size(), -1);
  int ne = 0;
  for (std::size_t e = 0; e < g.edges.size(); ++e)
    if (on_cycle[e]) edge_slot[e] = ne++;
  if (ne == 0) return out;
  const std::size_t words = (ne + 63) / 64;

  std::vector<bool> ring_atom(g.n, false);
  for (std::size_t e = 0; e < g.edges.size(); ++e)
    if (on_cycle[e]) ring_atom[g.edges[e].first] = ring_atom[g.edges[e].second] = true;

  std::vector<Candidate> cands;
  std::set<Bits> seen;
  std::vector<int> dist(g.n), parent(g.n), parent_edge(g.n), queue;
  std::vector<int> mark(g.n, -1);
  int stamp = 0;
  for (int x = 0; x < g.n; ++x) {
    if (!ring_atom[x]) continue;
    std::fill(dist.begin(), dist.end(), -1);
    queue.assign(1, x);
    dist[x] = 0;
    parent[x] = -1;
    parent_edge[x] = -1;
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
      const int a = queue[qi];
      for (const Neighbor& nb : g.adj[a]) {
        if (!on_cycle[nb.bond] || dist[nb.atom] >= 0) continue;
        dist[nb.atom] = dist[a] + 1;
        parent[nb.atom] = a;
        parent_edge[nb.atom] = nb.bond;
        queue.push_back(nb.atom);
      }
    }
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
      if (!on_cycle[e]) continue;
      int u = g.edges[e].first, v = g.edges[e].second;
      if (dist[u] < 0 || dist[v] < 0) continue;
      if (parent_edge[u] == static_cast<int>(e) || parent_edge[v] == static_cast<int>(e)) continue;
      // Paths x->u and x->v must meet only at x.
      const int tag = ++stamp;
      for (int a = u; a != -1; a = parent[a]) mark[a] = tag;
      bool disjoint = true;
      for (int a = v; a != x; a = parent[a])
        if (mark[a] == tag) {
          disjoint = false;
          break;
        }
      if (!disjoint) continue;
      Bits bits(words, 0);
      auto set_bit = [&](int edge) {
        const int s = edge_slot[edge];
        bits[s / 64] |= std::uint64_t{1} << (s % 64);
      };
      set_bit(static_cast<int>(e));
      std::vector<int> left, right;
      for (int a = u; a != x; a = parent[a]) {
        left.push_back(a);
        set_bit(parent_edge[a]);
      }
      for (int a = v; a != x; a = parent[a]) {
        right.push_back(a);
        set_bit(parent_edge[a]);
      }
      if (!seen.insert(bits).second) continue;
      Candidate c;
      c.length = static_cast<int>(left.size() + right.size() + 1);
      c.atoms.push_back(x);
      c.atoms.insert(c.atoms.end(), left.rbegin(), left.rend());
      c.atoms.insert(c.atoms.end(), right.begin(), right.end());
      c.bits = std::move(bits);
      cands.push_back(std::move(c));
    }
  }
  std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
    if (a.length != b.length) return a.length < b.length;
    return a.bits < b.bits;
  });

  Basis basis(static_cast<std::size_t>(ne));
  std::size_t i = 0;
  while (i < cands.size()) {
    std::size_t j = i;
    while (j < cands.size() && cands[j].length == cands[i].length) ++j;
    // Relevance is judged against strictly shorter cycles only.
    std::vector<bool> relevant(j - i);
    for (std::size_t k = i; k < j; ++k) {
      Bits v = cands[k].bits;
      relevant[k - i] = basis.reduce(v);
    }
    for (std::size_t k = i; k < j; ++k) {
      if (!relevant[k - i]) continue;
      out.family.push_back(cands[k].atoms);
      Bits v = cands[k].bits;
      if (basis.reduce(v)) {
        basis.insert_reduced(std::move(v));
        out.sssr.push_back(cands[k].atoms);
      }
    }
    i = j;
  }
  return out;
}

}  // namespace molbench::detail
