// SPDX-License-Identifier: Apache-2.0
#include "molbench/patterns/smarts.h"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <unordered_map>

#include "molbench/chem/element.h"

namespace molbench {

namespace {

enum class Prim : std::uint8_t {
  True,
  Element,     // value = Z, arom = -1 any / 0 aliphatic / 1 aromatic
  Aromatic,
  Aliphatic,
  TotalH,
  Degree,
  TotalDegree,
  Valence,
  RingCount,   // value < 0: in any ring
  RingSize,    // smallest ring size; value < 0: in any ring
  Charge,
  Isotope,
  Recursive,   // value = index into Impl::recursive
  // bond primitives
  BondSingle,
  BondDouble,
  BondTriple,
  BondAromatic,
  BondRing,
  BondDefault,  // single or aromatic
};

enum class Op : std::uint8_t { Leaf, Not, And, Or };

struct Node {
  Op op = Op::Leaf;
  Prim prim = Prim::True;
  int value = 0;
  int arom = -1;
  int a = -1, b = -1;
};

struct Expr {
  std::vector<Node> nodes;
  int root = -1;

  int leaf(Prim p, int value = 0, int arom = -1) {
    nodes.push_back({Op::Leaf, p, value, arom, -1, -1});
    return static_cast<int>(nodes.size()) - 1;
  }
  int combine(Op op, int a, int b = -1) {
    nodes.push_back({op, Prim::True, 0, -1, a, b});
    return static_cast<int>(nodes.size()) - 1;
  }
};

struct PBond {
  int a, b;
  Expr q;
};

}  // namespace

struct Pattern::Impl {
  std::string text;
  std::vector<Expr> atoms;
  std::vector<int> map;
  std::vector<PBond> bonds;
  std::vector<Pattern> recursive;
  // Matching plan: atoms in search order; for each, the bonds back to atoms
  // placed earlier (the first one generates candidates).
  std::vector<int> order;
  std::vector<std::vector<int>> back_bonds;
};

namespace {

bool is_bond_char(char c) {
  return c == '-' || c == '=' || c == '#' || c == ':' || c == '~' || c == '@' || c == '/' || c == '\\' ||
         c == '!' || c == '&' || c == ',' || c == ';';
}

class ExprParser {
 public:
  ExprParser(std::string_view s, Pattern::Impl& impl, bool bond) : s_(s), impl_(impl), bond_(bond) {}

  Expr run() {
    Expr e;
    e_ = &e;
    if (s_.empty()) {
      e.root = e.leaf(bond_ ? Prim::BondDefault : Prim::True);
      return e;
    }
    e.root = low();
    if (pos_ != s_.size()) fail("unexpected character");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw PatternError(why + " in '" + std::string(s_) + "' at " + std::to_string(pos_));
  }
  bool done() const { return pos_ >= s_.size(); }
  char peek() const { return done() ? '\0' : s_[pos_]; }

  int low() {
    int l = disj();
    while (peek() == ';') {
      ++pos_;
      l = e_->combine(Op::And, l, disj());
    }
    return l;
  }
  int disj() {
    int l = conj();
    while (peek() == ',') {
      ++pos_;
      l = e_->combine(Op::Or, l, conj());
    }
    return l;
  }
  int conj() {
    int l = unary();
    while (!done() && peek() != ',' && peek() != ';') {
      if (peek() == '&') ++pos_;
      l = e_->combine(Op::And, l, unary());
    }
    return l;
  }
  int unary() {
    if (peek() == '!') {
      ++pos_;
      return e_->combine(Op::Not, unary());
    }
    return bond_ ? bond_prim() : atom_prim();
  }

  int number(int fallback) {
    if (done() || !std::isdigit(static_cast<unsigned char>(peek()))) return fallback;
    int v = 0;
    while (!done() && std::isdigit(static_cast<unsigned char>(peek()))) v = v * 10 + (s_[pos_++] - '0');
    return v;
  }

  int bond_prim() {
    const char c = peek();
    ++pos_;
    switch (c) {
      case '-':
      case '/':
      case '\\': return e_->leaf(Prim::BondSingle);
      case '=': return e_->leaf(Prim::BondDouble);
      case '#': return e_->leaf(Prim::BondTriple);
      case ':': return e_->leaf(Prim::BondAromatic);
      case '~': return e_->leaf(Prim::True);
      case '@': return e_->leaf(Prim::BondRing);
      default: --pos_; fail("bad bond primitive");
    }
  }

  int atom_prim() {
    const char c = peek();
    if (c == '\0') fail("missing atom primitive");
    if (c == '$') {
      if (pos_ + 1 >= s_.size() || s_[pos_ + 1] != '(') fail("expected '(' after '$'");
      std::size_t depth = 0, j = pos_ + 1;
      for (; j < s_.size(); ++j) {
        if (s_[j] == '(') ++depth;
        if (s_[j] == ')' && --depth == 0) break;
      }
      if (j >= s_.size()) fail("unclosed recursive pattern");
      impl_.recursive.push_back(Pattern::parse(s_.substr(pos_ + 2, j - pos_ - 2)));
      pos_ = j + 1;
      return e_->leaf(Prim::Recursive, static_cast<int>(impl_.recursive.size()) - 1);
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return e_->leaf(Prim::Isotope, number(0));
    // Two-letter element symbols win over one-letter primitives (Hg, Rb, Db).
    if (std::isupper(static_cast<unsigned char>(c)) && pos_ + 1 < s_.size() &&
        std::islower(static_cast<unsigned char>(s_[pos_ + 1]))) {
      const char two[3] = {c, s_[pos_ + 1], '\0'};
      if (element_by_symbol(two)) return element_prim();
    }
    ++pos_;
    switch (c) {
      case '*': return e_->leaf(Prim::True);
      case '#': {
        const int z = number(-1);
        if (z < 0) fail("expected atomic number");
        return e_->leaf(Prim::Element, z, -1);
      }
      case '+':
      case '-': {
        const int sign = c == '+' ? 1 : -1;
        if (std::isdigit(static_cast<unsigned char>(peek()))) return e_->leaf(Prim::Charge, sign * number(0));
        int n = 1;
        while (peek() == c) {
          ++pos_;
          ++n;
        }
        return e_->leaf(Prim::Charge, sign * n);
      }
      case '@':
        while (peek() == '@') ++pos_;
        return e_->leaf(Prim::True);
      case 'D': return e_->leaf(Prim::Degree, number(1));
      case 'X': return e_->leaf(Prim::TotalDegree, number(1));
      case 'v': return e_->leaf(Prim::Valence, number(1));
      case 'H': return e_->leaf(Prim::TotalH, number(1));
      case 'R': return e_->leaf(Prim::RingCount, number(-1));
      case 'r': return e_->leaf(Prim::RingSize, number(-1));
      default: break;
    }
    --pos_;
    return element_prim();
  }

  int element_prim() {
    const char c = peek();
    if (std::isupper(static_cast<unsigned char>(c))) {
      if (pos_ + 1 < s_.size() && std::islower(static_cast<unsigned char>(s_[pos_ + 1]))) {
        const char two[3] = {c, s_[pos_ + 1], '\0'};
        if (const Element* e = element_by_symbol(two)) {
          pos_ += 2;
          return e_->leaf(Prim::Element, e->z, 0);
        }
      }
      if (c == 'A') {
        ++pos_;
        return e_->leaf(Prim::Aliphatic);
      }
      const char one[2] = {c, '\0'};
      if (const Element* e = element_by_symbol(one)) {
        ++pos_;
        return e_->leaf(Prim::Element, e->z, 0);
      }
      fail("unknown element");
    }
    if (std::islower(static_cast<unsigned char>(c))) {
      if (pos_ + 1 < s_.size()) {
        const std::string_view two = s_.substr(pos_, 2);
        if (two == "se" || two == "as" || two == "te") {
          pos_ += 2;
          const char up[3] = {static_cast<char>(std::toupper(two[0])), two[1], '\0'};
          return e_->leaf(Prim::Element, element_by_symbol(up)->z, 1);
        }
      }
      ++pos_;
      switch (c) {
        case 'a': return e_->leaf(Prim::Aromatic);
        case 'b': return e_->leaf(Prim::Element, 5, 1);
        case 'c': return e_->leaf(Prim::Element, 6, 1);
        case 'n': return e_->leaf(Prim::Element, 7, 1);
        case 'o': return e_->leaf(Prim::Element, 8, 1);
        case 'p': return e_->leaf(Prim::Element, 15, 1);
        case 's': return e_->leaf(Prim::Element, 16, 1);
        default: --pos_; fail("unknown aromatic symbol");
      }
    }
    fail("bad atom primitive");
  }

  std::string_view s_;
  Pattern::Impl& impl_;
  bool bond_;
  std::size_t pos_ = 0;
  Expr* e_ = nullptr;
};

// Splits off a trailing ":<digits>" map number at bracket top level.
int strip_map(std::string_view& body) {
  int depth = 0;
  std::size_t colon = std::string_view::npos;
  for (std::size_t i = 0; i < body.size(); ++i) {
    if (body[i] == '(') ++depth;
    if (body[i] == ')') --depth;
    if (body[i] == ':' && depth == 0) colon = i;
  }
  if (colon == std::string_view::npos || colon + 1 >= body.size()) return 0;
  for (std::size_t i = colon + 1; i < body.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(body[i]))) return 0;
  const int m = std::stoi(std::string(body.substr(colon + 1)));
  body = body.substr(0, colon);
  return m;
}

Expr bracket_atom(std::string_view body, Pattern::Impl& impl) {
  // "[H]", "[H+]", "[2H]": a hydrogen atom rather than an H count.
  std::size_t i = 0;
  while (i < body.size() && std::isdigit(static_cast<unsigned char>(body[i]))) ++i;
  if (i < body.size() && body[i] == 'H' &&
      (i + 1 == body.size() || body[i + 1] == '+' || body[i + 1] == '-')) {
    Expr e;
    int node = e.leaf(Prim::Element, 1, -1);
    if (i > 0) node = e.combine(Op::And, node, e.leaf(Prim::Isotope, std::stoi(std::string(body.substr(0, i)))));
    if (i + 1 < body.size()) {
      std::string rest(body.substr(i + 1));
      Expr charge = ExprParser(rest, impl, false).run();
      const int off = static_cast<int>(e.nodes.size());
      for (Node n : charge.nodes) {
        if (n.a >= 0) n.a += off;
        if (n.b >= 0) n.b += off;
        e.nodes.push_back(n);
      }
      node = e.combine(Op::And, node, charge.root + off);
    }
    e.root = node;
    return e;
  }
  return ExprParser(body, impl, false).run();
}

void build_plan(Pattern::Impl& p) {
  const int n = static_cast<int>(p.atoms.size());
  std::vector<std::vector<std::pair<int, int>>> adj(n);
  for (std::size_t b = 0; b < p.bonds.size(); ++b) {
    adj[p.bonds[b].a].emplace_back(p.bonds[b].b, static_cast<int>(b));
    adj[p.bonds[b].b].emplace_back(p.bonds[b].a, static_cast<int>(b));
  }
  std::vector<int> pos(n, -1);
  for (int root = 0; root < n; ++root) {
    if (pos[root] >= 0) continue;
    std::vector<int> stack{root};
    while (!stack.empty()) {
      const int a = stack.back();
      stack.pop_back();
      if (pos[a] >= 0) continue;
      pos[a] = static_cast<int>(p.order.size());
      p.order.push_back(a);
      for (auto it = adj[a].rbegin(); it != adj[a].rend(); ++it)
        if (pos[it->first] < 0) stack.push_back(it->first);
    }
  }
  p.back_bonds.assign(n, {});
  for (int k = 0; k < n; ++k) {
    const int a = p.order[k];
    // Earliest-placed neighbour first so it drives candidate generation.
    std::vector<std::pair<int, int>> back;
    for (auto [nb, b] : adj[a])
      if (pos[nb] < k) back.emplace_back(pos[nb], b);
    std::sort(back.begin(), back.end());
    for (auto [_, b] : back) p.back_bonds[k].push_back(b);
  }
}

}  // namespace

Pattern Pattern::parse(std::string_view text) {
  auto impl = std::make_shared<Impl>();
  impl->text = std::string(text);
  std::vector<int> branch_stack;
  std::map<int, std::pair<int, Expr>> open_rings;
  std::string pending;  // bond expression text before the next atom
  bool have_pending = false;
  int prev = -1;
  std::size_t i = 0;
  const std::size_t n = text.size();

  auto add_atom = [&](Expr e, int map) {
    impl->atoms.push_back(std::move(e));
    impl->map.push_back(map);
    const int idx = static_cast<int>(impl->atoms.size()) - 1;
    if (prev >= 0) impl->bonds.push_back({prev, idx, ExprParser(pending, *impl, true).run()});
    else if (have_pending) throw PatternError("bond without preceding atom in '" + impl->text + "'");
    pending.clear();
    have_pending = false;
    prev = idx;
  };

  while (i < n) {
    const char c = text[i];
    if (c == '(') {
      if (prev < 0) throw PatternError("branch without atom in '" + impl->text + "'");
      branch_stack.push_back(prev);
      ++i;
    } else if (c == ')') {
      if (branch_stack.empty()) throw PatternError("unmatched ')' in '" + impl->text + "'");
      prev = branch_stack.back();
      branch_stack.pop_back();
      ++i;
    } else if (c == '.') {
      prev = -1;
      ++i;
    } else if (is_bond_char(c)) {
      pending += c;
      have_pending = true;
      ++i;
    } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '%') {
      int num;
      if (c == '%') {
        if (i + 2 >= n) throw PatternError("bad ring number in '" + impl->text + "'");
        num = std::stoi(std::string(text.substr(i + 1, 2)));
        i += 3;
      } else {
        num = c - '0';
        ++i;
      }
      if (prev < 0) throw PatternError("ring closure without atom in '" + impl->text + "'");
      auto it = open_rings.find(num);
      if (it == open_rings.end()) {
        open_rings.emplace(num, std::make_pair(prev, ExprParser(pending, *impl, true).run()));
      } else {
        Expr q = have_pending ? ExprParser(pending, *impl, true).run() : std::move(it->second.second);
        impl->bonds.push_back({it->second.first, prev, std::move(q)});
        open_rings.erase(it);
      }
      pending.clear();
      have_pending = false;
    } else if (c == '[') {
      int depth = 0;
      std::size_t j = i + 1;
      for (; j < n; ++j) {
        if (text[j] == '(') ++depth;
        if (text[j] == ')') --depth;
        if (text[j] == ']' && depth == 0) break;
      }
      if (j >= n) throw PatternError("unclosed '[' in '" + impl->text + "'");
      std::string_view body = text.substr(i + 1, j - i - 1);
      const int map = strip_map(body);
      add_atom(bracket_atom(body, *impl), map);
      i = j + 1;
    } else {
      // Unbracketed atom: organic subset, aromatic symbols, '*', 'a', 'A'.
      std::size_t len = 1;
      if ((c == 'C' && i + 1 < n && text[i + 1] == 'l') || (c == 'B' && i + 1 < n && text[i + 1] == 'r')) len = 2;
      static const std::set<std::string_view> allowed = {"B", "C", "N", "O", "P", "S", "F", "Cl", "Br", "I",
                                                         "b", "c", "n", "o", "p", "s", "*", "a", "A"};
      const std::string_view sym = text.substr(i, len);
      if (!allowed.count(sym)) throw PatternError("unexpected '" + std::string(sym) + "' in '" + impl->text + "'");
      add_atom(ExprParser(sym, *impl, false).run(), 0);
      i += len;
    }
  }
  if (!branch_stack.empty()) throw PatternError("unclosed branch in '" + impl->text + "'");
  if (!open_rings.empty()) throw PatternError("unclosed ring in '" + impl->text + "'");
  if (have_pending) throw PatternError("trailing bond in '" + impl->text + "'");
  if (impl->atoms.empty()) throw PatternError("empty pattern");
  build_plan(*impl);
  Pattern p;
  p.impl_ = std::move(impl);
  return p;
}

Pattern::Pattern() = default;
Pattern::~Pattern() = default;
Pattern::Pattern(const Pattern&) = default;
Pattern& Pattern::operator=(const Pattern&) = default;
Pattern::Pattern(Pattern&&) noexcept = default;
Pattern& Pattern::operator=(Pattern&&) noexcept = default;

const std::string& Pattern::text() const { return impl_->text; }
int Pattern::num_atoms() const { return impl_ ? static_cast<int>(impl_->atoms.size()) : 0; }
int Pattern::map_number(int pattern_atom) const { return impl_->map[pattern_atom]; }
bool Pattern::connected() const {
  for (std::size_t k = 1; k < impl_->order.size(); ++k)
    if (impl_->back_bonds[k].empty()) return false;
  return true;
}

struct Matcher::State {
  struct Props {
    int total_h, degree, total_degree, valence, ring_count, min_ring;
  };

  explicit State(const Molecule& m) : mol(m) {
    props.reserve(m.num_atoms());
    for (const Atom& a : m.atoms()) {
      const int i = a.index;
      props.push_back({m.total_h(i), m.degree(i), m.degree(i) + a.hydrogens, m.kekule_valence(i),
                       m.ring_count(i), m.smallest_ring_size(i)});
    }
  }

  bool eval_atom(const Pattern::Impl& p, const Expr& e, int node, int a) {
    const Node& nd = e.nodes[node];
    switch (nd.op) {
      case Op::Not: return !eval_atom(p, e, nd.a, a);
      case Op::And: return eval_atom(p, e, nd.a, a) && eval_atom(p, e, nd.b, a);
      case Op::Or: return eval_atom(p, e, nd.a, a) || eval_atom(p, e, nd.b, a);
      case Op::Leaf: break;
    }
    const Atom& at = mol.atom(a);
    const Props& pr = props[a];
    switch (nd.prim) {
      case Prim::True: return true;
      case Prim::Element:
        return at.z == nd.value && (nd.arom < 0 || (nd.arom == 1) == at.aromatic);
      case Prim::Aromatic: return at.aromatic;
      case Prim::Aliphatic: return !at.aromatic;
      case Prim::TotalH: return pr.total_h == nd.value;
      case Prim::Degree: return pr.degree == nd.value;
      case Prim::TotalDegree: return pr.total_degree == nd.value;
      case Prim::Valence: return pr.valence == nd.value;
      case Prim::RingCount: return nd.value < 0 ? pr.ring_count > 0 : pr.ring_count == nd.value;
      case Prim::RingSize: return nd.value < 0 ? pr.ring_count > 0 : pr.min_ring == nd.value;
      case Prim::Charge: return at.formal_charge == nd.value;
      case Prim::Isotope: return at.isotope == nd.value;
      case Prim::Recursive: return recursive_at(p.recursive[nd.value], a);
      default: return false;
    }
  }

  bool eval_bond(const Expr& e, int node, int b) const {
    const Node& nd = e.nodes[node];
    switch (nd.op) {
      case Op::Not: return !eval_bond(e, nd.a, b);
      case Op::And: return eval_bond(e, nd.a, b) && eval_bond(e, nd.b, b);
      case Op::Or: return eval_bond(e, nd.a, b) || eval_bond(e, nd.b, b);
      case Op::Leaf: break;
    }
    const Bond& bd = mol.bond(b);
    switch (nd.prim) {
      case Prim::True: return true;
      case Prim::BondSingle: return bd.order == BondOrder::Single;
      case Prim::BondDouble: return bd.order == BondOrder::Double;
      case Prim::BondTriple: return bd.order == BondOrder::Triple;
      case Prim::BondAromatic: return bd.order == BondOrder::Aromatic;
      case Prim::BondRing: return bd.in_ring;
      case Prim::BondDefault: return bd.order == BondOrder::Single || bd.order == BondOrder::Aromatic;
      default: return false;
    }
  }

  bool recursive_at(const Pattern& sub, int a) {
    auto& cache = rec_cache[&sub.impl()];
    if (cache.empty()) cache.assign(mol.num_atoms(), -1);
    if (cache[a] < 0) {
      Search s(*this, sub.impl(), a, 1, false);
      cache[a] = s.run() ? 1 : 0;
    }
    return cache[a] == 1;
  }

  struct Search {
    Search(State& st, const Pattern::Impl& p, int anchor, std::size_t limit, bool uniquify)
        : st(st), p(p), anchor(anchor), limit(limit), uniquify(uniquify) {
      map.assign(p.atoms.size(), -1);
      used.assign(st.mol.num_atoms(), 0);
    }

    bool run() {
      if (p.atoms.size() > st.mol.num_atoms()) return false;
      step(0);
      return !results.empty();
    }

    bool atom_ok(int pa, int a) {
      const Expr& e = p.atoms[pa];
      return st.eval_atom(p, e, e.root, a);
    }

    bool place(std::size_t k, int a) {
      const int pa = p.order[k];
      if (used[a] || !atom_ok(pa, a)) return false;
      for (int b : p.back_bonds[k]) {
        const PBond& pb = p.bonds[b];
        const int other = map[pb.a == pa ? pb.b : pb.a];
        const int mb = st.mol.bond_between(a, other);
        if (mb < 0 || !st.eval_bond(pb.q, pb.q.root, mb)) return false;
      }
      return true;
    }

    void step(std::size_t k) {
      if (stop) return;
      if (k == p.order.size()) {
        record();
        return;
      }
      const int pa = p.order[k];
      auto try_atom = [&](int a) {
        if (!place(k, a)) return;
        map[pa] = a;
        used[a] = 1;
        step(k + 1);
        used[a] = 0;
        map[pa] = -1;
      };
      if (!p.back_bonds[k].empty()) {
        const PBond& pb = p.bonds[p.back_bonds[k][0]];
        const int parent = map[pb.a == pa ? pb.b : pb.a];
        for (const Neighbor& nb : st.mol.neighbors(parent)) {
          try_atom(nb.atom);
          if (stop) return;
        }
      } else if (k == 0 && anchor >= 0) {
        try_atom(anchor);
      } else {
        for (int a = 0; a < static_cast<int>(st.mol.num_atoms()); ++a) {
          try_atom(a);
          if (stop) return;
        }
      }
    }

    void record() {
      if (uniquify) {
        std::vector<int> key = map;
        std::sort(key.begin(), key.end());
        if (!seen.insert(std::move(key)).second) return;
      }
      results.push_back(map);
      if (limit > 0 && results.size() >= limit) stop = true;
    }

    State& st;
    const Pattern::Impl& p;
    int anchor;
    std::size_t limit;
    bool uniquify;
    bool stop = false;
    std::vector<int> map;
    std::vector<char> used;
    std::set<std::vector<int>> seen;
    std::vector<std::vector<int>> results;
  };

  const Molecule& mol;
  std::vector<Props> props;
  std::unordered_map<const Pattern::Impl*, std::vector<std::int8_t>> rec_cache;
};

Matcher::Matcher(const Molecule& mol) : state_(std::make_unique<State>(mol)) {}
Matcher::~Matcher() = default;

const Molecule& Matcher::molecule() const { return state_->mol; }

std::vector<std::vector<int>> Matcher::find(const Pattern& p, const MatchOptions& opt) {
  State::Search s(*state_, p.impl(), -1, opt.max_matches, opt.uniquify);
  s.run();
  return std::move(s.results);
}

bool Matcher::any(const Pattern& p) {
  State::Search s(*state_, p.impl(), -1, 1, false);
  return s.run();
}

bool Matcher::at(const Pattern& p, int atom) { return state_->recursive_at(p, atom); }

std::vector<std::vector<int>> find_matches(const Pattern& p, const Molecule& mol, const MatchOptions& opt) {
  Matcher m(mol);
  return m.find(p, opt);
}

bool has_match(const Pattern& p, const Molecule& mol) {
  Matcher m(mol);
  return m.any(p);
}

bool matches_at(const Pattern& p, const Molecule& mol, int atom) {
  Matcher m(mol);
  return m.at(p, atom);
}

}  // namespace molbench
