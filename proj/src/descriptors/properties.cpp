// SPDX-License-Identifier: Apache-2.0
#include "molbench/descriptors/properties.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <tuple>

#include "molbench/chem/ops.h"
#include "molbench/patterns/groups.h"
#include "molbench/util/data.h"
#include "molbench/util/hash.h"

namespace molbench {

namespace {

double to_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw TableError("bad number '" + s + "' in " + what);
  }
}

// TPSA fragment table keyed by the atom environment.
using TpsaKey = std::tuple<int, int, int, int, int, int, int, int, int, int>;

struct TpsaTable {
  std::map<TpsaKey, double> rows;

  static const TpsaTable& builtin() {
    static const TpsaTable t = [] {
      TpsaTable t;
      std::istringstream in{std::string(data::embedded("tpsa.txt"))};
      std::string line;
      while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string sym;
        int k[9];
        double psa;
        ls >> sym;
        for (int& v : k) ls >> v;
        ls >> psa;
        if (!ls) throw TableError("bad tpsa row: " + line);
        const int z = sym == "N" ? 7 : sym == "O" ? 8 : 0;
        if (z == 0) throw TableError("tpsa row for unsupported element: " + line);
        t.rows[{z, k[0], k[1], k[2], k[3], k[4], k[5], k[6], k[7], k[8]}] = psa;
      }
      return t;
    }();
    return t;
  }
};

}  // namespace

ContributionTable ContributionTable::parse(std::string_view text, std::string source_tag) {
  ContributionTable t;
  t.source_ = std::move(source_tag);
  t.checksum_ = sha256_hex(text);
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cols;
    std::istringstream ls(line);
    std::string c;
    while (std::getline(ls, c, '\t')) cols.push_back(c);
    if (cols.size() != 4) throw TableError("crippen line " + std::to_string(lineno) + ": expected 4 columns");
    Rule r;
    r.type = cols[0];
    try {
      r.pattern = Pattern::parse(cols[1]);
    } catch (const PatternError& e) {
      throw TableError("crippen line " + std::to_string(lineno) + ": " + e.what());
    }
    r.logp = to_double(cols[2], "crippen line " + std::to_string(lineno));
    r.mr = to_double(cols[3], "crippen line " + std::to_string(lineno));
    t.rules_.push_back(std::move(r));
  }
  if (t.rules_.empty()) throw TableError("empty contribution table");
  return t;
}

const ContributionTable& ContributionTable::builtin() {
  static const ContributionTable t = parse(data::embedded("crippen.txt"), "Wildman-Crippen (RDKit Crippen.txt)");
  return t;
}

std::vector<CrippenAtom> crippen_contributions(const Molecule& mol, const ContributionTable& table) {
  const Molecule h = add_hydrogens(mol);
  Matcher m(h);
  std::vector<CrippenAtom> out(h.num_atoms(), CrippenAtom{"Default", 0, 0});
  for (int a = 0; a < static_cast<int>(h.num_atoms()); ++a) {
    for (const auto& r : table.rules()) {
      if (m.at(r.pattern, a)) {
        out[a] = {r.type, r.logp, r.mr};
        break;
      }
    }
  }
  return out;
}

double logp(const Molecule& mol) {
  double s = 0;
  for (const auto& c : crippen_contributions(mol)) s += c.logp;
  return s;
}

double mr(const Molecule& mol) {
  double s = 0;
  for (const auto& c : crippen_contributions(mol)) s += c.mr;
  return s;
}

double tpsa(const Molecule& mol) {
  const auto& table = TpsaTable::builtin();
  double total = 0;
  for (const Atom& a : mol.atoms()) {
    if (a.z != 7 && a.z != 8) continue;
    int single = 0, dbl = 0, triple = 0, arom = 0;
    for (const Neighbor& nb : mol.neighbors(a.index)) {
      if (mol.atom(nb.atom).z == 1) continue;
      switch (mol.bond(nb.bond).order) {
        case BondOrder::Single: ++single; break;
        case BondOrder::Double: ++dbl; break;
        case BondOrder::Triple: ++triple; break;
        case BondOrder::Aromatic: ++arom; break;
      }
    }
    const int degree = mol.heavy_degree(a.index);
    const int h = mol.total_h(a.index);
    const TpsaKey key{a.z, a.aromatic ? 1 : 0, degree, h, a.formal_charge, single, dbl, triple, arom,
                      mol.atom_in_ring_of_size(a.index, 3) ? 1 : 0};
    auto it = table.rows.find(key);
    if (it != table.rows.end()) {
      total += it->second;
    } else {
      // Environments absent from the fragment table: a linear estimate in
      // heavy degree and hydrogens.
      const double est = a.z == 7 ? 30.5 - 8.2 * degree + 1.5 * h : 28.5 - 8.6 * degree + 1.5 * h;
      total += std::max(0.0, est);
    }
  }
  return total;
}

double molecular_weight(const Molecule& mol) {
  const double h_mass = element(1)->mass;
  double w = 0;
  for (const Atom& a : mol.atoms()) w += a.elem().mass + h_mass * a.hydrogens;
  return w;
}

double QedDesirability::operator()(double x) const {
  const double exp1 = 1 + std::exp(-(x - c + d / 2) / e);
  const double exp2 = 1 + std::exp(-(x - c - d / 2) / f);
  return (a + b / exp1 * (1 - 1 / exp2)) / dmax;
}

QedParameters QedParameters::parse(std::string_view text) {
  QedParameters p;
  p.checksum = sha256_hex(text);
  std::istringstream in{std::string(text)};
  std::string line;
  std::array<bool, 8> seen{};
  bool have_donor = false, have_rot = false, have_del = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string kind;
    ls >> kind;
    try {
      if (kind == "param") {
        std::string name;
        QedDesirability d{};
        ls >> name >> d.a >> d.b >> d.c >> d.d >> d.e >> d.f >> d.dmax >> d.weight;
        if (!ls) throw TableError("bad qed param line: " + line);
        auto it = std::find(kNames.begin(), kNames.end(), name);
        if (it == kNames.end()) throw TableError("unknown qed descriptor " + name);
        if (d.weight <= 0) throw TableError("qed weight must be positive: " + name);
        p.curves[it - kNames.begin()] = d;
        seen[it - kNames.begin()] = true;
        continue;
      }
      std::string pat;
      ls >> pat;
      if (pat.empty()) throw TableError("missing pattern: " + line);
      if (kind == "donor") {
        p.donor = Pattern::parse(pat);
        have_donor = true;
      } else if (kind == "rotatable") {
        p.rotatable = Pattern::parse(pat);
        have_rot = true;
      } else if (kind == "aromatic-delete") {
        p.aromatic_delete = Pattern::parse(pat);
        have_del = true;
      } else if (kind == "acceptor") {
        p.acceptors.push_back(Pattern::parse(pat));
      } else if (kind == "alert") {
        p.alerts.push_back(Pattern::parse(pat));
      } else {
        throw TableError("unknown qed line kind " + kind);
      }
    } catch (const PatternError& e) {
      throw TableError(std::string("qed table: ") + e.what());
    }
  }
  for (bool s : seen)
    if (!s) throw TableError("qed table lacks a descriptor curve");
  if (!have_donor || !have_rot || !have_del) throw TableError("qed table lacks donor/rotatable/aromatic-delete");
  return p;
}

const QedParameters& QedParameters::builtin() {
  static const QedParameters p = parse(data::embedded("qed.txt"));
  return p;
}

QedProperties qed_properties(const Molecule& mol, const QedParameters& p) {
  QedProperties q;
  Matcher m(mol);
  q.mw = molecular_weight(mol);
  q.alogp = logp(mol);
  for (const Pattern& acc : p.acceptors) q.hba += static_cast<int>(m.find(acc).size());
  q.hbd = static_cast<int>(m.find(p.donor).size());
  q.psa = tpsa(mol);
  q.rotb = static_cast<int>(m.find(p.rotatable).size());
  // Aromatic ring count: rings left after deleting ring atoms that touch a
  // non-aromatic neighbour, i.e. the cyclomatic number of what remains.
  std::vector<char> gone(mol.num_atoms(), 0);
  for (int a = 0; a < static_cast<int>(mol.num_atoms()); ++a)
    if (m.at(p.aromatic_delete, a)) gone[a] = 1;
  {
    const int n = static_cast<int>(mol.num_atoms());
    std::vector<int> parent(n);
    for (int i = 0; i < n; ++i) parent[i] = i;
    auto find = [&](int x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    int atoms = 0, edges = 0, comps = 0;
    for (int i = 0; i < n; ++i) atoms += !gone[i];
    comps = atoms;
    for (const Bond& b : mol.bonds()) {
      if (gone[b.begin] || gone[b.end]) continue;
      ++edges;
      const int x = find(b.begin), y = find(b.end);
      if (x != y) {
        parent[x] = y;
        --comps;
      }
    }
    q.arom = edges - atoms + comps;
  }
  for (const Pattern& al : p.alerts) q.alerts += m.any(al) ? 1 : 0;
  return q;
}

double qed_from_properties(const QedProperties& props, const QedParameters& p) {
  const auto v = props.values();
  double t = 0, wsum = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double d = std::clamp(p.curves[i](v[i]), 1e-12, 1.0);
    t += p.curves[i].weight * std::log(d);
    wsum += p.curves[i].weight;
  }
  return std::exp(t / wsum);
}

double qed(const Molecule& mol, const QedParameters& p) { return qed_from_properties(qed_properties(mol, p), p); }

std::map<std::string, std::string> table_checksums() {
  std::map<std::string, std::string> out;
  for (const char* f : {"crippen.txt", "qed.txt", "tpsa.txt", "groups.txt", "sampling.txt"}) out[f] = sha256_hex(data::embedded(f));
  return out;
}

}  // namespace molbench
