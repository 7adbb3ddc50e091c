// SPDX-License-Identifier: Apache-2.0
#include "molbench/taskgen/editor.h"

#include <algorithm>
#include <optional>

#include "molbench/chem/errors.h"
#include "molbench/chem/smiles.h"
#include "molbench/patterns/groups.h"

namespace molbench {

namespace {

struct Removal {
  MolBuilder builder;
  std::vector<int> vacated;  // builder indices of atoms that lost a bond to the group
};

// Canonical round trip, so the product is exactly what a checker parsing the
// emitted SMILES will see.
std::optional<Molecule> finish(const MolBuilder& b, int max_fragments) {
  if (b.num_atoms() == 0) return std::nullopt;
  try {
    Molecule built = b.build();
    if (built.num_fragments() > max_fragments) return std::nullopt;
    return parse_smiles(write_smiles(built));
  } catch (const ChemError&) {
    return std::nullopt;
  }
}

std::vector<int> site_candidates(const Molecule& mol, const MolBuilder& b, const GroupPattern& g,
                                 const std::vector<int>* restrict_to) {
  std::vector<int> out;
  std::optional<Matcher> matcher;
  if (g.site) matcher.emplace(mol);
  for (int a = 0; a < static_cast<int>(b.num_atoms()); ++a) {
    const auto& s = b.atom(a);
    if (s.z == 1 || s.hydrogens.value_or(0) < 1) continue;
    if (restrict_to && std::find(restrict_to->begin(), restrict_to->end(), a) == restrict_to->end()) continue;
    if (g.site) {
      if (!matcher->at(*g.site, a)) continue;
    } else if (s.z != 6) {
      continue;
    }
    out.push_back(a);
  }
  return out;
}

MolBuilder attach(MolBuilder b, int site, const Molecule& frag) {
  const MolBuilder fb = MolBuilder::from(frag);
  const int base = static_cast<int>(b.num_atoms());
  for (int i = 0; i < static_cast<int>(fb.num_atoms()); ++i) b.add_atom(fb.atom(i));
  for (int i = 0; i < static_cast<int>(fb.num_bonds()); ++i) {
    const auto& bs = fb.bond(i);
    b.add_bond(base + bs.a, base + bs.b, bs.order);
  }
  auto& head = b.atom(base);
  if (head.hydrogens.value_or(0) > 0) head.hydrogens = *head.hydrogens - 1;
  b.atom(site).hydrogens = *b.atom(site).hydrogens - 1;
  b.add_bond(site, base, BondOrder::Single);
  return b;
}

std::vector<Removal> removals(const Molecule& mol, const std::string& group, Rng& rng) {
  const GroupRegistry& reg = GroupRegistry::builtin();
  std::vector<std::vector<int>> matches = reg.match(mol, group).matches;
  rng.shuffle(matches);
  std::vector<Removal> out;
  const int n = static_cast<int>(mol.num_atoms());
  for (const auto& core : matches) {
    std::vector<bool> drop(n, false);
    for (int a : core) drop[a] = true;
    // Hydrogen nodes hanging off the group go with it.
    for (int a : core)
      for (const Neighbor& nb : mol.neighbors(a))
        if (mol.atom(nb.atom).is_hydrogen()) drop[nb.atom] = true;
    MolBuilder b = MolBuilder::from(mol);
    std::vector<int> gained(n, 0);
    for (const Bond& bd : mol.bonds()) {
      if (drop[bd.begin] == drop[bd.end]) continue;
      gained[drop[bd.begin] ? bd.end : bd.begin] += bd.kekule;
    }
    std::vector<int> remap(n, -1), dropped;
    int next = 0;
    for (int a = 0; a < n; ++a) {
      if (drop[a]) {
        dropped.push_back(a);
        continue;
      }
      remap[a] = next++;
      if (gained[a] > 0) b.atom(a).hydrogens = b.atom(a).hydrogens.value_or(0) + gained[a];
    }
    b.remove_atoms(dropped);
    Removal r{std::move(b), {}};
    for (int a = 0; a < n; ++a)
      if (gained[a] > 0) r.vacated.push_back(remap[a]);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<Molecule> fragments_of(const GroupPattern& g, Rng& rng) {
  std::vector<Molecule> frags;
  for (const std::string& s : g.attachments) frags.push_back(parse_smiles(s));
  rng.shuffle(frags);
  return frags;
}

// Tries sites in random order, and all fragments per site, until `accept`
// holds on the product.
template <class Accept>
std::optional<Molecule> try_add(const MolBuilder& b, const Molecule& built, const GroupPattern& g,
                                const std::vector<int>* restrict_to, int max_fragments, Rng& rng, Accept accept) {
  std::vector<int> sites = site_candidates(built, b, g, restrict_to);
  rng.shuffle(sites);
  const std::vector<Molecule> frags = fragments_of(g, rng);
  for (int site : sites)
    for (const Molecule& frag : frags) {
      auto product = finish(attach(b, site, frag), max_fragments);
      if (product && accept(*product)) return product;
    }
  return std::nullopt;
}

}  // namespace

Molecule apply_edit(const Molecule& mol, const Edit& edit, Rng& rng) {
  const GroupRegistry& reg = GroupRegistry::builtin();
  const int max_fragments = std::max(1, mol.num_fragments());
  if (const auto* add = std::get_if<AddGroup>(&edit)) {
    const GroupPattern& g = reg.get(add->group);
    if (g.attachments.empty()) throw NoAttachmentSite("group has no attachment fragment: " + g.name);
    const int before = reg.count(mol, g.name);
    const MolBuilder b = MolBuilder::from(mol);
    auto product = try_add(b, mol, g, nullptr, max_fragments, rng,
                           [&](const Molecule& p) { return reg.count(p, g.name) == before + 1; });
    if (!product) throw NoAttachmentSite("no site accepts a " + g.name);
    return std::move(*product);
  }
  if (const auto* del = std::get_if<DelGroup>(&edit)) {
    const GroupPattern& g = reg.get(del->group);
    const int before = reg.count(mol, g.name);
    for (Removal& r : removals(mol, g.name, rng)) {
      auto product = finish(r.builder, max_fragments);
      if (product && reg.count(*product, g.name) == before - 1) return std::move(*product);
    }
    throw NoRemovableMatch("no removable " + g.name);
  }
  const auto& sub = std::get<SubGroup>(edit);
  const GroupPattern& from = reg.get(sub.from);
  const GroupPattern& to = reg.get(sub.to);
  if (to.attachments.empty()) throw NoAttachmentSite("group has no attachment fragment: " + to.name);
  const int from_before = reg.count(mol, from.name);
  const int to_before = reg.count(mol, to.name);
  bool removable = false;
  for (Removal& r : removals(mol, from.name, rng)) {
    Molecule stripped;
    try {
      stripped = r.builder.build();
    } catch (const ChemError&) {
      continue;
    }
    if (stripped.num_atoms() == 0 || stripped.num_fragments() > max_fragments) continue;
    removable = true;
    // Sites are matched on the stripped molecule, whose indices equal the
    // builder's.
    auto product = try_add(r.builder, stripped, to, &r.vacated, max_fragments, rng, [&](const Molecule& p) {
      return reg.count(p, from.name) == from_before - 1 && reg.count(p, to.name) == to_before + 1;
    });
    if (product) return std::move(*product);
  }
  if (!removable) throw NoRemovableMatch("no removable " + from.name);
  throw NoAttachmentSite("no vacated site accepts a " + to.name);
}

}  // namespace molbench
