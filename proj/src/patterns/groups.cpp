// SPDX-License-Identifier: Apache-2.0
#include "molbench/patterns/groups.h"

#include <algorithm>
#include <set>
#include <sstream>

#include "molbench/chem/errors.h"
#include "molbench/chem/smiles.h"
#include "molbench/util/data.h"
#include "molbench/util/hash.h"

namespace molbench {

namespace {

std::string display_name(std::string_view name) {
  std::string s(name);
  std::replace(s.begin(), s.end(), '_', ' ');
  return s;
}

std::optional<int> parse_weight(const std::string& field, const std::string& key, int line) {
  const std::string prefix = key + "=";
  if (field.rfind(prefix, 0) != 0)
    throw GroupFileError("line " + std::to_string(line) + ": expected " + prefix);
  const std::string v = field.substr(prefix.size());
  if (v == "-") return std::nullopt;
  try {
    std::size_t used = 0;
    const int w = std::stoi(v, &used);
    if (used != v.size() || w <= 0) throw std::invalid_argument(v);
    return w;
  } catch (const std::exception&) {
    throw GroupFileError("line " + std::to_string(line) + ": bad weight '" + v + "'");
  }
}

std::vector<std::vector<int>> benzene_rings(const Molecule& mol) {
  std::vector<std::vector<int>> out;
  for (const auto& ring : mol.sssr()) {
    if (ring.size() != 6) continue;
    bool ok = true;
    for (std::size_t i = 0; i < 6 && ok; ++i) {
      const Atom& a = mol.atom(ring[i]);
      const int b = mol.bond_between(ring[i], ring[(i + 1) % 6]);
      ok = a.z == 6 && a.aromatic && b >= 0 && mol.bond(b).order == BondOrder::Aromatic;
    }
    if (!ok) continue;
    std::vector<int> s = ring;
    std::sort(s.begin(), s.end());
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

GroupRegistry GroupRegistry::parse(std::string_view text) {
  GroupRegistry reg;
  reg.checksum_ = sha256_hex(text);
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  GroupPattern* cur = nullptr;
  auto fail = [&](const std::string& why) {
    throw GroupFileError("group file line " + std::to_string(lineno) + ": " + why);
  };
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string word;
    if (!(ls >> word) || word[0] == '#') continue;
    if (word == "group") {
      std::string name, add, fg, end;
      if (!(ls >> name >> add >> fg >> end)) fail("group needs NAME add= fg= end=");
      GroupPattern g;
      g.name = display_name(name);
      if (reg.contains(g.name)) fail("duplicate group " + g.name);
      g.weight_add = parse_weight(add, "add", lineno);
      g.weight_functional = parse_weight(fg, "fg", lineno);
      if (end != "end=0" && end != "end=1") fail("expected end=0 or end=1");
      g.end_group = end == "end=1";
      reg.groups_.push_back(std::move(g));
      cur = &reg.groups_.back();
      continue;
    }
    if (!cur) fail("directive before any group");
    std::string arg;
    if (!(ls >> arg)) fail(word + " needs an argument");
    try {
      if (word == "match") {
        if (arg == "benzene") {
          cur->benzene = true;
        } else {
          Pattern p = Pattern::parse(arg);
          if (!p.connected()) fail("pattern is not connected: " + arg);
          cur->alternatives.push_back(std::move(p));
        }
      } else if (word == "site") {
        cur->site = Pattern::parse(arg);
      } else if (word == "attach") {
        if (arg.size() < 2 || arg[0] != '*' || arg.find('*', 1) != std::string::npos)
          fail("attach fragment must start with a single '*'");
        const std::string frag = arg.substr(1);
        parse_smiles(frag);
        cur->attachments.push_back(frag);
      } else {
        fail("unknown directive " + word);
      }
    } catch (const PatternError& e) {
      fail(e.what());
    } catch (const ChemError& e) {
      fail(std::string("bad attach fragment: ") + e.what());
    }
  }
  for (const GroupPattern& g : reg.groups_) {
    if (!g.benzene && g.alternatives.empty()) throw GroupFileError("group " + g.name + " has no match line");
    if (g.weight_add && g.attachments.empty())
      throw GroupFileError("group " + g.name + " is drawable for addition but has no attach line");
  }
  return reg;
}

const GroupRegistry& GroupRegistry::builtin() {
  static const GroupRegistry reg = parse(data::embedded("groups.txt"));
  return reg;
}

bool GroupRegistry::contains(std::string_view name) const {
  const std::string n = display_name(name);
  for (const GroupPattern& g : groups_)
    if (g.name == n) return true;
  return false;
}

const GroupPattern& GroupRegistry::get(std::string_view name) const {
  const std::string n = display_name(name);
  for (const GroupPattern& g : groups_)
    if (g.name == n) return g;
  throw UnknownGroup(std::string(name));
}

std::vector<std::pair<std::string, int>> GroupRegistry::weights_addcomponent() const {
  std::vector<std::pair<std::string, int>> out;
  for (const GroupPattern& g : groups_)
    if (g.weight_add) out.emplace_back(g.name, *g.weight_add);
  return out;
}

std::vector<std::pair<std::string, int>> GroupRegistry::weights_functionalgroup() const {
  std::vector<std::pair<std::string, int>> out;
  for (const GroupPattern& g : groups_)
    if (g.weight_functional) out.emplace_back(g.name, *g.weight_functional);
  return out;
}

std::vector<std::string> GroupRegistry::end_groups() const {
  std::vector<std::string> out;
  for (const GroupPattern& g : groups_)
    if (g.end_group) out.push_back(g.name);
  return out;
}

MatchSet GroupRegistry::match(Matcher& m, const GroupPattern& g) const {
  MatchSet ms;
  ms.group = g.name;
  if (g.benzene) {
    ms.matches = benzene_rings(m.molecule());
    return ms;
  }
  std::set<std::vector<int>> seen;
  for (const Pattern& p : g.alternatives) {
    bool mapped = false;
    for (int i = 0; i < p.num_atoms(); ++i)
      if (p.map_number(i) == 1) mapped = true;
    for (const auto& hit : m.find(p)) {
      std::vector<int> atoms;
      for (int i = 0; i < p.num_atoms(); ++i)
        if (!mapped || p.map_number(i) == 1) atoms.push_back(hit[i]);
      std::sort(atoms.begin(), atoms.end());
      if (seen.insert(atoms).second) ms.matches.push_back(std::move(atoms));
    }
  }
  return ms;
}

MatchSet GroupRegistry::match(const Molecule& mol, std::string_view group) const {
  Matcher m(mol);
  return match(m, get(group));
}

int GroupRegistry::count(const Molecule& mol, std::string_view group) const {
  return static_cast<int>(match(mol, group).count());
}

std::vector<std::pair<std::string, int>> GroupRegistry::present(const Molecule& mol) const {
  Matcher m(mol);
  std::vector<std::pair<std::string, int>> out;
  for (const GroupPattern& g : groups_) {
    const int c = static_cast<int>(match(m, g).count());
    if (c > 0) out.emplace_back(g.name, c);
  }
  return out;
}

int count_group(const Molecule& mol, std::string_view group) {
  return GroupRegistry::builtin().count(mol, group);
}

std::vector<std::pair<std::string, int>> enumerate_present_groups(const Molecule& mol) {
  return GroupRegistry::builtin().present(mol);
}

}  // namespace molbench
