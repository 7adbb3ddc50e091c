// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>
#include <functional>
#include <set>

#include "molbench/chem/counts.h"
#include "molbench/chem/smiles.h"
#include "molbench/patterns/groups.h"
#include "molbench/patterns/smarts.h"

using namespace molbench;

namespace {

std::vector<std::string> fixture(const std::string& name) {
  std::ifstream in(std::string(MOLBENCH_SOURCE_DIR) + "/tests/fixtures/" + name);
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) out.push_back(line);
  return out;
}

// Brute-force oracle: a group is a list of atom predicates plus required
// bonds between listed positions. Every ordered tuple of distinct atoms is
// tried; occurrences are counted by the set of core positions.
struct BruteGroup {
  std::vector<std::function<bool(const Molecule&, int)>> atoms;
  struct Req {
    int i, j;
    int order;  // 1, 2, 3, 4 = aromatic, 0 = single or aromatic
  };
  std::vector<Req> bonds;
  std::vector<int> core;
};

int brute_count(const Molecule& m, const BruteGroup& g) {
  const int n = static_cast<int>(m.num_atoms());
  const int k = static_cast<int>(g.atoms.size());
  std::set<std::vector<int>> found;
  std::vector<int> pick(k, 0);
  std::function<void(int)> rec = [&](int d) {
    if (d == k) {
      for (const auto& r : g.bonds) {
        const int b = m.bond_between(pick[r.i], pick[r.j]);
        if (b < 0) return;
        const int o = static_cast<int>(m.bond(b).order);
        if (r.order == 0 ? (o != 1 && o != 4) : o != r.order) return;
      }
      std::vector<int> core;
      for (int c : g.core) core.push_back(pick[c]);
      std::sort(core.begin(), core.end());
      found.insert(core);
      return;
    }
    for (int a = 0; a < n; ++a) {
      if (std::find(pick.begin(), pick.begin() + d, a) != pick.begin() + d) continue;
      if (!g.atoms[d](m, a)) continue;
      pick[d] = a;
      rec(d + 1);
    }
  };
  rec(0);
  return static_cast<int>(found.size());
}

auto elem(int z) {
  return [z](const Molecule& m, int a) { return m.atom(a).z == z; };
}
auto elem_x(int z, int x) {
  return [z, x](const Molecule& m, int a) {
    return m.atom(a).z == z && m.degree(a) + m.atom(a).hydrogens == x;
  };
}
auto carbon = elem(6);

std::map<std::string, BruteGroup> brute_groups() {
  std::map<std::string, BruteGroup> g;
  g["hydroxyl"] = {{[](const Molecule& m, int a) {
                     return m.atom(a).z == 8 && m.degree(a) + m.atom(a).hydrogens == 2 && m.total_h(a) == 1;
                   }},
                   {},
                   {0}};
  g["aldehyde"] = {{[](const Molecule& m, int a) {
                      return m.atom(a).z == 6 && m.degree(a) + m.atom(a).hydrogens == 3 && m.total_h(a) == 1;
                    },
                    elem(8), carbon},
                   {{0, 1, 2}, {0, 2, 0}},
                   {0, 1}};
  g["ketone"] = {{carbon, elem_x(6, 3), elem(8), carbon}, {{0, 1, 0}, {1, 2, 2}, {1, 3, 0}}, {1, 2}};
  g["ester"] = {{carbon, elem_x(6, 3), elem(8),
                 [](const Molecule& m, int a) {
                   return m.atom(a).z == 8 && m.degree(a) + m.atom(a).hydrogens == 2 && m.total_h(a) == 0;
                 },
                 carbon},
                {{0, 1, 0}, {1, 2, 2}, {1, 3, 0}, {3, 4, 0}},
                {1, 2, 3}};
  g["amide"] = {{elem_x(6, 3), elem_x(8, 1), elem_x(7, 3)}, {{0, 1, 2}, {0, 2, 0}}, {0, 1, 2}};
  g["nitrile"] = {{elem_x(6, 2), elem_x(7, 1)}, {{0, 1, 3}}, {0, 1}};
  g["thiol"] = {{[](const Molecule& m, int a) {
                  return m.atom(a).z == 16 && m.degree(a) + m.atom(a).hydrogens == 2 && m.total_h(a) == 1;
                }},
                {},
                {0}};
  g["halo"] = {{carbon,
                [](const Molecule& m, int a) {
                  const int z = m.atom(a).z;
                  return z == 9 || z == 17 || z == 35 || z == 53;
                }},
               {{0, 1, 1}},
               {1}};
  g["disulfide"] = {{elem_x(16, 2), elem_x(16, 2)}, {{0, 1, 1}}, {0, 1}};
  g["sulfone"] = {{elem_x(16, 4), elem(8), elem(8)}, {{0, 1, 2}, {0, 2, 2}}, {0, 1, 2}};
  g["sulfoxide"] = {{carbon, elem_x(16, 3), elem(8), carbon}, {{0, 1, 0}, {1, 2, 2}, {1, 3, 0}}, {1, 2}};
  g["thioether"] = {{carbon, elem_x(16, 2), carbon}, {{0, 1, 1}, {1, 2, 1}}, {1}};
  g["anhydride"] = {{elem_x(6, 3), elem(8), elem_x(8, 2), elem_x(6, 3), elem(8)},
                    {{0, 1, 2}, {0, 2, 0}, {2, 3, 0}, {3, 4, 2}},
                    {0, 1, 2, 3, 4}};
  return g;
}

}  // namespace

TEST(Pattern, ParsesDataTables) {
  EXPECT_NO_THROW(Pattern::parse("[NX3,NX4+;!$(N=*);!$(N#*);!$(N~[!#6;!#1]):1]"));
  EXPECT_NO_THROW(Pattern::parse("[OR2,NR2]@[CR2]@[CR2]@[OR2,NR2]"));
  EXPECT_THROW(Pattern::parse("C(C"), PatternError);
  EXPECT_THROW(Pattern::parse("[C"), PatternError);
  EXPECT_THROW(Pattern::parse("C1CC"), PatternError);
}

TEST(Pattern, SymmetricEmbeddingsCountOnce) {
  Molecule benzene = parse_smiles("c1ccccc1");
  Pattern cc = Pattern::parse("cc");
  EXPECT_EQ(find_matches(cc, benzene).size(), 6u);
  EXPECT_EQ(find_matches(cc, benzene, {false, 0}).size(), 12u);
}

TEST(Pattern, PrimitiveSemantics) {
  Molecule m = parse_smiles("CC(=O)Nc1ccccc1");
  EXPECT_TRUE(matches_at(Pattern::parse("[CH3]"), m, 0));
  EXPECT_TRUE(matches_at(Pattern::parse("[NX3H1]"), m, 3));
  EXPECT_TRUE(matches_at(Pattern::parse("[cR1r6]"), m, 4));
  EXPECT_TRUE(matches_at(Pattern::parse("[$(C=O)]"), m, 1));
  EXPECT_FALSE(matches_at(Pattern::parse("[$(C=O)]"), m, 0));
  EXPECT_TRUE(has_match(Pattern::parse("N-!@c"), m));
  EXPECT_FALSE(has_match(Pattern::parse("N=c"), m));
  EXPECT_TRUE(matches_at(Pattern::parse("[v4]"), m, 1));
}

TEST(Groups, DocumentedExamples) {
  EXPECT_EQ(count_group(parse_smiles("OCCO"), "hydroxyl"), 2);
  EXPECT_EQ(count_group(parse_smiles("c1ccccc1"), "benzene ring"), 1);
  EXPECT_EQ(count_group(parse_smiles("c1ccc2ccccc2c1"), "benzene ring"), 2);
  EXPECT_EQ(count_group(parse_smiles("c1ccncc1"), "benzene ring"), 0);
  EXPECT_THROW(count_group(parse_smiles("C"), "oxetane"), UnknownGroup);
  EXPECT_EQ(count_rotatable_bonds(parse_smiles("c1ccccc1")), 0);
  EXPECT_EQ(count_rotatable_bonds(parse_smiles("CC")), 0);

  auto present = [](const char* s) {
    std::map<std::string, int> m;
    for (auto& [k, v] : enumerate_present_groups(parse_smiles(s))) m[k] = v;
    return m;
  };
  EXPECT_EQ(present("CCO"), (std::map<std::string, int>{{"hydroxyl", 1}}));
  EXPECT_EQ(present("CC(=O)O").at("carboxyl"), 1);
  auto benzaldehyde = present("O=Cc1ccccc1");
  EXPECT_EQ(benzaldehyde.at("benzene ring"), 1);
  EXPECT_EQ(benzaldehyde.at("aldehyde"), 1);
}

TEST(Groups, HaloCountsEachHalogenOnCarbon) {
  EXPECT_EQ(count_group(parse_smiles("FC(F)(F)Cl"), "halo"), 4);
  EXPECT_EQ(count_group(parse_smiles("C[Si](C)(C)Cl"), "halo"), 0);
  EXPECT_EQ(count_group(parse_smiles("ClCl"), "halo"), 0);
}

TEST(Groups, RegistryWeights) {
  const auto& reg = GroupRegistry::builtin();
  const auto add_w = reg.weights_addcomponent();
  std::map<std::string, int> add(add_w.begin(), add_w.end());
  EXPECT_EQ(add, (std::map<std::string, int>{{"benzene ring", 15}, {"hydroxyl", 15}, {"aldehyde", 5},
                                             {"carboxyl", 5}, {"amide", 10}, {"amine", 5}, {"nitro", 5},
                                             {"halo", 5}, {"nitrile", 1}, {"thiol", 1}}));
  const auto fg_w = reg.weights_functionalgroup();
  std::map<std::string, int> fg(fg_w.begin(), fg_w.end());
  EXPECT_EQ(fg, (std::map<std::string, int>{
                    {"benzene ring", 15}, {"hydroxyl", 15}, {"anhydride", 2}, {"aldehyde", 5}, {"ketone", 5},
                    {"carboxyl", 10}, {"ester", 5}, {"amide", 5}, {"amine", 5}, {"nitro", 2}, {"halo", 2},
                    {"thioether", 1}, {"nitrile", 1}, {"thiol", 1}, {"sulfide", 1}, {"disulfide", 1},
                    {"sulfoxide", 1}, {"sulfone", 1}, {"borane", 1}}));
  auto ends = reg.end_groups();
  std::set<std::string> end_set(ends.begin(), ends.end());
  EXPECT_EQ(end_set, (std::set<std::string>{"hydroxyl", "aldehyde", "carboxyl", "nitro", "halo", "nitrile",
                                            "thiol"}));
  EXPECT_EQ(reg.checksum().size(), 64u);
}

TEST(Groups, RegistryRejectsMalformedFiles) {
  EXPECT_THROW(GroupRegistry::parse("group a add=1 fg=1 end=0\n"), GroupFileError);
  EXPECT_THROW(GroupRegistry::parse("match C\n"), GroupFileError);
  EXPECT_THROW(GroupRegistry::parse("group a add=x fg=1 end=0\n  match C\n"), GroupFileError);
  EXPECT_THROW(GroupRegistry::parse("group a add=- fg=1 end=0\n  match C.C\n"), GroupFileError);
  EXPECT_THROW(GroupRegistry::parse("group a add=- fg=1 end=0\n  match C\ngroup a add=- fg=1 end=0\n  match C\n"),
               GroupFileError);
}

TEST(Groups, MatcherAgreesWithBruteForceOnFixture) {
  const auto mols = fixture("patterns50.smi");
  ASSERT_EQ(mols.size(), 50u);
  const auto brute = brute_groups();
  for (const auto& smi : mols) {
    Molecule m = parse_smiles(smi);
    for (const auto& [name, g] : brute)
      EXPECT_EQ(count_group(m, name), brute_count(m, g)) << name << " on " << smi;
  }
}

TEST(Groups, BenzeneAgreesWithRingEnumeration) {
  for (const auto& smi : fixture("patterns50.smi")) {
    Molecule m = parse_smiles(smi);
    int expected = 0;
    for (const auto& r : m.sssr()) {
      bool ok = r.size() == 6;
      for (int a : r) ok = ok && m.atom(a).z == 6 && m.atom(a).aromatic;
      expected += ok;
    }
    EXPECT_EQ(count_group(m, "benzene ring"), expected) << smi;
  }
}
