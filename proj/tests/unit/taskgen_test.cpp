// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <set>

#include "molbench/chem/smiles.h"
#include "molbench/eval/checks.h"
#include "molbench/patterns/groups.h"
#include "molbench/taskgen/generate.h"
#include "molbench/taskgen/tables.h"
#include "test_util.h"

using namespace molbench;

namespace {

const Corpus& test_corpus() {
  static const Corpus c = Corpus::load(molbench::testing::source_path("data/corpus/test_corpus.smi"));
  return c;
}

Corpus small_corpus(std::size_t n) { return Corpus::from_smiles(molbench::testing::read_smiles("data/corpus/test_corpus.smi", n)); }

}  // namespace

TEST(Rng, UniformIntStaysInRangeAndCoversIt) {
  Rng rng(1);
  std::set<long> seen;
  for (int i = 0; i < 10000; ++i) {
    const long x = rng.uniform_int(5, 20);
    ASSERT_GE(x, 5);
    ASSERT_LE(x, 20);
    seen.insert(x);
  }
  EXPECT_EQ(seen.size(), 16u);
}

TEST(Rng, SameSeedSameStream) {
  Rng a(42), b(42), c(43);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next();
    EXPECT_EQ(x, b.next());
    differs |= x != c.next();
  }
  EXPECT_TRUE(differs);
  EXPECT_NE(derive_seed(1, 0, 0), derive_seed(1, 0, 1));
  EXPECT_NE(derive_seed(1, 0, 0), derive_seed(1, 1, 0));
}

TEST(Rng, WeightedSampleIsWithoutReplacement) {
  Rng rng(3);
  const std::vector<int> w = {5, 4, 3, 1, 1};
  for (int t = 0; t < 1000; ++t) {
    const auto idx = rng.weighted_sample(w, 3);
    EXPECT_EQ(std::set<std::size_t>(idx.begin(), idx.end()).size(), 3u);
  }
  EXPECT_THROW(rng.weighted_sample(std::vector<int>{1, 0}, 2), std::invalid_argument);
}

TEST(SamplingTables, BuiltinMatchesPrintedWeights) {
  const auto& t = SamplingTables::builtin();
  std::map<std::string, int> atoms;
  for (const auto& r : t.atoms) {
    atoms[std::string(element(r.z)->symbol)] = r.mandatory ? -1 : r.weight;
    EXPECT_EQ(r.range.min, 1);
    EXPECT_EQ(r.range.max, r.mandatory ? 40 : 5);
  }
  const std::map<std::string, int> expected = {{"C", -1}, {"O", 5},  {"N", 3},  {"S", 3},  {"F", 2},  {"Cl", 2},
                                               {"Br", 2}, {"I", 2},  {"P", 1},  {"B", 1},  {"Si", 1}, {"Se", 1},
                                               {"Te", 1}, {"As", 1}, {"Sb", 1}, {"Bi", 1}, {"Po", 1}};
  EXPECT_EQ(atoms, expected);
  std::map<BondCategory, std::pair<int, CountRange>> bonds;
  for (const auto& r : t.bonds) bonds[r.category] = {r.weight, r.range};
  EXPECT_EQ(bonds.at(BondCategory::Single).first, 5);
  EXPECT_EQ(bonds.at(BondCategory::Double).first, 4);
  EXPECT_EQ(bonds.at(BondCategory::Triple).first, 3);
  EXPECT_EQ(bonds.at(BondCategory::Rotatable).first, 1);
  EXPECT_EQ(bonds.at(BondCategory::Aromatic).first, 1);
  EXPECT_EQ(bonds.at(BondCategory::Single).second.max, 50);
  EXPECT_EQ(bonds.at(BondCategory::Aromatic).second.min, 5);
  EXPECT_EQ(bonds.at(BondCategory::Aromatic).second.max, 20);
  EXPECT_EQ(bonds.at(BondCategory::Triple).second.max, 5);
}

TEST(SamplingTables, RejectsMalformedFiles) {
  EXPECT_THROW(SamplingTables::parse("atom O 5 1 5\nbond single 5 1 50\n"), SamplingTableError);
  EXPECT_THROW(SamplingTables::parse("atom C mandatory 1 40\natom Xx 1 1 5\nbond single 5 1 50\n"), SamplingTableError);
  EXPECT_THROW(SamplingTables::parse("atom C mandatory 1 40\nbond single 5 9 1\n"), SamplingTableError);
}

TEST(Templates, PoolSizesAndTexts) {
  const auto& pool = TemplatePool::builtin();
  const std::map<Subtask, std::size_t> sizes = {
      {Subtask::AddComponent, 3}, {Subtask::DelComponent, 3}, {Subtask::SubComponent, 6},
      {Subtask::LogP, 5},         {Subtask::MR, 5},           {Subtask::QED, 5},
      {Subtask::AtomNum, 10},     {Subtask::BondNum, 10},     {Subtask::FunctionalGroup, 10}};
  for (const auto& [s, n] : sizes) EXPECT_EQ(pool.templates(s).size(), n) << subtask_name(s);
  EXPECT_EQ(pool.templates(Subtask::AddComponent)[0], "Please add a {} to the molecule {}.");
  EXPECT_EQ(pool.templates(Subtask::SubComponent)[4], "Modify the molecule {} by substituting a {} with {}.");
  EXPECT_EQ(pool.templates(Subtask::LogP)[1], "Modify the molecule {} to decrease/increase its LogP value.");
  EXPECT_EQ(pool.templates(Subtask::AtomNum)[0], "Please generate a molecule with {} atom(s).");
  EXPECT_EQ(pool.templates(Subtask::FunctionalGroup)[8], "There is a molecule consisting of {} group(s).");
}

TEST(Templates, RenderExamples) {
  const auto& pool = TemplatePool::builtin();
  EXPECT_EQ(render_template(pool.templates(Subtask::AddComponent)[0], slots_for(AddGroup{"hydroxyl"}, "M")),
            "Please add a hydroxyl to the molecule M.");
  EXPECT_EQ(render_template(pool.templates(Subtask::AddComponent)[1], slots_for(AddGroup{"hydroxyl"}, "M")),
            "Modify the molecule M by adding a hydroxyl.");
  EXPECT_EQ(render_template(pool.templates(Subtask::SubComponent)[1], slots_for(SubGroup{"thiol", "nitrile"}, "M")),
            "Modify the molecule M by replacing a thiol by nitrile.");
  EXPECT_EQ(render_template(pool.templates(Subtask::QED)[0],
                            slots_for(OptimizeProperty{Property::QED, Direction::Lower}, "M")),
            "Please optimize the molecule M to have a lower QED value.");
  EXPECT_EQ(render_template(pool.templates(Subtask::MR)[3],
                            slots_for(OptimizeProperty{Property::MR, Direction::Higher}, "M")),
            "Please modify the molecule M to increase its MR value.");
  EXPECT_EQ(render_template(pool.templates(Subtask::AtomNum)[0], slots_for(AtomCounts{{{6, 1}}}, std::nullopt)),
            "Please generate a molecule with 1 carbon atom.");
  EXPECT_EQ(render_template(pool.templates(Subtask::AtomNum)[5], slots_for(AtomCounts{{{6, 15}, {35, 2}}}, std::nullopt)),
            "The molecule consists of 15 carbon atoms and 2 bromine atoms.");
  EXPECT_EQ(render_template(pool.templates(Subtask::BondNum)[9],
                            slots_for(BondCounts{{{BondCategory::Single, 3}, {BondCategory::Double, 1},
                                                  {BondCategory::Aromatic, 6}}},
                                      std::nullopt)),
            "The molecule contains 3 single bonds, 1 double bond and 6 aromatic bonds.");
  EXPECT_EQ(render_template(pool.templates(Subtask::FunctionalGroup)[3],
                            slots_for(GroupCounts{{{"benzene ring", 2}}}, std::nullopt)),
            "The molecule has 2 benzene ring groups.");
}

TEST(Templates, SlotMismatch) {
  EXPECT_THROW(render_template("Please add a {} to the molecule {}.", slots_for(AddGroup{"hydroxyl"}, std::nullopt)),
               SlotMismatch);
  EXPECT_THROW(render_template("Replace a {} in the molecule {} by {}.", slots_for(AddGroup{"hydroxyl"}, "M")),
               SlotMismatch);
  EXPECT_THROW(render_template("Add a {} to the molecule {}.", slots_for(SubGroup{"thiol", "nitrile"}, "M")),
               SlotMismatch);
  EXPECT_THROW(render_template("The molecule has {} atom(s).", slots_for(AddGroup{"hydroxyl"}, std::nullopt)),
               SlotMismatch);
  EXPECT_THROW(render_template("Optimize the molecule {} to have a lower/higher LogP value.",
                               slots_for(AddGroup{"hydroxyl"}, "M")),
               SlotMismatch);
}

TEST(Templates, JoinList) {
  EXPECT_EQ(join_list({"a"}), "a");
  EXPECT_EQ(join_list({"a", "b"}), "a and b");
  EXPECT_EQ(join_list({"a", "b", "c"}), "a, b and c");
}

TEST(Templates, SameSeedSamePrompt) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng a(seed), b(seed);
    EXPECT_EQ(gen_molcustom(a, Subtask::AtomNum).prompt, gen_molcustom(b, Subtask::AtomNum).prompt);
  }
}

TEST(Requirement, JsonRoundTrip) {
  const std::vector<Requirement> reqs = {
      AddGroup{"benzene ring"},
      DelGroup{"amine"},
      SubGroup{"thiol", "nitrile"},
      OptimizeProperty{Property::QED, Direction::Lower},
      OptimizeProperty{Property::LogP, Direction::Higher},
      AtomCounts{{{6, 15}, {35, 2}}},
      BondCounts{{{BondCategory::Aromatic, 6}, {BondCategory::Rotatable, 2}}},
      GroupCounts{{{"hydroxyl", 2}, {"benzene ring", 1}}}};
  for (const auto& r : reqs) {
    const auto j = requirement_to_json(r);
    EXPECT_EQ(requirement_from_json(nlohmann::json::parse(j.dump())), r) << j.dump();
  }
  EXPECT_THROW(requirement_from_json(nlohmann::json{{"type", "Nope"}}), RequirementError);
  EXPECT_THROW(requirement_from_json(nlohmann::json{{"type", "AtomCounts"}, {"counts", {{"Xq", 1}}}}), RequirementError);
}

TEST(Requirement, Validation) {
  EXPECT_NO_THROW(validate_requirement(Subtask::AddComponent, AddGroup{"hydroxyl"}));
  EXPECT_THROW(validate_requirement(Subtask::AddComponent, AddGroup{"ketone"}), RequirementError);
  EXPECT_THROW(validate_requirement(Subtask::SubComponent, SubGroup{"amide", "hydroxyl"}), RequirementError);
  EXPECT_THROW(validate_requirement(Subtask::SubComponent, SubGroup{"thiol", "thiol"}), RequirementError);
  EXPECT_THROW(validate_requirement(Subtask::LogP, OptimizeProperty{Property::MR, Direction::Lower}), RequirementError);
  EXPECT_THROW(validate_requirement(Subtask::AtomNum, AtomCounts{{{8, 2}}}), RequirementError);
  EXPECT_THROW(validate_requirement(Subtask::AtomNum, AtomCounts{{{6, 41}}}), RequirementError);
  EXPECT_THROW(validate_requirement(Subtask::BondNum, BondCounts{{{BondCategory::Aromatic, 4}}}), RequirementError);
  EXPECT_THROW(validate_requirement(Subtask::FunctionalGroup, GroupCounts{{{"hydroxyl", 6}}}), RequirementError);
  EXPECT_THROW(validate_requirement(Subtask::BondNum, AtomCounts{{{6, 1}}}), RequirementError);
}

TEST(Editor, DocumentedExamples) {
  Rng rng(9);
  const Molecule ethane = parse_smiles("CC");
  const Molecule added = apply_edit(ethane, AddGroup{"hydroxyl"}, rng);
  EXPECT_EQ(count_group(ethane, "hydroxyl"), 0);
  EXPECT_EQ(count_group(added, "hydroxyl"), 1);
  EXPECT_EQ(write_smiles(apply_edit(parse_smiles("CCO"), DelGroup{"hydroxyl"}, rng)), "CC");
  const Molecule thiol = parse_smiles("CCCS");
  const Molecule subbed = apply_edit(thiol, SubGroup{"thiol", "nitrile"}, rng);
  EXPECT_EQ(write_smiles(subbed), canonical_smiles("CCCC#N"));
  EXPECT_TRUE(check_moledit(thiol, subbed, SubGroup{"thiol", "nitrile"}));
}

TEST(Editor, Errors) {
  Rng rng(2);
  EXPECT_THROW(apply_edit(parse_smiles("FC(F)(F)F"), AddGroup{"hydroxyl"}, rng), NoAttachmentSite);
  EXPECT_THROW(apply_edit(parse_smiles("CC"), DelGroup{"hydroxyl"}, rng), NoRemovableMatch);
  // Each removal would split the molecule.
  EXPECT_THROW(apply_edit(parse_smiles("CCC(=O)NCC"), DelGroup{"amide"}, rng), NoRemovableMatch);
  EXPECT_THROW(apply_edit(parse_smiles("CCc1ccc(CC)cc1"), DelGroup{"benzene ring"}, rng), NoRemovableMatch);
  EXPECT_THROW(apply_edit(parse_smiles("CC"), SubGroup{"thiol", "hydroxyl"}, rng), NoRemovableMatch);
  EXPECT_EQ(write_smiles(apply_edit(parse_smiles("c1ccccc1CC(=O)N"), DelGroup{"benzene ring"}, rng)),
            canonical_smiles("CC(N)=O"));
}

// Every successful edit moves the counts by exactly the deltas the MolEdit check expects
// and keeps the molecule connected.
TEST(Editor, CountDeltasOnCorpus) {
  const auto& reg = GroupRegistry::builtin();
  const auto smiles = molbench::testing::read_smiles("data/corpus/test_corpus.smi", 120);
  Rng rng(17);
  int adds = 0, dels = 0, subs = 0;
  for (const auto& s : smiles) {
    const Molecule m = parse_smiles(s);
    for (const auto& [g, w] : reg.weights_addcomponent()) {
      const int before = reg.count(m, g);
      try {
        const Molecule p = apply_edit(m, AddGroup{g}, rng);
        EXPECT_EQ(reg.count(p, g), before + 1) << s << " + " << g;
        EXPECT_GT(reg.count(p, g), before);
        EXPECT_EQ(p.num_fragments(), 1) << s;
        ++adds;
      } catch (const NoAttachmentSite&) {
      }
      if (before == 0) continue;
      try {
        const Molecule p = apply_edit(m, DelGroup{g}, rng);
        EXPECT_EQ(reg.count(p, g), before - 1) << s << " - " << g;
        EXPECT_EQ(p.num_fragments(), 1) << s;
        ++dels;
      } catch (const NoRemovableMatch&) {
      }
    }
    for (const auto& from : reg.end_groups()) {
      if (reg.count(m, from) == 0) continue;
      for (const auto& to : reg.end_groups()) {
        if (to == from) continue;
        try {
          const Molecule p = apply_edit(m, SubGroup{from, to}, rng);
          EXPECT_TRUE(check_moledit(m, p, SubGroup{from, to})) << s << " " << from << "->" << to;
          ++subs;
        } catch (const NoAttachmentSite&) {
        } catch (const NoRemovableMatch&) {
        }
      }
    }
  }
  EXPECT_GT(adds, 1000);
  EXPECT_GT(dels, 50);
  EXPECT_GT(subs, 50);
}

TEST(GenMolEdit, DelOnlyCandidate) {
  const Corpus c = Corpus::from_smiles({"CCO"});
  Rng rng(5);
  const TaskInstance t = gen_moledit(c, rng, Subtask::DelComponent);
  EXPECT_EQ(t.requirement, Requirement(DelGroup{"hydroxyl"}));
  EXPECT_EQ(t.witness, "CC");
  EXPECT_EQ(*t.source_smiles, "CCO");
}

TEST(GenMolEdit, SubUsesEndGroupsOnly) {
  const auto ends = GroupRegistry::builtin().end_groups();
  const std::set<std::string> end_set(ends.begin(), ends.end());
  EXPECT_FALSE(end_set.count("amide"));
  const Corpus c = small_corpus(500);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng rng(seed);
    const auto t = gen_moledit(c, rng, Subtask::SubComponent);
    const auto& sub = std::get<SubGroup>(t.requirement);
    EXPECT_TRUE(end_set.count(sub.from));
    EXPECT_TRUE(end_set.count(sub.to));
    EXPECT_NE(sub.from, sub.to);
  }
}

TEST(GenMolEdit, ResampleExhausted) {
  const Corpus c = Corpus::from_smiles({"C", "CC"});
  Rng rng(1);
  EXPECT_THROW(gen_moledit(c, rng, Subtask::DelComponent), ResampleExhausted);
  EXPECT_THROW(gen_moledit(Corpus{}, rng, Subtask::AddComponent), EmptyCorpus);
}

TEST(GenMolEdit, WitnessPassesChecker) {
  const Corpus c = small_corpus(300);
  for (Subtask s : {Subtask::AddComponent, Subtask::DelComponent, Subtask::SubComponent})
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
      Rng rng(seed);
      const auto t = gen_moledit(c, rng, s);
      const Molecule src = parse_smiles(*t.source_smiles);
      EXPECT_TRUE(check_moledit(src, parse_smiles(*t.witness), t.requirement)) << t.prompt;
      EXPECT_NO_THROW(validate_requirement(s, t.requirement));
    }
}

TEST(GenMolOpt, DirectionSplitIsBalanced) {
  const Corpus c = small_corpus(50);
  Rng rng(8);
  int higher = 0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    const auto t = gen_molopt(c, rng, Subtask::LogP);
    const auto& opt = std::get<OptimizeProperty>(t.requirement);
    higher += opt.direction == Direction::Higher;
    const std::string word = opt.direction == Direction::Higher ? "higher" : "lower";
    const std::string verb = opt.direction == Direction::Higher ? "increase" : "decrease";
    EXPECT_TRUE(t.prompt.find(word) != std::string::npos || t.prompt.find(verb) != std::string::npos);
  }
  EXPECT_LT(std::abs(higher - n / 2), 4 * std::sqrt(n * 0.25));
}

TEST(GenMolOpt, QedLowerTemplateOne) {
  const Corpus c = Corpus::from_smiles({"CCO"});
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(seed);
    const auto t = gen_molopt(c, rng, Property::QED, Direction::Lower);
    if (t.template_id == 1) {
      EXPECT_EQ(t.prompt, "Please optimize the molecule CCO to have a lower QED value.");
      return;
    }
  }
  FAIL() << "template 1 never drawn";
}

TEST(GenMolCustom, RangesAndMandatoryCarbon) {
  Rng rng(4);
  for (int i = 0; i < 3000; ++i) {
    for (Subtask s : {Subtask::AtomNum, Subtask::BondNum, Subtask::FunctionalGroup}) {
      const auto t = gen_molcustom(rng, s);
      EXPECT_NO_THROW(validate_requirement(s, t.requirement));
      if (const auto* a = std::get_if<AtomCounts>(&t.requirement)) {
        ASSERT_FALSE(a->counts.empty());
        EXPECT_EQ(a->counts.front().first, 6);
      }
    }
  }
}

TEST(GenMolCustom, AtomNumCaseStudyIsProducible) {
  for (std::uint64_t seed = 0; seed < 2000000; ++seed) {
    Rng rng(seed);
    const auto t = gen_molcustom(rng, Subtask::AtomNum);
    if (std::get<AtomCounts>(t.requirement) == AtomCounts{{{6, 15}, {35, 2}}}) {
      EXPECT_NE(t.prompt.find("15 carbon atoms and 2 bromine atoms"), std::string::npos);
      return;
    }
  }
  FAIL() << "requirement {C:15, Br:2} not drawn";
}

TEST(Sampler, AddGroupFrequenciesFollowWeights) {
  const auto w = GroupRegistry::builtin().weights_addcomponent();
  double total = 0;
  for (const auto& [g, x] : w) total += x;
  std::map<std::string, int> hits;
  Rng rng(77);
  const int n = 100000;
  for (int i = 0; i < n; ++i) ++hits[sample_add_group(rng)];
  for (const auto& [g, x] : w) {
    const double p = x / total;
    EXPECT_LT(std::abs(hits[g] - n * p), 3 * std::sqrt(n * p * (1 - p))) << g;
  }
  EXPECT_NEAR(w.front().second / total, 15.0 / 67.0, 1e-12);
}

TEST(Benchmark, DeterministicAcrossThreadCounts) {
  const Corpus c = small_corpus(400);
  BenchmarkOptions a{10, 123, 1}, b{10, 123, 3};
  const auto x = generate_benchmark(c, a);
  const auto y = generate_benchmark(c, b);
  ASSERT_EQ(x.size(), 90u);
  ASSERT_EQ(y.size(), 90u);
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_EQ(instance_to_json(x[i]).dump(), instance_to_json(y[i]).dump());
}

TEST(Benchmark, SeedTraceReproducesInstance) {
  const Corpus c = small_corpus(400);
  const auto all = generate_benchmark(c, {5, 99, 1});
  for (const auto& t : all) {
    Rng rng(t.seed_trace.rng_seed());
    TaskInstance again = task_of(t.subtask) == Task::MolEdit  ? gen_moledit(c, rng, t.subtask)
                         : task_of(t.subtask) == Task::MolOpt ? gen_molopt(c, rng, t.subtask)
                                                              : gen_molcustom(rng, t.subtask);
    again.id = t.id;
    again.seed_trace = t.seed_trace;
    EXPECT_EQ(instance_to_json(again).dump(), instance_to_json(t).dump());
    const auto parsed = instance_from_json(nlohmann::json::parse(instance_to_json(t).dump()));
    EXPECT_EQ(instance_to_json(parsed).dump(), instance_to_json(t).dump());
  }
}

TEST(Benchmark, MolCustomRequirementsAreDistinct) {
  const auto all = generate_benchmark(Corpus::from_smiles({"CCO"}), {0, 1, 1});
  EXPECT_TRUE(all.empty());
  BenchmarkOptions opt{2000, 5, 1};
  const Corpus c = small_corpus(200);
  const auto inst = generate_benchmark(c, opt);
  std::map<Subtask, std::set<std::string>> seen;
  for (const auto& t : inst)
    if (task_of(t.subtask) == Task::MolCustom)
      EXPECT_TRUE(seen[t.subtask].insert(requirement_to_json(t.requirement).dump()).second) << t.id;
}

TEST(Scale, TotalsAndSplit) {
  const std::map<Scale, std::size_t> totals = {{Scale::Light, 4500},
                                               {Scale::Small, 18000},
                                               {Scale::Medium, 45000},
                                               {Scale::Large, 90000},
                                               {Scale::XLarge, 1200000}};
  for (const auto& [s, n] : totals) {
    const ScaleConfig c = ScaleConfig::of(s);
    EXPECT_EQ(c.total_pairs, n);
    EXPECT_EQ(ScaleConfig::parse(c.name()).level, s);
    std::size_t sum = 0, lo = SIZE_MAX, hi = 0;
    for (Subtask t : kSubtasks) {
      sum += c.per_subtask(t);
      lo = std::min(lo, c.per_subtask(t));
      hi = std::max(hi, c.per_subtask(t));
    }
    EXPECT_EQ(sum, n);
    EXPECT_LE(hi - lo, 1u);
  }
  EXPECT_EQ(ScaleConfig::of(Scale::Light).per_subtask(Subtask::QED), 500u);
  EXPECT_THROW(ScaleConfig::parse("huge"), std::invalid_argument);
}

TEST(OpenMolIns, SmallRunContracts) {
  const Corpus train = Corpus::from_smiles(molbench::testing::read_smiles("data/corpus/train_source.smi", 2000));
  const auto exclusion = test_corpus().canonical_set();
  ScaleConfig scale{Scale::Light, 180};
  const auto pairs = gen_openmolins(train, scale, exclusion, {31, 1});
  ASSERT_EQ(pairs.size(), 180u);
  std::map<Subtask, int> per;
  for (const auto& p : pairs) {
    ++per[p.subtask];
    EXPECT_FALSE(exclusion.count(p.response));
    EXPECT_EQ(canonical_smiles(p.response), p.response);
    const Molecule resp = scored_molecule(parse_smiles(p.response));
    std::optional<Molecule> src;
    if (p.source_smiles) src = parse_smiles(*p.source_smiles);
    EXPECT_TRUE(check_requirement(p.subtask, src ? &*src : nullptr, resp, p.requirement)) << p.instruction;
    EXPECT_NO_THROW(validate_requirement(p.subtask, p.requirement));
    if (task_of(p.subtask) == Task::MolOpt) {
      const auto& opt = std::get<OptimizeProperty>(p.requirement);
      const double delta = p.provenance.at("delta").get<double>();
      EXPECT_EQ(opt.direction == Direction::Higher, delta > 0);
    }
  }
  for (Subtask s : kSubtasks) EXPECT_EQ(per[s], 20) << subtask_name(s);
  const auto again = gen_openmolins(train, scale, exclusion, {31, 2});
  for (std::size_t i = 0; i < pairs.size(); ++i) EXPECT_EQ(pair_to_json(pairs[i]).dump(), pair_to_json(again[i]).dump());
}

TEST(OpenMolIns, ExclusionExhausted) {
  const Corpus c = Corpus::from_smiles({"CCO", "CCN"});
  ScaleConfig scale{Scale::Light, 9};
  EXPECT_THROW(gen_openmolins(c, scale, c.canonical_set(), {}), ExclusionExhausted);
  // Only ethane left: nothing editable, no aromatic bonds.
  const Corpus d = Corpus::from_smiles({"CC"});
  EXPECT_THROW(gen_openmolins(d, scale, {}, {}), ExclusionExhausted);
}
