// SPDX-License-Identifier: Apache-2.0
#include "molbench/taskgen/generate.h"

#include <algorithm>
#include <cstdio>
#include <set>

#include "molbench/chem/counts.h"
#include "molbench/chem/errors.h"
#include "molbench/chem/smiles.h"
#include "molbench/eval/checks.h"
#include "molbench/patterns/groups.h"
#include "molbench/taskgen/tables.h"
#include "molbench/util/parallel.h"

namespace molbench {

namespace {

constexpr std::uint64_t kTrainingStream = 100;

const std::string& draw_molecule(const Corpus& corpus, Rng& rng) {
  if (corpus.smiles.empty()) throw EmptyCorpus("corpus has no valid molecules");
  return rng.pick(corpus.smiles);
}

std::vector<int> weights_of(const std::vector<std::pair<std::string, int>>& w) {
  std::vector<int> out;
  for (const auto& p : w) out.push_back(p.second);
  return out;
}

// Groups from the AddComponent/DelComponent vocabulary present in `mol`.
std::vector<std::string> present_editable(const Molecule& mol) {
  const GroupRegistry& reg = GroupRegistry::builtin();
  std::vector<std::string> out;
  for (const auto& [g, w] : reg.weights_addcomponent())
    if (reg.count(mol, g) > 0) out.push_back(g);
  return out;
}

std::vector<std::string> present_end_groups(const Molecule& mol) {
  const GroupRegistry& reg = GroupRegistry::builtin();
  std::vector<std::string> out;
  for (const auto& g : reg.end_groups())
    if (reg.count(mol, g) > 0) out.push_back(g);
  return out;
}

std::string other_end_group(const std::string& from, Rng& rng) {
  std::vector<std::string> others;
  for (const auto& g : GroupRegistry::builtin().end_groups())
    if (g != from) others.push_back(g);
  return rng.pick(others);
}

struct EditDraw {
  Edit edit;
  Molecule product;
};

// One attempt at an edit of the given kind on `mol`; nullopt when the
// molecule does not admit it.
std::optional<EditDraw> try_edit(const Molecule& mol, Subtask kind, Rng& rng, const std::string* add_group) {
  try {
    if (kind == Subtask::AddComponent) {
      AddGroup e{add_group ? *add_group : sample_add_group(rng)};
      Molecule p = apply_edit(mol, e, rng);
      return EditDraw{e, std::move(p)};
    }
    if (kind == Subtask::DelComponent) {
      const auto present = present_editable(mol);
      if (present.empty()) return std::nullopt;
      DelGroup e{rng.pick(present)};
      Molecule p = apply_edit(mol, e, rng);
      return EditDraw{e, std::move(p)};
    }
    const auto present = present_end_groups(mol);
    if (present.empty()) return std::nullopt;
    const std::string from = rng.pick(present);
    SubGroup e{from, other_end_group(from, rng)};
    Molecule p = apply_edit(mol, e, rng);
    return EditDraw{e, std::move(p)};
  } catch (const NoAttachmentSite&) {
    return std::nullopt;
  } catch (const NoRemovableMatch&) {
    return std::nullopt;
  }
}

Requirement edit_requirement(const Edit& e) {
  return std::visit([](const auto& v) -> Requirement { return v; }, e);
}

std::string index_id(Subtask s, std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "-%06zu", i);
  return std::string(subtask_name(s)) + buf;
}

nlohmann::json trace_json(const SeedTrace& t) {
  return {{"seed", t.seed}, {"stream", t.stream}, {"index", t.index}, {"attempt", t.attempt}};
}

SeedTrace trace_from_json(const nlohmann::json& j) {
  return {j.at("seed").get<std::uint64_t>(), j.at("stream").get<std::uint64_t>(), j.at("index").get<std::uint64_t>(),
          j.at("attempt").get<std::uint64_t>()};
}

// Statistics of `mol` in the shape of a MolCustom requirement, restricted
// to items whose counts lie in the generation ranges.
std::optional<Requirement> extract_statistics(const Molecule& mol, Subtask s, Rng& rng) {
  const SamplingTables& tab = SamplingTables::builtin();
  auto in = [](int n, CountRange r) { return n >= r.min && n <= r.max; };
  if (s == Subtask::AtomNum) {
    const auto counts = heavy_atom_counts(mol);
    AtomCounts req;
    std::vector<int> z_cand, w_cand;
    for (const auto& row : tab.atoms) {
      const auto it = counts.find(row.z);
      const int n = it == counts.end() ? 0 : it->second;
      if (row.mandatory) {
        if (!in(n, row.range)) return std::nullopt;
        req.counts.emplace_back(row.z, n);
      } else if (n > 0 && in(n, row.range)) {
        z_cand.push_back(row.z);
        w_cand.push_back(row.weight);
      }
    }
    const long hi = std::min<long>(tab.atom_types.max, static_cast<long>(z_cand.size()));
    const long k = rng.uniform_int(std::min<long>(tab.atom_types.min, hi), hi);
    for (std::size_t i : rng.weighted_sample(w_cand, k)) req.counts.emplace_back(z_cand[i], counts.at(z_cand[i]));
    return req;
  }
  if (s == Subtask::BondNum) {
    const auto counts = bond_counts(mol);
    std::vector<BondCategory> c_cand;
    std::vector<int> w_cand;
    for (const auto& row : tab.bonds) {
      const auto it = counts.find(row.category);
      if (it != counts.end() && in(it->second, row.range)) {
        c_cand.push_back(row.category);
        w_cand.push_back(row.weight);
      }
    }
    const long hi = std::min<long>(tab.bond_types.max, static_cast<long>(c_cand.size()));
    if (hi < std::max(1, tab.bond_types.min)) return std::nullopt;
    const long k = rng.uniform_int(std::max(1, tab.bond_types.min), hi);
    BondCounts req;
    for (std::size_t i : rng.weighted_sample(w_cand, k)) req.counts.emplace_back(c_cand[i], counts.at(c_cand[i]));
    return req;
  }
  const GroupRegistry& reg = GroupRegistry::builtin();
  std::vector<std::string> g_cand;
  std::vector<int> w_cand, n_cand;
  for (const auto& [g, w] : reg.weights_functionalgroup()) {
    const int n = reg.count(mol, g);
    if (n > 0 && in(n, tab.group_count)) {
      g_cand.push_back(g);
      w_cand.push_back(w);
      n_cand.push_back(n);
    }
  }
  const long hi = std::min<long>(tab.group_types.max, static_cast<long>(g_cand.size()));
  if (hi < std::max(1, tab.group_types.min)) return std::nullopt;
  const long k = rng.uniform_int(std::max(1, tab.group_types.min), hi);
  GroupCounts req;
  for (std::size_t i : rng.weighted_sample(w_cand, k)) req.counts.emplace_back(g_cand[i], n_cand[i]);
  return req;
}

nlohmann::json edit_json(const Edit& e) { return requirement_to_json(edit_requirement(e)); }

// One training pair attempt; nullopt when this draw is unusable.
std::optional<TrainingPair> try_pair(const Corpus& corpus, Subtask s, const std::unordered_set<std::string>& exclusion,
                                     Rng& rng) {
  const std::string& src = draw_molecule(corpus, rng);
  const Molecule mol = parse_smiles(src);
  TrainingPair p;
  p.subtask = s;
  std::optional<std::string> prompt_source = src;
  switch (task_of(s)) {
    case Task::MolEdit: {
      auto d = try_edit(mol, s, rng, nullptr);
      if (!d) return std::nullopt;
      p.requirement = edit_requirement(d->edit);
      p.response = write_smiles(d->product);
      p.provenance = {{"edit", edit_json(d->edit)}};
      break;
    }
    case Task::MolOpt: {
      static constexpr Subtask kKinds[] = {Subtask::AddComponent, Subtask::DelComponent, Subtask::SubComponent};
      const Subtask kind = kKinds[rng.uniform_int(0, 2)];
      auto d = try_edit(mol, kind, rng, nullptr);
      if (!d) return std::nullopt;
      const Property prop = property_of(s);
      const double delta = property_value(d->product, prop) - property_value(mol, prop);
      if (delta == 0.0) return std::nullopt;
      p.requirement = OptimizeProperty{prop, delta > 0 ? Direction::Higher : Direction::Lower};
      p.response = write_smiles(d->product);
      p.provenance = {{"edit", edit_json(d->edit)}, {"delta", delta}};
      break;
    }
    case Task::MolCustom: {
      auto req = extract_statistics(mol, s, rng);
      if (!req) return std::nullopt;
      p.requirement = std::move(*req);
      p.response = src;
      p.provenance = {{"statistics", src}};
      prompt_source.reset();
      break;
    }
  }
  if (exclusion.count(p.response)) return std::nullopt;
  validate_requirement(s, p.requirement);
  // Self-consistency gate: the response must pass the evaluator's checker.
  const Molecule response = scored_molecule(parse_smiles(p.response));
  if (!check_requirement(s, &mol, response, p.requirement)) return std::nullopt;
  if (prompt_source) p.source_smiles = src;
  const RenderedPrompt rp = render_prompt(s, p.requirement, prompt_source, TemplatePool::builtin(), rng);
  p.instruction = rp.text;
  p.template_id = rp.template_id;
  return p;
}

}  // namespace

std::string sample_add_group(Rng& rng) {
  const auto w = GroupRegistry::builtin().weights_addcomponent();
  return w[rng.weighted_index(weights_of(w))].first;
}

Requirement sample_molcustom_requirement(Rng& rng, Subtask s) {
  const SamplingTables& tab = SamplingTables::builtin();
  if (s == Subtask::AtomNum) {
    AtomCounts req;
    std::vector<const SamplingTables::AtomRow*> rows;
    std::vector<int> weights;
    for (const auto& row : tab.atoms) {
      if (row.mandatory) {
        req.counts.emplace_back(row.z, static_cast<int>(rng.uniform_int(row.range.min, row.range.max)));
      } else {
        rows.push_back(&row);
        weights.push_back(row.weight);
      }
    }
    const long k = rng.uniform_int(tab.atom_types.min, tab.atom_types.max);
    for (std::size_t i : rng.weighted_sample(weights, k))
      req.counts.emplace_back(rows[i]->z, static_cast<int>(rng.uniform_int(rows[i]->range.min, rows[i]->range.max)));
    return req;
  }
  if (s == Subtask::BondNum) {
    BondCounts req;
    std::vector<int> weights;
    for (const auto& row : tab.bonds) weights.push_back(row.weight);
    const long k = rng.uniform_int(tab.bond_types.min, tab.bond_types.max);
    for (std::size_t i : rng.weighted_sample(weights, k)) {
      const auto& row = tab.bonds[i];
      req.counts.emplace_back(row.category, static_cast<int>(rng.uniform_int(row.range.min, row.range.max)));
    }
    return req;
  }
  if (s == Subtask::FunctionalGroup) {
    const auto w = GroupRegistry::builtin().weights_functionalgroup();
    GroupCounts req;
    const long k = rng.uniform_int(tab.group_types.min, tab.group_types.max);
    for (std::size_t i : rng.weighted_sample(weights_of(w), k))
      req.counts.emplace_back(w[i].first, static_cast<int>(rng.uniform_int(tab.group_count.min, tab.group_count.max)));
    return req;
  }
  throw std::invalid_argument("not a MolCustom subtask: " + std::string(subtask_name(s)));
}

TaskInstance gen_moledit(const Corpus& corpus, Rng& rng, Subtask s) {
  if (task_of(s) != Task::MolEdit) throw std::invalid_argument("not a MolEdit subtask");
  if (corpus.smiles.empty()) throw EmptyCorpus("corpus has no valid molecules");
  // The Add target is drawn once so its frequency follows the weights.
  std::optional<std::string> add_group;
  if (s == Subtask::AddComponent) add_group = sample_add_group(rng);
  for (int attempt = 0; attempt < kRetryBudget; ++attempt) {
    const std::string& src = draw_molecule(corpus, rng);
    const Molecule mol = parse_smiles(src);
    auto d = try_edit(mol, s, rng, add_group ? &*add_group : nullptr);
    if (!d) continue;
    TaskInstance t;
    t.subtask = s;
    t.requirement = edit_requirement(d->edit);
    t.source_smiles = src;
    t.witness = write_smiles(d->product);
    const RenderedPrompt rp = render_prompt(s, t.requirement, t.source_smiles, TemplatePool::builtin(), rng);
    t.prompt = rp.text;
    t.template_id = rp.template_id;
    return t;
  }
  throw ResampleExhausted("no corpus molecule admitted " + std::string(subtask_name(s)) + " within " +
                          std::to_string(kRetryBudget) + " draws");
}

TaskInstance gen_molopt(const Corpus& corpus, Rng& rng, Property p, Direction d) {
  TaskInstance t;
  t.subtask = p == Property::LogP ? Subtask::LogP : p == Property::MR ? Subtask::MR : Subtask::QED;
  t.source_smiles = draw_molecule(corpus, rng);
  t.requirement = OptimizeProperty{p, d};
  const RenderedPrompt rp = render_prompt(t.subtask, t.requirement, t.source_smiles, TemplatePool::builtin(), rng);
  t.prompt = rp.text;
  t.template_id = rp.template_id;
  return t;
}

TaskInstance gen_molopt(const Corpus& corpus, Rng& rng, Subtask s) {
  const Property p = property_of(s);
  const std::string& src = draw_molecule(corpus, rng);
  const Direction d = rng.coin() ? Direction::Higher : Direction::Lower;
  TaskInstance t;
  t.subtask = s;
  t.source_smiles = src;
  t.requirement = OptimizeProperty{p, d};
  const RenderedPrompt rp = render_prompt(s, t.requirement, t.source_smiles, TemplatePool::builtin(), rng);
  t.prompt = rp.text;
  t.template_id = rp.template_id;
  return t;
}

TaskInstance gen_molcustom(Rng& rng, Subtask s) {
  TaskInstance t;
  t.subtask = s;
  t.requirement = sample_molcustom_requirement(rng, s);
  const RenderedPrompt rp = render_prompt(s, t.requirement, std::nullopt, TemplatePool::builtin(), rng);
  t.prompt = rp.text;
  t.template_id = rp.template_id;
  return t;
}

std::vector<TaskInstance> generate_benchmark(const Corpus& corpus, const BenchmarkOptions& opt) {
  std::vector<TaskInstance> out;
  out.reserve(opt.per_subtask * kSubtasks.size());
  for (Subtask s : kSubtasks) {
    const std::uint64_t stream = static_cast<std::uint64_t>(subtask_index(s));
    std::vector<TaskInstance> batch(opt.per_subtask);
    if (task_of(s) == Task::MolCustom) {
      std::set<std::string> seen;
      for (std::size_t i = 0; i < opt.per_subtask; ++i) {
        for (std::uint64_t attempt = 0;; ++attempt) {
          if (attempt == static_cast<std::uint64_t>(kRetryBudget))
            throw ResampleExhausted("could not draw a new distinct " + std::string(subtask_name(s)) + " requirement");
          SeedTrace trace{opt.seed, stream, i, attempt};
          Rng rng(trace.rng_seed());
          TaskInstance t = gen_molcustom(rng, s);
          if (!seen.insert(requirement_to_json(t.requirement).dump()).second) continue;
          t.seed_trace = trace;
          batch[i] = std::move(t);
          break;
        }
      }
    } else {
      parallel_for(opt.per_subtask, opt.threads, [&](std::size_t i) {
        SeedTrace trace{opt.seed, stream, i, 0};
        Rng rng(trace.rng_seed());
        TaskInstance t = task_of(s) == Task::MolEdit ? gen_moledit(corpus, rng, s) : gen_molopt(corpus, rng, s);
        t.seed_trace = trace;
        batch[i] = std::move(t);
      });
    }
    for (std::size_t i = 0; i < batch.size(); ++i) {
      batch[i].id = index_id(s, i);
      out.push_back(std::move(batch[i]));
    }
  }
  return out;
}

nlohmann::json instance_to_json(const TaskInstance& t) {
  nlohmann::json j = {{"id", t.id},
                      {"subtask", subtask_name(t.subtask)},
                      {"task", task_name(task_of(t.subtask))},
                      {"prompt", t.prompt},
                      {"requirement", requirement_to_json(t.requirement)},
                      {"template_id", t.template_id},
                      {"seed_trace", trace_json(t.seed_trace)}};
  j["source"] = t.source_smiles ? nlohmann::json(*t.source_smiles) : nlohmann::json(nullptr);
  if (t.witness) j["witness"] = *t.witness;
  return j;
}

TaskInstance instance_from_json(const nlohmann::json& j) {
  TaskInstance t;
  try {
    t.id = j.at("id").get<std::string>();
    t.subtask = parse_subtask(j.at("subtask").get<std::string>());
    t.prompt = j.at("prompt").get<std::string>();
    t.requirement = requirement_from_json(j.at("requirement"));
    t.template_id = j.at("template_id").get<int>();
    t.seed_trace = trace_from_json(j.at("seed_trace"));
    if (j.contains("source") && !j["source"].is_null()) t.source_smiles = j["source"].get<std::string>();
    if (j.contains("witness")) t.witness = j["witness"].get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw RequirementError(std::string("malformed instance record: ") + e.what());
  }
  return t;
}

ScaleConfig ScaleConfig::of(Scale s) {
  switch (s) {
    case Scale::Light: return {s, 4500};
    case Scale::Small: return {s, 18000};
    case Scale::Medium: return {s, 45000};
    case Scale::Large: return {s, 90000};
    case Scale::XLarge: return {s, 1200000};
  }
  return {s, 0};
}

ScaleConfig ScaleConfig::parse(std::string_view name) {
  for (Scale s : {Scale::Light, Scale::Small, Scale::Medium, Scale::Large, Scale::XLarge})
    if (of(s).name() == name) return of(s);
  throw std::invalid_argument("unknown scale: " + std::string(name));
}

std::string_view ScaleConfig::name() const {
  switch (level) {
    case Scale::Light: return "light";
    case Scale::Small: return "small";
    case Scale::Medium: return "medium";
    case Scale::Large: return "large";
    case Scale::XLarge: return "xlarge";
  }
  return "";
}

std::size_t ScaleConfig::per_subtask(Subtask s) const {
  const std::size_t n = kSubtasks.size();
  return total_pairs / n + (static_cast<std::size_t>(subtask_index(s)) < total_pairs % n ? 1 : 0);
}

nlohmann::json pair_to_json(const TrainingPair& p) {
  nlohmann::json j = {{"id", p.id},
                      {"subtask", subtask_name(p.subtask)},
                      {"task", task_name(task_of(p.subtask))},
                      {"instruction", p.instruction},
                      {"response", p.response},
                      {"requirement", requirement_to_json(p.requirement)},
                      {"provenance", p.provenance},
                      {"template_id", p.template_id},
                      {"seed_trace", trace_json(p.seed_trace)}};
  j["source"] = p.source_smiles ? nlohmann::json(*p.source_smiles) : nlohmann::json(nullptr);
  return j;
}

std::vector<TrainingPair> gen_openmolins(const Corpus& corpus, const ScaleConfig& scale,
                                         const std::unordered_set<std::string>& exclusion,
                                         const TrainingOptions& opt) {
  const Corpus pool = corpus.without(exclusion);
  if (pool.smiles.empty()) throw ExclusionExhausted("every corpus molecule is in the exclusion set");
  std::vector<TrainingPair> out;
  out.reserve(scale.total_pairs);
  for (Subtask s : kSubtasks) {
    const std::size_t n = scale.per_subtask(s);
    const std::uint64_t stream = kTrainingStream + static_cast<std::uint64_t>(subtask_index(s));
    std::vector<TrainingPair> batch(n);
    parallel_for(n, opt.threads, [&](std::size_t i) {
      for (std::uint64_t attempt = 0; attempt < static_cast<std::uint64_t>(kRetryBudget); ++attempt) {
        SeedTrace trace{opt.seed, stream, i, attempt};
        Rng rng(trace.rng_seed());
        auto p = try_pair(pool, s, exclusion, rng);
        if (!p) continue;
        p->seed_trace = trace;
        batch[i] = std::move(*p);
        return;
      }
      throw ExclusionExhausted("no acceptable " + std::string(subtask_name(s)) + " pair for slot " +
                               std::to_string(i) + " within " + std::to_string(kRetryBudget) + " draws");
    });
    for (std::size_t i = 0; i < n; ++i) {
      batch[i].id = index_id(s, i);
      out.push_back(std::move(batch[i]));
    }
  }
  return out;
}

}  // namespace molbench
