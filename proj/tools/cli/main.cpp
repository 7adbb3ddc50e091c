// SPDX-License-Identifier: Apache-2.0
// molbench: benchmark generation, endpoint runs, evaluation and reports.
#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <unordered_set>

#include "molbench/chem/smiles.h"
#include "molbench/descriptors/fingerprint.h"
#include "molbench/descriptors/properties.h"
#include "molbench/eval/evaluator.h"
#include "molbench/llm/adapter.h"
#include "molbench/taskgen/bench_io.h"
#include "molbench/taskgen/corpus.h"
#include "molbench/taskgen/generate.h"
#include "molbench/util/fs.h"
#include "molbench/util/hash.h"

namespace fs = std::filesystem;
using namespace molbench;

namespace {

constexpr int kOk = 0;
constexpr int kMismatch = 1;
constexpr int kConfig = 2;

void note(const std::string& msg) { std::cerr << "molbench: " << msg << '\n'; }

nlohmann::json corpus_json(const fs::path& path, const Corpus& c) {
  return {{"path", path.string()}, {"sha256", c.checksum}, {"molecules", c.smiles.size()}, {"skipped_lines", c.skipped}};
}

nlohmann::json tables_json() {
  nlohmann::json j = table_checksums();
  j["templates"] = templates_checksum();
  return j;
}

Corpus load_corpus(const fs::path& path, const char* what) {
  if (!fs::exists(path)) throw ConfigError(std::string(what) + " not found: " + path.string());
  Corpus c = Corpus::load(path);
  if (c.skipped > 0) note(std::to_string(c.skipped) + " unparseable lines skipped in " + path.string());
  return c;
}

void write_manifest(const fs::path& path, const nlohmann::json& m) { write_file_atomic(path, m.dump(2) + "\n"); }

// Checks the bench path and, when present, returns the manifest beside it.
nlohmann::json bench_manifest(const fs::path& bench) {
  if (!fs::exists(bench)) throw ConfigError("benchmark not found: " + bench.string());
  const fs::path m = fs::is_directory(bench) ? bench / "manifest.json" : fs::path(bench.string() + ".manifest.json");
  if (!fs::exists(m)) return nullptr;
  return nlohmann::json::parse(read_file(m));
}

struct GenBenchArgs {
  std::string corpus, out;
  std::size_t per_subtask = 5000;
  std::uint64_t seed = 0;
  unsigned threads = 0;
};

int cmd_gen_bench(const GenBenchArgs& a) {
  const Corpus corpus = load_corpus(a.corpus, "corpus");
  const auto instances = generate_benchmark(corpus, {a.per_subtask, a.seed, a.threads});
  fs::create_directories(a.out);
  nlohmann::json files = nlohmann::json::object();
  for (Subtask s : kSubtasks) {
    std::vector<TaskInstance> part;
    for (const auto& t : instances)
      if (t.subtask == s) part.push_back(t);
    const std::string text = instances_to_jsonl(part);
    const std::string name = subtask_file_name(s);
    write_file_atomic(fs::path(a.out) / name, text);
    files[name] = {{"instances", part.size()}, {"sha256", sha256_hex(text)}};
  }
  const nlohmann::json manifest{
      {"command", "gen-bench"},
      {"seed", a.seed},
      {"per_subtask", a.per_subtask},
      {"instances", instances.size()},
      {"corpus", corpus_json(a.corpus, corpus)},
      {"tables", tables_json()},
      {"files", files},
      {"policies",
       {{"retry_budget", kRetryBudget},
        {"molcustom_dedupe", "a MolCustom requirement already emitted for its subtask is redrawn with the next attempt"},
        {"prompt_molecule", "canonical SMILES"}}}};
  write_manifest(fs::path(a.out) / "manifest.json", manifest);
  note("wrote " + std::to_string(instances.size()) + " instances to " + a.out);
  return kOk;
}

struct GenTrainArgs {
  std::string corpus, exclude, out, scale = "light";
  std::uint64_t seed = 0;
  unsigned threads = 0;
};

int cmd_gen_train(const GenTrainArgs& a) {
  const ScaleConfig scale = ScaleConfig::parse(a.scale);
  const Corpus corpus = load_corpus(a.corpus, "corpus");
  const Corpus excluded = load_corpus(a.exclude, "exclusion corpus");
  const auto exclusion = excluded.canonical_set();
  const auto pairs = gen_openmolins(corpus, scale, exclusion, {a.seed, a.threads});
  std::size_t overlap = 0;
  for (const auto& p : pairs) {
    if (exclusion.count(p.response)) ++overlap;
    if (p.source_smiles && exclusion.count(*p.source_smiles)) ++overlap;
  }
  if (overlap != 0) throw std::runtime_error(std::to_string(overlap) + " training molecules overlap the exclusion set");
  fs::create_directories(a.out);
  nlohmann::json files = nlohmann::json::object();
  for (Subtask s : kSubtasks) {
    std::vector<TrainingPair> part;
    for (const auto& p : pairs)
      if (p.subtask == s) part.push_back(p);
    const std::string text = pairs_to_jsonl(part);
    const std::string name = subtask_file_name(s);
    write_file_atomic(fs::path(a.out) / name, text);
    files[name] = {{"pairs", part.size()}, {"sha256", sha256_hex(text)}};
  }
  const nlohmann::json manifest{{"command", "gen-train"},
                                {"seed", a.seed},
                                {"scale", scale.name()},
                                {"pairs", pairs.size()},
                                {"corpus", corpus_json(a.corpus, corpus)},
                                {"exclusion", corpus_json(a.exclude, excluded)},
                                {"exclusion_overlap", overlap},
                                {"tables", tables_json()},
                                {"files", files},
                                {"policies",
                                 {{"retry_budget", kRetryBudget},
                                  {"self_consistency", "every response passes its own instruction's checker"},
                                  {"dedupe", "none"}}}};
  write_manifest(fs::path(a.out) / "manifest.json", manifest);
  note("wrote " + std::to_string(pairs.size()) + " pairs (" + std::string(scale.name()) + ") to " + a.out);
  return kOk;
}

struct RunArgs {
  std::string bench, out, cache;
  EndpointConfig endpoint;
  GenParams params;
  bool dry_run = false;
};

int cmd_run(RunArgs a) {
  const nlohmann::json bm = bench_manifest(a.bench);
  if (!a.dry_run) a.endpoint.validate();
  if (a.out.empty() && !a.dry_run) throw ConfigError("--out is required");
  const auto instances = load_instances(a.bench);
  if (a.dry_run) {
    for (std::size_t i = 0; i < instances.size() && i < 3; ++i)
      std::cout << "[" << instances[i].id << "]\n" << instances[i].prompt << "\n\n";
    return kOk;
  }
  const fs::path cache_path = a.cache.empty() ? fs::path(a.out + ".cache.jsonl") : fs::path(a.cache);
  CompletionCache cache(cache_path);
  if (cache.damaged_lines() > 0) note(std::to_string(cache.damaged_lines()) + " damaged cache lines ignored");
  ChatClient client(a.endpoint, &cache, [](const std::string& m) { note(m); });
  const BatchSummary s = run_batch(instances, client, a.params, a.out);
  nlohmann::json bench_sum = nullptr;
  if (!bm.is_null()) bench_sum = {{"seed", bm.value("seed", nlohmann::json())}, {"files", bm.value("files", nlohmann::json())}};
  const nlohmann::json manifest{{"command", "run"},
                                {"bench", a.bench},
                                {"bench_manifest", bench_sum},
                                {"endpoint",
                                 {{"base_url", a.endpoint.base_url},
                                  {"model", a.endpoint.model_name},
                                  {"token_env", a.endpoint.auth_token_env_name},
                                  {"max_retries", a.endpoint.max_retries},
                                  {"timeout_seconds", a.endpoint.timeout_seconds}}},
                                {"params", a.params.to_json()},
                                {"system_prompt", kSystemPrompt},
                                {"instances", s.total},
                                {"failed", s.failed},
                                {"cache", cache_path.string()},
                                {"samples_per_instance", 1}};
  write_manifest(a.out + ".manifest.json", manifest);
  note(std::to_string(s.total) + " instances: " + std::to_string(s.resumed) + " resumed, " + std::to_string(s.answered) +
       " answered, " + std::to_string(s.failed) + " failed; " + std::to_string(client.requests()) + " requests, " +
       std::to_string(client.retries()) + " retries, " + std::to_string(client.cache_hits()) + " cache hits");
  return kOk;
}

struct EvalArgs {
  std::string bench, outputs, reference, reference_cache, model, out;
  unsigned threads = 0;
};

int cmd_eval(const EvalArgs& a) {
  const nlohmann::json bm = bench_manifest(a.bench);
  if (!fs::exists(a.outputs)) throw ConfigError("model output file not found: " + a.outputs);
  const auto instances = load_instances(a.bench);
  const auto outputs = load_outputs(a.outputs);
  std::optional<ReferenceIndex> ref;
  const bool needs_ref = std::any_of(instances.begin(), instances.end(), [](const TaskInstance& t) { return uses_novelty(t.subtask); });
  if (needs_ref) {
    if (a.reference.empty()) throw ConfigError("--reference is required for MolCustom instances");
    if (!fs::exists(a.reference)) throw ConfigError("reference corpus not found: " + a.reference);
    ref = a.reference_cache.empty() ? ReferenceIndex::build(a.reference)
                                    : ReferenceIndex::load_or_build(a.reference, a.reference_cache);
    if (ref->skipped() > 0) note(std::to_string(ref->skipped()) + " unparseable reference lines skipped");
  }
  const auto records = evaluate(instances, outputs, {a.threads, ref ? &*ref : nullptr});

  nlohmann::json prov{{"bench", a.bench},
                      {"outputs", a.outputs},
                      {"outputs_sha256", sha256_file(a.outputs)},
                      {"tables", tables_json()},
                      {"policies",
                       {{"sr_denominator", "all instances; missing, failed and unparseable outputs count as failures"},
                        {"quality_mean", "similarity and novelty averaged over valid outputs only (interpretation)"},
                        {"fragments", "multi-fragment outputs are checked on their largest fragment"},
                        {"molopt_equality", "fails"},
                        {"extraction", "fenced or quoted spans first, then the longest parseable token"}}}};
  if (!bm.is_null()) prov["bench_manifest"] = {{"seed", bm.value("seed", nlohmann::json())}, {"corpus", bm.value("corpus", nlohmann::json())}};
  if (const fs::path rm = a.outputs + ".manifest.json"; fs::exists(rm)) {
    const auto j = nlohmann::json::parse(read_file(rm));
    prov["params"] = j.value("params", nlohmann::json());
    prov["system_prompt"] = j.value("system_prompt", nlohmann::json());
    prov["endpoint"] = j.value("endpoint", nlohmann::json());
  } else {
    prov["params"] = GenParams{}.to_json();
  }
  if (ref) prov["reference"] = {{"path", a.reference}, {"sha256", ref->corpus_checksum()}, {"molecules", ref->size()}};
  std::string model = a.model;
  if (model.empty()) model = fs::path(a.outputs).stem().string();
  const Report rep = aggregate(score_all(records), model, prov);

  fs::create_directories(a.out);
  std::string lines;
  for (const auto& r : records) lines += record_to_json(r).dump() + "\n";
  write_file_atomic(fs::path(a.out) / "records.jsonl", lines);
  write_file_atomic(fs::path(a.out) / "report.json", report_to_json(rep).dump(2) + "\n");
  const std::string row = render_leaderboard_row(rep);
  write_file_atomic(fs::path(a.out) / "leaderboard.txt", row);
  std::cout << row;
  return kOk;
}

struct ReportArgs {
  std::vector<std::string> reports;
  std::string out;
};

int cmd_report(const ReportArgs& a) {
  std::vector<Report> reps;
  for (const auto& p : a.reports) {
    if (!fs::exists(p)) throw ConfigError("report not found: " + p);
    reps.push_back(report_from_json(nlohmann::json::parse(read_file(p))));
  }
  const std::string table = render_comparison(reps);
  if (!a.out.empty()) write_file_atomic(a.out, table);
  std::cout << table;
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"molbench: text-based open molecule generation benchmark"};
  app.set_config("--config", "", "key = value settings file (INI sections per subcommand allowed)");
  app.require_subcommand(1);
  // Lets --config follow the subcommand name.
  app.fallthrough();

  GenBenchArgs gb;
  auto* gen_bench = app.add_subcommand("gen-bench", "Generate the nine benchmark files and a manifest");
  gen_bench->add_option("--corpus", gb.corpus, "Source molecules, one SMILES per line")->required();
  gen_bench->add_option("--out", gb.out, "Output directory")->required();
  gen_bench->add_option("--per-subtask,-n", gb.per_subtask, "Instances per subtask")->capture_default_str();
  gen_bench->add_option("--seed", gb.seed, "Base seed")->capture_default_str();
  gen_bench->add_option("--threads", gb.threads, "Worker threads (0 = all cores)");

  GenTrainArgs gt;
  auto* gen_train = app.add_subcommand("gen-train", "Generate OpenMolIns training pairs at a scale");
  gen_train->add_option("--corpus", gt.corpus, "Source molecules")->required();
  gen_train->add_option("--exclude", gt.exclude, "Held-out test corpus; no molecule of it is used")->required();
  gen_train->add_option("--out", gt.out, "Output directory")->required();
  gen_train->add_option("--scale", gt.scale, "light, small, medium, large or xlarge")->capture_default_str();
  gen_train->add_option("--seed", gt.seed, "Base seed")->capture_default_str();
  gen_train->add_option("--threads", gt.threads, "Worker threads (0 = all cores)");

  RunArgs ra;
  auto* run = app.add_subcommand("run", "Answer benchmark prompts with a chat-completions endpoint");
  run->add_option("--bench", ra.bench, "Benchmark directory or instance file")->required();
  run->add_option("--out", ra.out, "Model output file (JSONL)");
  run->add_option("--cache", ra.cache, "Completion cache (default <out>.cache.jsonl)");
  run->add_option("--base-url", ra.endpoint.base_url, "Endpoint base URL, e.g. https://host/v1");
  run->add_option("--model", ra.endpoint.model_name, "Model name sent to the endpoint");
  run->add_option("--token-env", ra.endpoint.auth_token_env_name, "Environment variable holding the token")
      ->capture_default_str();
  run->add_option("--timeout", ra.endpoint.timeout_seconds, "Per-request timeout in seconds")->capture_default_str();
  run->add_option("--max-retries", ra.endpoint.max_retries, "Retries per request")->capture_default_str();
  run->add_option("--concurrency", ra.endpoint.max_concurrency, "Requests in flight")->capture_default_str();
  run->add_option("--temperature", ra.params.temperature)->capture_default_str();
  run->add_option("--top-p", ra.params.top_p)->capture_default_str();
  run->add_option("--max-tokens", ra.params.max_new_tokens)->capture_default_str();
  run->add_option("--num-beams", ra.params.num_beams)->capture_default_str();
  run->add_flag("--dry-run", ra.dry_run, "Print the first three prompts and stop");

  EvalArgs ea;
  auto* eval = app.add_subcommand("eval", "Score model outputs against a benchmark");
  eval->add_option("--bench", ea.bench, "Benchmark directory or instance file")->required();
  eval->add_option("--outputs", ea.outputs, "Model output file (JSONL)")->required();
  eval->add_option("--reference", ea.reference, "Reference corpus for novelty");
  eval->add_option("--reference-cache", ea.reference_cache, "Fingerprint index cache for the reference corpus");
  eval->add_option("--model", ea.model, "Model name for the report (default: output file stem)");
  eval->add_option("--out", ea.out, "Output directory")->required();
  eval->add_option("--threads", ea.threads, "Worker threads (0 = all cores)");

  ReportArgs rp;
  auto* report = app.add_subcommand("report", "Rank evaluation reports");
  report->add_option("reports", rp.reports, "report.json files")->required();
  report->add_option("--out", rp.out, "Also write the table to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfig;
  }

  try {
    if (*gen_bench) return cmd_gen_bench(gb);
    if (*gen_train) return cmd_gen_train(gt);
    if (*run) return cmd_run(ra);
    if (*eval) return cmd_eval(ea);
    if (*report) return cmd_report(rp);
  } catch (const KeyMismatch& e) {
    note(std::string("key mismatch: ") + e.what());
    return kMismatch;
  } catch (const InstanceCorrupt& e) {
    note(std::string("corrupt instance: ") + e.what());
    return kMismatch;
  } catch (const std::exception& e) {
    note(std::string("error: ") + e.what());
    return kConfig;
  }
  return kConfig;
}
