// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <array>
#include <cstdio>
#include <sstream>

#include "molbench/eval/evaluator.h"

namespace molbench {

namespace {

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

SubtaskResult result_from_json(const nlohmann::json& j) {
  SubtaskResult r;
  r.subtask = parse_subtask(j.at("subtask").get<std::string>());
  r.n = j.at("n").get<std::size_t>();
  r.passes = j.at("passes").get<std::size_t>();
  r.valid = j.at("valid").get<std::size_t>();
  r.sr = j.at("sr").get<double>();
  r.quality = j.at(uses_novelty(r.subtask) ? "mean_novelty" : "mean_similarity").get<double>();
  r.validity = j.at("validity").get<double>();
  r.wsr = j.at("wsr").get<double>();
  return r;
}

}  // namespace

bool uses_novelty(Subtask s) { return task_of(s) == Task::MolCustom; }

double weighted_success_rate(double sr, double quality) { return sr * quality; }

SubtaskResult score_subtask(std::span<const EvalRecord> records) {
  if (records.empty()) throw EmptyRecordSet("no records to score");
  SubtaskResult r;
  r.subtask = records.front().subtask;
  r.n = records.size();
  const bool novelty = uses_novelty(r.subtask);
  double sum = 0;
  for (const EvalRecord& rec : records) {
    if (rec.subtask != r.subtask) throw std::invalid_argument("records span more than one subtask");
    if (rec.pass) ++r.passes;
    if (!rec.valid) continue;
    ++r.valid;
    const std::optional<double>& q = novelty ? rec.novelty : rec.similarity;
    if (!q) throw std::invalid_argument("valid record " + rec.instance_id + " lacks its metric");
    sum += *q;
  }
  r.sr = static_cast<double>(r.passes) / static_cast<double>(r.n);
  r.validity = static_cast<double>(r.valid) / static_cast<double>(r.n);
  r.quality = r.valid == 0 ? 0.0 : sum / static_cast<double>(r.valid);
  r.wsr = weighted_success_rate(r.sr, r.quality);
  return r;
}

std::vector<SubtaskResult> score_all(std::span<const EvalRecord> records) {
  std::array<std::vector<EvalRecord>, kSubtasks.size()> groups;
  for (const EvalRecord& r : records) groups[subtask_index(r.subtask)].push_back(r);
  std::vector<SubtaskResult> out;
  for (std::size_t i = 0; i < kSubtasks.size(); ++i) {
    if (groups[i].empty()) throw EmptyRecordSet("no records for " + std::string(subtask_name(kSubtasks[i])));
    out.push_back(score_subtask(groups[i]));
  }
  return out;
}

Report aggregate(std::vector<SubtaskResult> results, std::string model, nlohmann::json provenance) {
  if (results.size() != kSubtasks.size())
    throw std::invalid_argument("aggregate needs exactly nine subtask results, got " + std::to_string(results.size()));
  std::array<int, kSubtasks.size()> seen{};
  for (const SubtaskResult& r : results)
    if (seen[subtask_index(r.subtask)]++ != 0)
      throw std::invalid_argument("subtask given twice: " + std::string(subtask_name(r.subtask)));
  std::sort(results.begin(), results.end(),
            [](const SubtaskResult& a, const SubtaskResult& b) { return subtask_index(a.subtask) < subtask_index(b.subtask); });
  Report rep;
  rep.model = std::move(model);
  rep.provenance = std::move(provenance);
  double sr = 0, wsr = 0;
  for (const SubtaskResult& r : results) {
    sr += r.sr;
    wsr += r.wsr;
  }
  rep.average_sr = sr / static_cast<double>(results.size());
  rep.average_wsr = wsr / static_cast<double>(results.size());
  rep.results = std::move(results);
  return rep;
}

nlohmann::json report_to_json(const Report& r) {
  nlohmann::json subs = nlohmann::json::array();
  for (const SubtaskResult& s : r.results) {
    nlohmann::json j{{"subtask", subtask_name(s.subtask)},
                     {"task", task_name(task_of(s.subtask))},
                     {"n", s.n},
                     {"passes", s.passes},
                     {"valid", s.valid},
                     {"sr", s.sr},
                     {"validity", s.validity},
                     {"wsr", s.wsr}};
    j[uses_novelty(s.subtask) ? "mean_novelty" : "mean_similarity"] = s.quality;
    subs.push_back(std::move(j));
  }
  return {{"model", r.model},
          {"subtasks", subs},
          {"average_sr", r.average_sr},
          {"average_wsr", r.average_wsr},
          {"provenance", r.provenance}};
}

Report report_from_json(const nlohmann::json& j) {
  std::vector<SubtaskResult> results;
  for (const auto& s : j.at("subtasks")) results.push_back(result_from_json(s));
  Report r = aggregate(std::move(results), j.value("model", std::string()),
                       j.value("provenance", nlohmann::json::object()));
  return r;
}

std::vector<std::string> format_percent_column(std::span<const double> fractions) {
  std::vector<std::string> two, three;
  for (double f : fractions) {
    two.push_back(fixed(f * 100.0, 2));
    three.push_back(fixed(f * 100.0, 3));
  }
  std::vector<std::string> out = two;
  for (std::size_t i = 0; i < fractions.size(); ++i)
    for (std::size_t j = 0; j < fractions.size(); ++j)
      if (i != j && two[i] == two[j] && three[i] != three[j]) {
        const std::string& t = three[i];
        out[i] = t.substr(0, t.size() - 1) + "(" + t.back() + ")";
        break;
      }
  return out;
}

std::string render_leaderboard_row(const Report& r) {
  std::ostringstream os;
  const std::string name = r.model.empty() ? "model" : r.model;
  for (Task t : {Task::MolEdit, Task::MolOpt, Task::MolCustom}) {
    std::string head = pad(std::string(task_name(t)), 24), cols = pad("", 24), row = pad(name, 24);
    for (const SubtaskResult& s : r.results) {
      if (task_of(s.subtask) != t) continue;
      head += pad(std::string(subtask_name(s.subtask)), 44);
      cols += pad("SR", 11) + pad(uses_novelty(s.subtask) ? "Novelty" : "Similarity", 11) + pad("WSR", 11) +
              pad("Validity", 11);
      row += pad(fixed(s.sr, 4), 11) + pad(fixed(s.quality, 4), 11) + pad(fixed(s.wsr, 4), 11) +
             pad(fixed(s.validity, 4), 11);
    }
    auto rstrip = [](std::string s) {
      while (!s.empty() && s.back() == ' ') s.pop_back();
      return s;
    };
    os << rstrip(head) << '\n' << rstrip(cols) << '\n' << rstrip(row) << '\n';
  }
  os << "Average SR " << fixed(r.average_sr, 4) << "  Average WSR " << fixed(r.average_wsr, 4) << '\n';
  return os.str();
}

std::string render_comparison(std::span<const Report> reports) {
  std::vector<const Report*> ranked;
  for (const Report& r : reports) ranked.push_back(&r);
  std::stable_sort(ranked.begin(), ranked.end(), [](const Report* a, const Report* b) {
    if (a->average_wsr != b->average_wsr) return a->average_wsr > b->average_wsr;
    return a->model < b->model;
  });
  std::vector<double> sr, wsr;
  std::size_t width = 5;
  for (const Report* r : ranked) {
    sr.push_back(r->average_sr);
    wsr.push_back(r->average_wsr);
    width = std::max(width, r->model.size());
  }
  const std::vector<std::string> sr_s = format_percent_column(sr), wsr_s = format_percent_column(wsr);
  std::ostringstream os;
  os << pad("Rank", 6) << pad("Model", width + 2) << pad("SR (%)", 12) << "WSR (%)\n";
  for (std::size_t i = 0; i < ranked.size(); ++i)
    os << pad(std::to_string(i + 1), 6) << pad(ranked[i]->model, width + 2) << pad(sr_s[i], 12) << wsr_s[i] << '\n';
  return os.str();
}

}  // namespace molbench
