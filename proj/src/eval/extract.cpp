// SPDX-License-Identifier: Apache-2.0
#include "molbench/eval/extract.h"

#include <cctype>
#include <vector>

#include "molbench/chem/smiles.h"

namespace molbench {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> tokens(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && is_space(s[i])) ++i;
    const std::size_t start = i;
    while (i < s.size() && !is_space(s[i])) ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

// The token itself plus versions with sentence punctuation and wrapping
// characters peeled off. A closing ")" or "]" is only removed once the
// leading wrapper is gone, since SMILES may end in either.
std::vector<std::string_view> variants(std::string_view tok) {
  static constexpr std::string_view kTrailing = ".,;:!?\"'`*";
  static constexpr std::string_view kLeading = "\"'`*(<[{";
  static constexpr std::string_view kClosing = ")>]}.,;:!?\"'`*";
  std::vector<std::string_view> out{tok};
  std::string_view t = tok;
  while (!t.empty() && kTrailing.find(t.back()) != std::string_view::npos) {
    t.remove_suffix(1);
    out.push_back(t);
  }
  bool unwrapped = false;
  while (!t.empty() && kLeading.find(t.front()) != std::string_view::npos) {
    t.remove_prefix(1);
    out.push_back(t);
    unwrapped = true;
  }
  if (unwrapped) {
    while (!t.empty() && kClosing.find(t.back()) != std::string_view::npos) {
      t.remove_suffix(1);
      out.push_back(t);
    }
  }
  return out;
}

struct Best {
  std::optional<std::string> smiles;
  void offer(std::string_view s) {
    if (s.empty()) return;
    if (smiles && s.size() <= smiles->size()) return;
    if (is_valid_smiles(s)) smiles = std::string(s);
  }
};

std::vector<std::string_view> spans(std::string_view raw) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while ((pos = raw.find("```", pos)) != std::string_view::npos) {
    const std::size_t end = raw.find("```", pos + 3);
    if (end == std::string_view::npos) break;
    std::string_view body = raw.substr(pos + 3, end - pos - 3);
    // Optional language tag on the opening line.
    if (const std::size_t nl = body.find('\n'); nl != std::string_view::npos) {
      const std::string_view tag = trim(body.substr(0, nl));
      if (!tag.empty() && tag.find(' ') == std::string_view::npos && !is_valid_smiles(tag)) body = body.substr(nl + 1);
    }
    out.push_back(body);
    pos = end + 3;
  }
  for (char q : {'"', '\'', '`'}) {
    std::size_t i = 0;
    while ((i = raw.find(q, i)) != std::string_view::npos) {
      if (q == '`' && raw.compare(i, 3, "```") == 0) {
        const std::size_t end = raw.find("```", i + 3);
        if (end == std::string_view::npos) break;
        i = end + 3;
        continue;
      }
      // An apostrophe inside a word ("don't") is not a quote.
      if (q == '\'' && i > 0 && std::isalpha(static_cast<unsigned char>(raw[i - 1]))) {
        ++i;
        continue;
      }
      const std::size_t end = raw.find(q, i + 1);
      if (end == std::string_view::npos) break;
      out.push_back(raw.substr(i + 1, end - i - 1));
      i = end + 1;
    }
  }
  return out;
}

}  // namespace

std::optional<std::string> extract_smiles(std::string_view raw) {
  Best best;
  for (std::string_view span : spans(raw)) {
    best.offer(trim(span));
    for (std::string_view tok : tokens(span))
      for (std::string_view v : variants(tok)) best.offer(v);
  }
  if (best.smiles) return best.smiles;
  for (std::string_view tok : tokens(raw))
    for (std::string_view v : variants(tok)) {
      if (v == "I") continue;
      best.offer(v);
    }
  return best.smiles;
}

}  // namespace molbench
