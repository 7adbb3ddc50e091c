// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace molbench {

// Picks the molecule out of a model answer.
//  1. Candidates from fenced (```...```) and quoted ("...", '...', `...`)
//     spans: the whole trimmed span or any token inside it.
//  2. Without such a candidate, whitespace-delimited tokens of the whole
//     text, each also tried with surrounding punctuation removed. A lone "I"
//     is ignored here: it is far more often the English pronoun.
// Among the parseable candidates of the first non-empty stage the longest
// wins, then the earliest. Absent when nothing parses.
std::optional<std::string> extract_smiles(std::string_view raw);

}  // namespace molbench
