// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "molbench/chem/molecule.h"

namespace molbench {

class PatternError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Compiled query in the linear pattern notation described in data/README.md
// (a SMARTS subset: atom primitives, logical operators, bond primitives,
// branches, ring closures and recursive $(...) environments).
class Pattern {
 public:
  // Throws PatternError.
  static Pattern parse(std::string_view text);

  Pattern();
  ~Pattern();
  Pattern(const Pattern&);
  Pattern& operator=(const Pattern&);
  Pattern(Pattern&&) noexcept;
  Pattern& operator=(Pattern&&) noexcept;

  const std::string& text() const;
  int num_atoms() const;
  // Atom-class number written after ':' in a bracket atom, 0 when absent.
  int map_number(int pattern_atom) const;
  // True when every pattern atom is reachable from the first through bonds.
  bool connected() const;

  struct Impl;
  const Impl& impl() const { return *impl_; }

 private:
  std::shared_ptr<const Impl> impl_;
};

struct MatchOptions {
  // Drop embeddings whose matched atom set repeats an earlier one.
  bool uniquify = true;
  // Stop after this many results; 0 = no limit.
  std::size_t max_matches = 0;
};

// Each result maps pattern atom i to molecule atom result[i].
std::vector<std::vector<int>> find_matches(const Pattern& p, const Molecule& mol,
                                           const MatchOptions& opt = {});
bool has_match(const Pattern& p, const Molecule& mol);
// True when some embedding maps the pattern's first atom onto `atom`.
bool matches_at(const Pattern& p, const Molecule& mol, int atom);

// Reuses per-molecule precomputation (atom properties, recursive pattern
// results) across many queries on the same molecule. Not thread-safe; use one
// per thread.
class Matcher {
 public:
  explicit Matcher(const Molecule& mol);
  ~Matcher();
  Matcher(const Matcher&) = delete;
  Matcher& operator=(const Matcher&) = delete;

  const Molecule& molecule() const;
  std::vector<std::vector<int>> find(const Pattern& p, const MatchOptions& opt = {});
  bool any(const Pattern& p);
  bool at(const Pattern& p, int atom);

  struct State;

 private:
  std::unique_ptr<State> state_;
};

}  // namespace molbench
