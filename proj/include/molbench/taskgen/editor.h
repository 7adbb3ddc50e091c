// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <variant>

#include "molbench/chem/molecule.h"
#include "molbench/taskgen/requirement.h"
#include "molbench/util/rng.h"

namespace molbench {

class NoAttachmentSite : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NoRemovableMatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Edit = std::variant<AddGroup, DelGroup, SubGroup>;

// Applies one group edit and returns the re-parsed canonical product, whose
// group counts move by exactly +1 (Add), -1 (Del) or -1/+1 (Sub).
//  Add: bonds one of the group's attachment fragments to a random heavy atom
//       that carries a hydrogen and matches the group's site pattern.
//  Del: removes the group's own atoms from a random occurrence; neighbours
//       get hydrogens for the lost bond orders. Removals that split the
//       molecule are not used.
//  Sub: a Del of the source followed by an Add of the target on an atom the
//       source was bonded to.
// Candidates are tried in random order until one gives the exact count
// change. Throws NoAttachmentSite or NoRemovableMatch when none does.
Molecule apply_edit(const Molecule& mol, const Edit& edit, Rng& rng);

}  // namespace molbench
