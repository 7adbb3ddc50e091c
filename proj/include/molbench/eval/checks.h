// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "molbench/chem/molecule.h"
#include "molbench/taskgen/requirement.h"

namespace molbench {

// Add: count(target) rises by exactly one. Del: count(group) falls by exactly
// one. Sub: source falls by one and target rises by one. Other requirement
// kinds fail.
bool check_moledit(const Molecule& original, const Molecule& generated, const Requirement& req);

// Strict change in the requested direction; equal values fail.
bool check_molopt(const Molecule& original, const Molecule& generated, const OptimizeProperty& req);

// Every listed count must match exactly; unlisted features are free.
bool check_molcustom(const Molecule& generated, const Requirement& req);

// Dispatch on the subtask. `original` is required for MolEdit and MolOpt.
bool check_requirement(Subtask s, const Molecule* original, const Molecule& generated, const Requirement& req);

// The molecule a checker scores: the largest fragment of the parsed output.
Molecule scored_molecule(const Molecule& parsed);

}  // namespace molbench
