// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>

#include "molbench/chem/molecule.h"

namespace molbench {

// Parses one SMILES string. Leading and trailing whitespace is ignored.
// Throws SyntaxError, ElementError, ValenceError or KekulizationError (all
// derived from ChemError).
Molecule parse_smiles(std::string_view text);

// Non-throwing variant for validity checks.
bool is_valid_smiles(std::string_view text) noexcept;

// Canonical SMILES: the same graph always yields the same string. Aromatic
// atoms are written in lower case; stereo marks are not written.
std::string write_smiles(const Molecule& mol);

// Convenience for parse followed by write.
std::string canonical_smiles(std::string_view text);

}  // namespace molbench
