// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace molbench {

// Base for every failure that makes a SMILES string "invalid".
class ChemError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SyntaxError : public ChemError {
 public:
  SyntaxError(const std::string& what, std::size_t pos)
      : ChemError(what + " at position " + std::to_string(pos)), pos_(pos) {}
  std::size_t position() const noexcept { return pos_; }

 private:
  std::size_t pos_;
};

class ValenceError : public ChemError {
 public:
  using ChemError::ChemError;
};

class ElementError : public ChemError {
 public:
  using ChemError::ChemError;
};

class KekulizationError : public ChemError {
 public:
  using ChemError::ChemError;
};

}  // namespace molbench
