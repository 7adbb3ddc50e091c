// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

namespace molbench {

// Static data for one element. Only the supported vocabulary (hydrogen plus
// the seventeen countable elements) carries valences and masses; every other
// atomic number is known by symbol alone so pattern files can name it.
struct Element {
  std::uint8_t z = 0;
  std::string_view symbol;
  std::string_view name;  // lower-case English name, used in prompts
  std::span<const std::uint8_t> valences;
  double mass = 0.0;  // standard atomic weight
  bool supported = false;
  bool organic_subset = false;  // may be written without brackets in SMILES
  bool aromatic_symbol = false;  // has a lower-case SMILES spelling
};

inline constexpr int kMaxAtomicNumber = 118;

// Lookup by atomic number; z outside 1..118 returns nullptr.
const Element* element(int z);

// Lookup by case-sensitive symbol ("Cl", "Se"); nullptr when unknown.
const Element* element_by_symbol(std::string_view symbol);

// The seventeen heavy elements a benchmark may count, in table order.
std::span<const std::uint8_t> countable_elements();

// Allowed valences for an atom of element z carrying the given formal
// charge. Charged atoms use the valences of their isoelectronic neutral
// neighbour (N+ behaves like C, O- like F). Empty when no allowed state
// exists (e.g. F+ with no supported neighbour).
std::span<const std::uint8_t> charged_valences(int z, int charge);

// Number of valence electrons of the neutral element, for main-group
// elements in periods 1-6. Returns -1 for transition metals.
int valence_electrons(int z);

// Pauling electronegativity; 0 when unknown.
double electronegativity(int z);

}  // namespace molbench
