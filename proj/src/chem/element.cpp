// SPDX-License-Identifier: Apache-2.0
#include "molbench/chem/element.h"

#include <array>
#include <string_view>

namespace molbench {
namespace {

constexpr std::array<std::string_view, kMaxAtomicNumber + 1> kSymbols = {
    "",   "H",  "He", "Li", "Be", "B",  "C",  "N",  "O",  "F",  "Ne", "Na", "Mg", "Al", "Si",
    "P",  "S",  "Cl", "Ar", "K",  "Ca", "Sc", "Ti", "V",  "Cr", "Mn", "Fe", "Co", "Ni", "Cu",
    "Zn", "Ga", "Ge", "As", "Se", "Br", "Kr", "Rb", "Sr", "Y",  "Zr", "Nb", "Mo", "Tc", "Ru",
    "Rh", "Pd", "Ag", "Cd", "In", "Sn", "Sb", "Te", "I",  "Xe", "Cs", "Ba", "La", "Ce", "Pr",
    "Nd", "Pm", "Sm", "Eu", "Gd", "Tb", "Dy", "Ho", "Er", "Tm", "Yb", "Lu", "Hf", "Ta", "W",
    "Re", "Os", "Ir", "Pt", "Au", "Hg", "Tl", "Pb", "Bi", "Po", "At", "Rn", "Fr", "Ra", "Ac",
    "Th", "Pa", "U",  "Np", "Pu", "Am", "Cm", "Bk", "Cf", "Es", "Fm", "Md", "No", "Lr", "Rf",
    "Db", "Sg", "Bh", "Hs", "Mt", "Ds", "Rg", "Cn", "Nh", "Fl", "Mc", "Lv", "Ts", "Og"};

constexpr std::uint8_t kV1[] = {1};
constexpr std::uint8_t kV2[] = {2};
constexpr std::uint8_t kV3[] = {3};
constexpr std::uint8_t kV4[] = {4};
constexpr std::uint8_t kV0[] = {0};
constexpr std::uint8_t kV35[] = {3, 5};
constexpr std::uint8_t kV246[] = {2, 4, 6};

struct Supported {
  std::uint8_t z;
  std::string_view name;
  std::span<const std::uint8_t> valences;
  double mass;
  bool organic;
  bool aromatic;
};

// Masses are the RDKit average atomic weights, so molecular weight tracks
// the QED reference implementation.
constexpr Supported kSupported[] = {
    {1, "hydrogen", kV1, 1.008, false, false},
    {5, "boron", kV3, 10.812, true, true},
    {6, "carbon", kV4, 12.011, true, true},
    {7, "nitrogen", kV35, 14.007, true, true},
    {8, "oxygen", kV2, 15.999, true, true},
    {9, "fluorine", kV1, 18.998, true, false},
    {14, "silicon", kV4, 28.086, false, true},
    {15, "phosphorus", kV35, 30.974, true, true},
    {16, "sulfur", kV246, 32.067, true, true},
    {17, "chlorine", kV1, 35.453, true, false},
    {33, "arsenic", kV35, 74.922, false, true},
    {34, "selenium", kV246, 78.96, false, true},
    {35, "bromine", kV1, 79.904, true, false},
    {51, "antimony", kV35, 121.76, false, true},
    {52, "tellurium", kV246, 127.6, false, true},
    {53, "iodine", kV1, 126.904, true, false},
    {83, "bismuth", kV35, 208.98, false, true},
    {84, "polonium", kV246, 209.0, false, true},
};

constexpr std::uint8_t kCountable[] = {6, 8, 7, 16, 9, 17, 35, 53, 15, 5, 14, 34, 52, 33, 51, 83, 84};

struct Table {
  std::array<Element, kMaxAtomicNumber + 1> rows{};
  Table() {
    for (int z = 1; z <= kMaxAtomicNumber; ++z) {
      rows[z].z = static_cast<std::uint8_t>(z);
      rows[z].symbol = kSymbols[z];
    }
    for (const auto& s : kSupported) {
      Element& e = rows[s.z];
      e.name = s.name;
      e.valences = s.valences;
      e.mass = s.mass;
      e.supported = true;
      e.organic_subset = s.organic;
      e.aromatic_symbol = s.aromatic;
    }
  }
};

const Table& table() {
  static const Table t;
  return t;
}

}  // namespace

const Element* element(int z) {
  if (z < 1 || z > kMaxAtomicNumber) return nullptr;
  return &table().rows[z];
}

const Element* element_by_symbol(std::string_view symbol) {
  for (int z = 1; z <= kMaxAtomicNumber; ++z)
    if (kSymbols[z] == symbol) return &table().rows[z];
  return nullptr;
}

std::span<const std::uint8_t> countable_elements() { return kCountable; }

std::span<const std::uint8_t> charged_valences(int z, int charge) {
  const Element* e = element(z);
  if (e == nullptr) return {};
  if (charge == 0) return e->valences;
  const int iso = z - charge;
  // A bare proton and noble-gas configurations (F-, Cl-, O2- ...) take no
  // bonds.
  switch (iso) {
    case 0: case 2: case 10: case 18: case 36: case 54: case 86:
      return kV0;
    default:
      break;
  }
  // Keep within the same period so [S+] maps to P, not across a row.
  auto period = [](int n) {
    if (n <= 2) return 1;
    if (n <= 10) return 2;
    if (n <= 18) return 3;
    if (n <= 36) return 4;
    if (n <= 54) return 5;
    return 6;
  };
  if (iso >= 1 && period(iso) == period(z)) {
    const Element* ie = element(iso);
    if (ie != nullptr && !ie->valences.empty()) return ie->valences;
    // Isoelectronic with an unsupported group 13/14 element: use the main
    // group of the column.
    const int ve = valence_electrons(iso);
    if (ve == 3) return kV3;
    if (ve == 4) return kV4;
    if (ve == 5) return kV35;
    if (ve == 6) return kV246;
    if (ve == 7) return kV1;
    if (ve == 2) return kV2;
    if (ve == 1) return kV1;
  }
  return {};
}

int valence_electrons(int z) {
  if (z == 1) return 1;
  if (z == 2) return 2;
  if (z <= 10) return z - 2;
  if (z <= 18) return z - 10;
  if (z <= 36) {
    if (z <= 20) return z - 18;
    if (z >= 31) return z - 28;
    return -1;
  }
  if (z <= 54) {
    if (z <= 38) return z - 36;
    if (z >= 49) return z - 46;
    return -1;
  }
  if (z <= 86) {
    if (z <= 56) return z - 54;
    if (z >= 81) return z - 78;
    return -1;
  }
  return -1;
}

double electronegativity(int z) {
  switch (z) {
    case 1: return 2.20;
    case 5: return 2.04;
    case 6: return 2.55;
    case 7: return 3.04;
    case 8: return 3.44;
    case 9: return 3.98;
    case 14: return 1.90;
    case 15: return 2.19;
    case 16: return 2.58;
    case 17: return 3.16;
    case 33: return 2.18;
    case 34: return 2.55;
    case 35: return 2.96;
    case 51: return 2.05;
    case 52: return 2.10;
    case 53: return 2.66;
    case 83: return 2.02;
    case 84: return 2.00;
    default: return 0.0;
  }
}

}  // namespace molbench
