// SPDX-License-Identifier: Apache-2.0
#include "molbench/taskgen/tables.h"

#include <sstream>

#include "molbench/chem/element.h"
#include "molbench/util/data.h"
#include "molbench/util/hash.h"

namespace molbench {

namespace {

CountRange read_range(std::istringstream& in, int line) {
  CountRange r;
  if (!(in >> r.min >> r.max) || r.min > r.max || r.min < 0)
    throw SamplingTableError("sampling table line " + std::to_string(line) + ": bad range");
  return r;
}

}  // namespace

const SamplingTables& SamplingTables::builtin() {
  static const SamplingTables t = parse(data::embedded("sampling.txt"));
  return t;
}

SamplingTables SamplingTables::parse(std::string_view text) {
  SamplingTables t;
  t.checksum = sha256_hex(text);
  std::istringstream all{std::string(text)};
  std::string line;
  int no = 0;
  int mandatory = 0;
  while (std::getline(all, line)) {
    ++no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream in(line);
    std::string kind;
    if (!(in >> kind)) continue;
    auto fail = [&](const std::string& why) {
      throw SamplingTableError("sampling table line " + std::to_string(no) + ": " + why);
    };
    if (kind == "atom") {
      std::string sym, weight;
      in >> sym >> weight;
      const Element* e = element_by_symbol(sym);
      if (!e || !e->supported) fail("unsupported element " + sym);
      AtomRow row{e->z, 0, weight == "mandatory", {}};
      if (!row.mandatory) {
        try {
          row.weight = std::stoi(weight);
        } catch (const std::exception&) {
          fail("bad weight " + weight);
        }
        if (row.weight <= 0) fail("weight must be positive");
      }
      mandatory += row.mandatory;
      row.range = read_range(in, no);
      t.atoms.push_back(row);
    } else if (kind == "bond") {
      std::string name;
      BondRow row{};
      if (!(in >> name >> row.weight) || !parse_bond_category(name, row.category) || row.weight <= 0)
        fail("bad bond row");
      row.range = read_range(in, no);
      t.bonds.push_back(row);
    } else if (kind == "types") {
      std::string which;
      in >> which;
      const CountRange r = read_range(in, no);
      if (which == "atom") t.atom_types = r;
      else if (which == "bond") t.bond_types = r;
      else if (which == "group") t.group_types = r;
      else fail("unknown types kind " + which);
    } else if (kind == "groupcount") {
      t.group_count = read_range(in, no);
    } else {
      fail("unknown directive " + kind);
    }
  }
  if (mandatory != 1) throw SamplingTableError("sampling table needs exactly one mandatory element");
  if (t.bonds.empty()) throw SamplingTableError("sampling table has no bond rows");
  return t;
}

const SamplingTables::AtomRow* SamplingTables::atom(int z) const {
  for (const auto& r : atoms)
    if (r.z == z) return &r;
  return nullptr;
}

const SamplingTables::BondRow* SamplingTables::bond(BondCategory c) const {
  for (const auto& r : bonds)
    if (r.category == c) return &r;
  return nullptr;
}

}  // namespace molbench
