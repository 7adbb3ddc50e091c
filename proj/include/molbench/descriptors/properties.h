// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "molbench/chem/molecule.h"
#include "molbench/patterns/smarts.h"

namespace molbench {

class TableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Wildman-Crippen atom typing. Rules are tried in file order on the
// hydrogen-expanded graph; the first whose leading atom maps onto an atom
// assigns its type. Atoms no rule covers fall to a final zero-valued default.
class ContributionTable {
 public:
  struct Rule {
    std::string type;
    Pattern pattern;
    double logp = 0;
    double mr = 0;
  };

  static const ContributionTable& builtin();
  static ContributionTable parse(std::string_view text, std::string source_tag);

  const std::vector<Rule>& rules() const { return rules_; }
  const std::string& source_tag() const { return source_; }
  const std::string& checksum() const { return checksum_; }

 private:
  std::vector<Rule> rules_;
  std::string source_;
  std::string checksum_;
};

struct CrippenAtom {
  std::string type;  // "Default" when no rule matched
  double logp = 0;
  double mr = 0;
};

// One entry per atom of the hydrogen-expanded molecule: the input atoms come
// first in their original order, then the added hydrogens.
std::vector<CrippenAtom> crippen_contributions(const Molecule& mol,
                                               const ContributionTable& table = ContributionTable::builtin());
double logp(const Molecule& mol);
double mr(const Molecule& mol);

// Topological polar surface area over N and O atoms.
double tpsa(const Molecule& mol);
// Average molecular weight including carried hydrogens.
double molecular_weight(const Molecule& mol);

struct QedDesirability {
  double a, b, c, d, e, f, dmax, weight;
  double operator()(double x) const;
};

struct QedParameters {
  static constexpr std::array<std::string_view, 8> kNames = {"MW", "ALOGP", "HBA", "HBD",
                                                             "PSA", "ROTB", "AROM", "ALERTS"};
  std::array<QedDesirability, 8> curves{};
  Pattern donor;
  Pattern rotatable;
  Pattern aromatic_delete;
  std::vector<Pattern> acceptors;
  std::vector<Pattern> alerts;
  std::string checksum;

  static const QedParameters& builtin();
  static QedParameters parse(std::string_view text);
};

struct QedProperties {
  double mw = 0, alogp = 0;
  int hba = 0, hbd = 0;
  double psa = 0;
  int rotb = 0, arom = 0, alerts = 0;

  std::array<double, 8> values() const {
    return {mw, alogp, double(hba), double(hbd), psa, double(rotb), double(arom), double(alerts)};
  }
};

QedProperties qed_properties(const Molecule& mol, const QedParameters& p = QedParameters::builtin());
// Weighted geometric mean of the eight desirabilities, each clamped into
// (0, 1].
double qed(const Molecule& mol, const QedParameters& p = QedParameters::builtin());
double qed_from_properties(const QedProperties& props, const QedParameters& p = QedParameters::builtin());

// SHA-256 of each shipped data table, keyed by file name.
std::map<std::string, std::string> table_checksums();

}  // namespace molbench
