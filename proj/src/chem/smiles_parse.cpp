// SPDX-License-Identifier: Apache-2.0
#include <cctype>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "molbench/chem/errors.h"
#include "molbench/chem/smiles.h"

namespace molbench {

namespace {

struct PendingBond {
  bool present = false;
  BondOrder order = BondOrder::Single;
  BondStereo stereo = BondStereo::None;
  bool explicit_symbol = false;
};

struct RingOpen {
  int atom;
  PendingBond bond;
  std::size_t pos;
};

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  MolBuilder run() {
    if (s_.empty()) throw SyntaxError("empty SMILES", 0);
    int prev = -1;
    PendingBond bond;
    std::vector<int> branch_stack;
    bool expect_atom = true;  // right after start, '.', '(' or a bond symbol
    while (i_ < s_.size()) {
      const char c = s_[i_];
      if (c == '(') {
        if (prev < 0 || bond.present) throw SyntaxError("branch without a preceding atom", i_);
        branch_stack.push_back(prev);
        ++i_;
        expect_atom = true;
        continue;
      }
      if (c == ')') {
        if (branch_stack.empty()) throw SyntaxError("unmatched ')'", i_);
        if (expect_atom || bond.present) throw SyntaxError("empty branch or dangling bond", i_);
        prev = branch_stack.back();
        branch_stack.pop_back();
        ++i_;
        continue;
      }
      if (c == '.') {
        if (prev < 0 || bond.present || expect_atom) throw SyntaxError("misplaced '.'", i_);
        if (!branch_stack.empty()) throw SyntaxError("'.' inside a branch", i_);
        prev = -1;
        ++i_;
        expect_atom = true;
        continue;
      }
      if (is_bond_char(c)) {
        if (prev < 0) throw SyntaxError("bond without a preceding atom", i_);
        if (bond.present) throw SyntaxError("two consecutive bond symbols", i_);
        bond = read_bond();
        expect_atom = false;
        continue;
      }
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '%') {
        if (prev < 0) throw SyntaxError("ring-closure digit without an atom", i_);
        const std::size_t at = i_;
        ring_closure(prev, read_ring_number(), bond, at);
        bond = PendingBond{};
        continue;
      }
      const std::size_t at = i_;
      const int atom = read_atom();
      if (prev >= 0) connect(prev, atom, bond, at);
      bond = PendingBond{};
      prev = atom;
      expect_atom = false;
    }
    if (!branch_stack.empty()) throw SyntaxError("unmatched '('", s_.size());
    if (bond.present) throw SyntaxError("trailing bond symbol", s_.size());
    if (expect_atom) throw SyntaxError("SMILES ends without an atom", s_.size());
    if (!rings_.empty())
      throw SyntaxError("unclosed ring bond " + std::to_string(rings_.begin()->first), rings_.begin()->second.pos);
    fold_hydrogens();
    return std::move(b_);
  }

 private:
  static bool is_bond_char(char c) {
    return c == '-' || c == '=' || c == '#' || c == ':' || c == '/' || c == '\\' || c == '$';
  }

  PendingBond read_bond() {
    PendingBond b;
    b.present = true;
    b.explicit_symbol = true;
    switch (s_[i_]) {
      case '-': b.order = BondOrder::Single; break;
      case '=': b.order = BondOrder::Double; break;
      case '#': b.order = BondOrder::Triple; break;
      case ':': b.order = BondOrder::Aromatic; break;
      case '/': b.order = BondOrder::Single; b.stereo = BondStereo::Up; break;
      case '\\': b.order = BondOrder::Single; b.stereo = BondStereo::Down; break;
      default: throw SyntaxError("quadruple bonds are not supported", i_);
    }
    ++i_;
    return b;
  }

  int read_ring_number() {
    if (s_[i_] != '%') return s_[i_++] - '0';
    ++i_;
    if (i_ < s_.size() && s_[i_] == '(') {
      ++i_;
      int v = 0, digits = 0;
      while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) {
        v = v * 10 + (s_[i_++] - '0');
        ++digits;
      }
      if (digits == 0 || i_ >= s_.size() || s_[i_] != ')') throw SyntaxError("malformed %(n) ring number", i_);
      ++i_;
      return v;
    }
    if (i_ + 1 >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[i_])) ||
        !std::isdigit(static_cast<unsigned char>(s_[i_ + 1])))
      throw SyntaxError("'%' must be followed by two digits", i_);
    const int v = (s_[i_] - '0') * 10 + (s_[i_ + 1] - '0');
    i_ += 2;
    return v;
  }

  BondOrder default_order(int a, int b) const {
    return (b_.atom(a).aromatic && b_.atom(b).aromatic) ? BondOrder::Aromatic : BondOrder::Single;
  }

  void connect(int a, int b, const PendingBond& bond, std::size_t pos) {
    const BondOrder order = bond.present ? bond.order : default_order(a, b);
    if (b_.bond_between(a, b) >= 0) throw SyntaxError("duplicate bond", pos);
    b_.add_bond(a, b, order, bond.stereo);
  }

  void ring_closure(int atom, int number, const PendingBond& bond, std::size_t pos) {
    auto it = rings_.find(number);
    if (it == rings_.end()) {
      rings_[number] = {atom, bond, pos};
      return;
    }
    const RingOpen open = it->second;
    rings_.erase(it);
    if (open.atom == atom) throw SyntaxError("ring bond joins an atom to itself", pos);
    PendingBond use = open.bond;
    if (bond.present) {
      if (use.present && use.order != bond.order) throw SyntaxError("conflicting ring-closure bond symbols", pos);
      if (!use.present || use.stereo == BondStereo::None) use = bond;
    }
    connect(open.atom, atom, use, pos);
  }

  // Longest element symbol at the cursor, bracket rules when `bracket`.
  int read_atom() {
    if (s_[i_] == '[') return read_bracket();
    const std::size_t at = i_;
    const char c = s_[i_];
    MolBuilder::AtomSpec spec;
    auto two = [&](char next) { return i_ + 1 < s_.size() && s_[i_ + 1] == next; };
    switch (c) {
      case 'B':
        if (two('r')) { spec.z = 35; ++i_; } else spec.z = 5;
        break;
      case 'C':
        if (two('l')) { spec.z = 17; ++i_; } else spec.z = 6;
        break;
      case 'N': spec.z = 7; break;
      case 'O': spec.z = 8; break;
      case 'P': spec.z = 15; break;
      case 'S': spec.z = 16; break;
      case 'F': spec.z = 9; break;
      case 'I': spec.z = 53; break;
      case 'b': spec.z = 5; spec.aromatic = true; break;
      case 'c': spec.z = 6; spec.aromatic = true; break;
      case 'n': spec.z = 7; spec.aromatic = true; break;
      case 'o': spec.z = 8; spec.aromatic = true; break;
      case 'p': spec.z = 15; spec.aromatic = true; break;
      case 's': spec.z = 16; spec.aromatic = true; break;
      case '*': throw ElementError("wildcard atoms are not supported");
      default:
        if (std::isalpha(static_cast<unsigned char>(c)))
          throw ElementError("element '" + std::string(1, c) + "' must be written in brackets or is unknown");
        throw SyntaxError(std::string("unexpected character '") + c + "'", at);
    }
    ++i_;
    return b_.add_atom(spec);
  }

  int read_bracket() {
    const std::size_t open = i_++;
    MolBuilder::AtomSpec spec;
    spec.hydrogens = 0;
    int isotope = 0;
    bool has_iso = false;
    while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) {
      isotope = isotope * 10 + (s_[i_++] - '0');
      has_iso = true;
      if (isotope > 999) throw SyntaxError("isotope too large", i_);
    }
    if (has_iso && isotope == 0) throw SyntaxError("isotope 0 is not allowed", i_);
    spec.isotope = isotope;
    if (i_ >= s_.size()) throw SyntaxError("unterminated bracket atom", open);
    read_bracket_symbol(spec);
    if (i_ < s_.size() && s_[i_] == '@') {
      ++i_;
      spec.chirality = Chirality::CounterClockwise;
      if (i_ < s_.size() && s_[i_] == '@') {
        ++i_;
        spec.chirality = Chirality::Clockwise;
      } else if (i_ + 1 < s_.size() && std::isupper(static_cast<unsigned char>(s_[i_])) &&
                 std::isupper(static_cast<unsigned char>(s_[i_ + 1]))) {
        // Extended classes (@TH1, @SP2, @OH12 ...) are accepted and dropped.
        i_ += 2;
        while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
        spec.chirality = Chirality::None;
      }
    }
    if (i_ < s_.size() && s_[i_] == 'H') {
      ++i_;
      int h = 1;
      if (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) h = s_[i_++] - '0';
      spec.hydrogens = h;
    }
    if (i_ < s_.size() && (s_[i_] == '+' || s_[i_] == '-')) {
      const char sign = s_[i_++];
      int mag = 1;
      if (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) {
        mag = 0;
        while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) mag = mag * 10 + (s_[i_++] - '0');
      } else {
        while (i_ < s_.size() && s_[i_] == sign) {
          ++mag;
          ++i_;
        }
      }
      if (mag > 8) throw SyntaxError("charge magnitude too large", i_);
      spec.charge = sign == '+' ? mag : -mag;
    }
    if (i_ < s_.size() && s_[i_] == ':') {
      ++i_;
      if (i_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[i_])))
        throw SyntaxError("atom class needs digits", i_);
      while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
    }
    if (i_ >= s_.size() || s_[i_] != ']') throw SyntaxError("unterminated bracket atom", open);
    ++i_;
    const int idx = b_.add_atom(spec);
    bracket_.resize(idx + 1, false);
    bracket_[idx] = true;
    return idx;
  }

  void read_bracket_symbol(MolBuilder::AtomSpec& spec) {
    const std::size_t at = i_;
    const char c = s_[i_];
    if (c == '*') throw ElementError("wildcard atoms are not supported");
    if (std::islower(static_cast<unsigned char>(c))) {
      // Aromatic spellings: two-letter first (se, te, as ...).
      for (int len = 2; len >= 1; --len) {
        if (i_ + len > s_.size()) continue;
        std::string sym(s_.substr(i_, len));
        if (len == 2 && !std::islower(static_cast<unsigned char>(sym[1]))) continue;
        sym[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(sym[0])));
        const Element* e = element_by_symbol(sym);
        if (e == nullptr) continue;
        if (!e->aromatic_symbol) throw ElementError("element " + sym + " has no aromatic form");
        spec.z = e->z;
        spec.aromatic = true;
        i_ += len;
        return;
      }
      throw ElementError("unknown aromatic symbol at position " + std::to_string(at));
    }
    if (!std::isupper(static_cast<unsigned char>(c))) throw SyntaxError("expected an element symbol", at);
    const Element* e = nullptr;
    if (i_ + 1 < s_.size() && std::islower(static_cast<unsigned char>(s_[i_ + 1]))) {
      e = element_by_symbol(s_.substr(i_, 2));
      if (e != nullptr) i_ += 2;
    }
    if (e == nullptr) {
      e = element_by_symbol(s_.substr(i_, 1));
      if (e == nullptr) throw ElementError("unknown element at position " + std::to_string(at));
      ++i_;
    }
    if (!e->supported) throw ElementError("unsupported element " + std::string(e->symbol));
    spec.z = e->z;
  }

  // Plain [H] atoms bonded once by a single bond become hydrogen counts of
  // their neighbour.
  void fold_hydrogens() {
    bracket_.resize(b_.num_atoms(), false);
    std::vector<int> drop;
    for (int a = 0; a < static_cast<int>(b_.num_atoms()); ++a) {
      const auto& s = b_.atom(a);
      if (s.z != 1 || s.isotope != 0 || s.charge != 0 || s.hydrogens.value_or(0) != 0) continue;
      int nbr = -1, count = 0, bond = -1;
      for (int i = 0; i < static_cast<int>(b_.num_bonds()); ++i) {
        const auto& bd = b_.bond(i);
        if (bd.a == a || bd.b == a) {
          ++count;
          nbr = bd.a == a ? bd.b : bd.a;
          bond = i;
        }
      }
      if (count != 1 || b_.atom(nbr).z == 1 || b_.bond(bond).order != BondOrder::Single) continue;
      if (bracket_[nbr]) b_.atom(nbr).hydrogens = b_.atom(nbr).hydrogens.value_or(0) + 1;
      drop.push_back(a);
    }
    if (!drop.empty()) b_.remove_atoms(drop);
  }

  std::string_view s_;
  std::size_t i_ = 0;
  MolBuilder b_;
  std::map<int, RingOpen> rings_;
  std::vector<bool> bracket_;
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

Molecule parse_smiles(std::string_view text) {
  const std::string_view t = trim(text);
  return Parser(t).run().build();
}

bool is_valid_smiles(std::string_view text) noexcept {
  try {
    parse_smiles(text);
    return true;
  } catch (...) {
    return false;
  }
}

std::string canonical_smiles(std::string_view text) { return write_smiles(parse_smiles(text)); }

}  // namespace molbench
