// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "molbench/chem/molecule.h"

namespace molbench {

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class EmptyReference : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class CacheError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kDefaultRadius = 2;
inline constexpr int kDefaultBits = 2048;

struct Fingerprint {
  int radius = kDefaultRadius;
  int nbits = kDefaultBits;
  std::vector<std::uint64_t> words;  // bit i lives in words[i / 64]

  bool test(int bit) const { return words[bit >> 6] >> (bit & 63) & 1u; }
  void set(int bit) { words[bit >> 6] |= std::uint64_t{1} << (bit & 63); }
  int popcount() const;
  std::vector<int> on_bits() const;
  // Hex string, lowest word first; used for golden fixtures.
  std::string hex() const;
  bool operator==(const Fingerprint&) const = default;
};

// Circular (Morgan-style) fingerprint over heavy atoms. Radius-0 identifiers
// hash (element, heavy degree, hydrogens, charge, ring membership,
// aromaticity); each further iteration hashes an atom's identifier with its
// neighbours' (bond order, identifier) pairs in sorted order. Identifiers are
// 64-bit FNV-1a, xor-folded to 32 bits and reduced modulo nbits.
Fingerprint morgan_fingerprint(const Molecule& mol, int radius = kDefaultRadius, int nbits = kDefaultBits);

// |a & b| / |a | b|; 0 when both are empty. Throws DimensionMismatch.
double tanimoto(const Fingerprint& a, const Fingerprint& b);

// Packed reference set with precomputed popcounts.
class ReferenceIndex {
 public:
  ReferenceIndex(int radius, int nbits) : radius_(radius), nbits_(nbits), words_per_fp_((nbits + 63) / 64) {}

  void add(const Fingerprint& fp);
  std::size_t size() const { return popcounts_.size(); }
  int radius() const { return radius_; }
  int nbits() const { return nbits_; }
  const std::string& corpus_checksum() const { return checksum_; }
  void set_corpus_checksum(std::string c) { checksum_ = std::move(c); }
  // Number of corpus lines skipped as unparseable during build().
  std::size_t skipped() const { return skipped_; }

  Fingerprint at(std::size_t i) const;
  std::span<const std::uint64_t> words(std::size_t i) const {
    return {packed_.data() + i * words_per_fp_, static_cast<std::size_t>(words_per_fp_)};
  }
  int popcount(std::size_t i) const { return popcounts_[i]; }

  // One SMILES per line (first whitespace-separated token); invalid lines are
  // skipped and counted.
  static ReferenceIndex build(const std::filesystem::path& corpus, int radius = kDefaultRadius,
                              int nbits = kDefaultBits);
  // Binary cache: magic "MBREFIDX", u32 version, u32 radius, u32 nbits,
  // u64 count, 64-byte corpus checksum, u64 skipped, then packed words.
  void save(const std::filesystem::path& path) const;
  static ReferenceIndex load(const std::filesystem::path& path);
  // Loads the cache when its checksum and parameters match the corpus,
  // otherwise rebuilds and rewrites it.
  static ReferenceIndex load_or_build(const std::filesystem::path& corpus, const std::filesystem::path& cache,
                                      int radius = kDefaultRadius, int nbits = kDefaultBits);

 private:
  int radius_;
  int nbits_;
  int words_per_fp_;
  std::vector<std::uint64_t> packed_;
  std::vector<int> popcounts_;
  std::string checksum_;
  std::size_t skipped_ = 0;
};

// 1 - mean Tanimoto similarity to every reference fingerprint, summed in
// reference order. Throws EmptyReference and DimensionMismatch.
double novelty(const Fingerprint& fp, const ReferenceIndex& ref);
// Same values as calling novelty() per query, bit for bit; queries are
// spread over `threads` workers (0 = hardware concurrency).
std::vector<double> novelty_batch(std::span<const Fingerprint> queries, const ReferenceIndex& ref,
                                  unsigned threads = 0);

}  // namespace molbench
