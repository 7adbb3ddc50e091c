// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>
#include <vector>

namespace molbench {

// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

// Independent per-item seed: hashes (base, stream, index).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream, std::uint64_t index);

// mt19937_64 with distributions written out here, so a seed yields the same
// draws on every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next() { return eng_(); }
  // Uniform integer in [lo, hi] by rejection; no modulo bias.
  long uniform_int(long lo, long hi);
  // Uniform double in [0, 1) with 53 random bits.
  double uniform01();
  bool coin() { return (next() >> 63) != 0; }
  // Index drawn with probability weight[i] / sum. Weights must be >= 0 with
  // a positive sum.
  std::size_t weighted_index(std::span<const int> weights);
  // k distinct indices drawn one after another, each with probability
  // proportional to its weight among those not yet drawn.
  std::vector<std::size_t> weighted_sample(std::span<const int> weights, std::size_t k);

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[uniform_int(0, static_cast<long>(i) - 1)]);
  }
  template <class T>
  const T& pick(const std::vector<T>& v) {
    return v[uniform_int(0, static_cast<long>(v.size()) - 1)];
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace molbench
