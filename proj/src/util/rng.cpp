// SPDX-License-Identifier: Apache-2.0
#include "molbench/util/rng.h"

#include <numeric>
#include <stdexcept>

namespace molbench {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream, std::uint64_t index) {
  return mix64(mix64(mix64(base) ^ stream) ^ index);
}

long Rng::uniform_int(long lo, long hi) {
  if (hi < lo) throw std::invalid_argument("uniform_int: empty range");
  const std::uint64_t span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo);
  if (span == ~std::uint64_t{0}) return static_cast<long>(next());
  const std::uint64_t range = span + 1;
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % range + 1) % range;
  std::uint64_t x;
  do x = next();
  while (x > limit);
  return lo + static_cast<long>(x % range);
}

double Rng::uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::size_t Rng::weighted_index(std::span<const int> weights) {
  long total = 0;
  for (int w : weights) {
    if (w < 0) throw std::invalid_argument("weighted_index: negative weight");
    total += w;
  }
  if (total <= 0) throw std::invalid_argument("weighted_index: zero total weight");
  long r = uniform_int(0, total - 1);
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (r < weights[i]) return i;
    r -= weights[i];
  }
  return weights.size() - 1;
}

std::vector<std::size_t> Rng::weighted_sample(std::span<const int> weights, std::size_t k) {
  std::vector<int> w(weights.begin(), weights.end());
  std::size_t available = 0;
  for (int x : w) available += x > 0;
  if (k > available) throw std::invalid_argument("weighted_sample: k exceeds items with positive weight");
  std::vector<std::size_t> out;
  out.reserve(k);
  while (out.size() < k) {
    const std::size_t i = weighted_index(w);
    out.push_back(i);
    w[i] = 0;
  }
  return out;
}

}  // namespace molbench
