// SPDX-License-Identifier: Apache-2.0
#include "molbench/descriptors/fingerprint.h"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>
#include <thread>

#include "molbench/chem/smiles.h"
#include "molbench/util/fs.h"
#include "molbench/util/hash.h"

namespace molbench {

namespace {

constexpr char kMagic[8] = {'M', 'B', 'R', 'E', 'F', 'I', 'D', 'X'};
constexpr std::uint32_t kVersion = 1;

// Little-endian serialization so identifiers do not depend on the host.
class HashInput {
 public:
  void add(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) bytes_.push_back(static_cast<unsigned char>(v >> (8 * i)));
  }
  void add_int(std::int64_t v) { add(static_cast<std::uint64_t>(v)); }
  std::uint64_t digest() const { return fnv1a64(bytes_.data(), bytes_.size()); }
  void clear() { bytes_.clear(); }

 private:
  std::vector<unsigned char> bytes_;
};

int fold(std::uint64_t id, int nbits) {
  const auto folded = static_cast<std::uint32_t>(id ^ (id >> 32));
  return static_cast<int>(folded % static_cast<std::uint32_t>(nbits));
}

void check_compatible(int ra, int na, int rb, int nb) {
  if (ra != rb || na != nb)
    throw DimensionMismatch("fingerprint parameters differ: radius " + std::to_string(ra) + "/" +
                            std::to_string(rb) + ", bits " + std::to_string(na) + "/" + std::to_string(nb));
}

// Shared by the scalar and bulk paths so both round identically.
inline double ratio(int inter, int uni) { return uni == 0 ? 0.0 : static_cast<double>(inter) / uni; }

template <class T>
void put(std::string& out, T v) {
  char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  out.append(buf, sizeof(T));
}

template <class T>
T get(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw CacheError("truncated reference cache");
  return v;
}

}  // namespace

int Fingerprint::popcount() const {
  int n = 0;
  for (std::uint64_t w : words) n += std::popcount(w);
  return n;
}

std::vector<int> Fingerprint::on_bits() const {
  std::vector<int> out;
  for (int i = 0; i < nbits; ++i)
    if (test(i)) out.push_back(i);
  return out;
}

std::string Fingerprint::hex() const {
  static const char* digits = "0123456789abcdef";
  std::string s;
  for (std::uint64_t w : words)
    for (int i = 15; i >= 0; --i) s += digits[(w >> (4 * i)) & 15];
  return s;
}

Fingerprint morgan_fingerprint(const Molecule& mol, int radius, int nbits) {
  if (nbits <= 0 || radius < 0) throw std::invalid_argument("bad fingerprint parameters");
  Fingerprint fp;
  fp.radius = radius;
  fp.nbits = nbits;
  fp.words.assign((nbits + 63) / 64, 0);
  const int n = static_cast<int>(mol.num_atoms());
  std::vector<std::uint64_t> id(n), next(n);
  HashInput h;
  for (int a = 0; a < n; ++a) {
    const Atom& at = mol.atom(a);
    if (at.z == 1) continue;
    h.clear();
    h.add_int(at.z);
    h.add_int(mol.heavy_degree(a));
    h.add_int(mol.total_h(a));
    h.add_int(at.formal_charge);
    h.add_int(mol.atom_in_ring(a) ? 1 : 0);
    h.add_int(at.aromatic ? 1 : 0);
    id[a] = h.digest();
    fp.set(fold(id[a], nbits));
  }
  std::vector<std::pair<int, std::uint64_t>> env;
  for (int r = 1; r <= radius; ++r) {
    for (int a = 0; a < n; ++a) {
      if (mol.atom(a).z == 1) continue;
      env.clear();
      for (const Neighbor& nb : mol.neighbors(a))
        if (mol.atom(nb.atom).z != 1) env.emplace_back(static_cast<int>(mol.bond(nb.bond).order), id[nb.atom]);
      std::sort(env.begin(), env.end());
      h.clear();
      h.add_int(r);
      h.add(id[a]);
      for (const auto& [order, nid] : env) {
        h.add_int(order);
        h.add(nid);
      }
      next[a] = h.digest();
      fp.set(fold(next[a], nbits));
    }
    std::swap(id, next);
  }
  return fp;
}

double tanimoto(const Fingerprint& a, const Fingerprint& b) {
  check_compatible(a.radius, a.nbits, b.radius, b.nbits);
  int inter = 0, uni = 0;
  for (std::size_t i = 0; i < a.words.size(); ++i) {
    inter += std::popcount(a.words[i] & b.words[i]);
    uni += std::popcount(a.words[i] | b.words[i]);
  }
  return ratio(inter, uni);
}

void ReferenceIndex::add(const Fingerprint& fp) {
  check_compatible(radius_, nbits_, fp.radius, fp.nbits);
  packed_.insert(packed_.end(), fp.words.begin(), fp.words.end());
  popcounts_.push_back(fp.popcount());
}

Fingerprint ReferenceIndex::at(std::size_t i) const {
  Fingerprint fp;
  fp.radius = radius_;
  fp.nbits = nbits_;
  auto w = words(i);
  fp.words.assign(w.begin(), w.end());
  return fp;
}

ReferenceIndex ReferenceIndex::build(const std::filesystem::path& corpus, int radius, int nbits) {
  ReferenceIndex idx(radius, nbits);
  idx.checksum_ = sha256_file(corpus);
  std::ifstream in(corpus);
  if (!in) throw CacheError("cannot read corpus " + corpus.string());
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string smi;
    if (!(ls >> smi)) continue;
    try {
      idx.add(morgan_fingerprint(parse_smiles(smi), radius, nbits));
    } catch (const std::exception&) {
      ++idx.skipped_;
    }
  }
  return idx;
}

void ReferenceIndex::save(const std::filesystem::path& path) const {
  std::string out;
  out.append(kMagic, sizeof(kMagic));
  put<std::uint32_t>(out, kVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(radius_));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(nbits_));
  put<std::uint64_t>(out, size());
  std::string sum = checksum_;
  sum.resize(64, '0');
  out += sum;
  put<std::uint64_t>(out, skipped_);
  out.append(reinterpret_cast<const char*>(packed_.data()), packed_.size() * sizeof(std::uint64_t));
  write_file_atomic(path, out);
}

ReferenceIndex ReferenceIndex::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CacheError("cannot read " + path.string());
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, kMagic, 8) != 0) throw CacheError("not a reference cache: " + path.string());
  if (get<std::uint32_t>(in) != kVersion) throw CacheError("unsupported reference cache version");
  const auto radius = get<std::uint32_t>(in);
  const auto nbits = get<std::uint32_t>(in);
  const auto count = get<std::uint64_t>(in);
  std::string sum(64, '\0');
  in.read(sum.data(), 64);
  if (!in) throw CacheError("truncated reference cache");
  ReferenceIndex idx(static_cast<int>(radius), static_cast<int>(nbits));
  idx.checksum_ = sum;
  idx.skipped_ = get<std::uint64_t>(in);
  idx.packed_.resize(count * idx.words_per_fp_);
  in.read(reinterpret_cast<char*>(idx.packed_.data()),
          static_cast<std::streamsize>(idx.packed_.size() * sizeof(std::uint64_t)));
  if (!in) throw CacheError("truncated reference cache");
  idx.popcounts_.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    int c = 0;
    for (std::uint64_t w : idx.words(i)) c += std::popcount(w);
    idx.popcounts_[i] = c;
  }
  return idx;
}

ReferenceIndex ReferenceIndex::load_or_build(const std::filesystem::path& corpus, const std::filesystem::path& cache,
                                             int radius, int nbits) {
  const std::string sum = sha256_file(corpus);
  if (std::filesystem::exists(cache)) {
    try {
      ReferenceIndex idx = load(cache);
      if (idx.checksum_ == sum && idx.radius_ == radius && idx.nbits_ == nbits) return idx;
    } catch (const CacheError&) {
      // Stale or damaged cache: rebuild below.
    }
  }
  ReferenceIndex idx = build(corpus, radius, nbits);
  idx.save(cache);
  return idx;
}

double novelty(const Fingerprint& fp, const ReferenceIndex& ref) {
  if (ref.size() == 0) throw EmptyReference("reference set is empty");
  double sum = 0;
  for (std::size_t i = 0; i < ref.size(); ++i) sum += tanimoto(fp, ref.at(i));
  return 1.0 - sum / static_cast<double>(ref.size());
}

std::vector<double> novelty_batch(std::span<const Fingerprint> queries, const ReferenceIndex& ref, unsigned threads) {
  if (ref.size() == 0) throw EmptyReference("reference set is empty");
  for (const Fingerprint& q : queries) check_compatible(q.radius, q.nbits, ref.radius(), ref.nbits());
  std::vector<double> out(queries.size());
  const std::size_t words = (ref.nbits() + 63) / 64;
  auto one = [&](std::size_t qi) {
    const Fingerprint& q = queries[qi];
    const std::uint64_t* qw = q.words.data();
    const int qp = q.popcount();
    double sum = 0;
    for (std::size_t i = 0; i < ref.size(); ++i) {
      const std::uint64_t* rw = ref.words(i).data();
      int inter = 0;
      for (std::size_t w = 0; w < words; ++w) inter += std::popcount(qw[w] & rw[w]);
      sum += ratio(inter, qp + ref.popcount(i) - inter);
    }
    out[qi] = 1.0 - sum / static_cast<double>(ref.size());
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, queries.size())));
  if (threads <= 1) {
    for (std::size_t i = 0; i < queries.size(); ++i) one(i);
    return out;
  }
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < queries.size(); i += threads) one(i);
    });
  for (auto& th : pool) th.join();
  return out;
}

}  // namespace molbench
