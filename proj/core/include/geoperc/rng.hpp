#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace geoperc {

/// Fixed labels for the disjoint sub-streams of one replication.
enum class StreamLabel : std::uint64_t {
  points = 1,
  lines = 2,
  field = 3,
  probes = 4,
  auxiliary = 5,
};

using Engine = std::mt19937_64;

/// SplitMix64 finalizer; used only to decorrelate seed material.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Deterministic seed for a chain of keys, e.g. (master, replication, label).
inline std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> keys) {
  std::uint64_t s = mix64(base);
  for (std::uint64_t k : keys) s = mix64(s ^ mix64(k + 0x632be59bd9b4e019ULL));
  return s;
}

inline std::uint64_t derive_seed(std::uint64_t base, StreamLabel label) {
  return derive_seed(base, {static_cast<std::uint64_t>(label)});
}

inline Engine make_engine(std::uint64_t seed) { return Engine(seed); }

/// Counter-based generator with O(1) seeding. Used where many tiny streams
/// are opened (one per Voronoi lattice cell); mt19937_64 init is too slow there.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

/// Uniform on [0, 1) with 53 random bits; platform independent.
template <class G>
double uniform01(G& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

/// Uniform on (0, 1].
template <class G>
double uniform01_open_low(G& eng) {
  return 1.0 - uniform01(eng);
}

template <class G>
double uniform(G& eng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(eng);
}

/// Poisson variate; mean 0 gives 0.
template <class G>
std::uint64_t poisson(G& eng, double mean) {
  if (!(mean > 0.0)) return 0;
  std::poisson_distribution<std::uint64_t> dist(mean);
  return dist(eng);
}

}  // namespace geoperc
