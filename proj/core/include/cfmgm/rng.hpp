#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace cfmgm {

/// Tags for deriving independent substreams of one trial. Keeping the
/// streams separate means enabling or disabling one consumer never shifts
/// the draws seen by another.
enum class StreamTag : std::uint64_t {
  kGeometry = 1,
  kNlos = 2,
  kSchedule = 3,
  kSca = 4,
  kNoise = 5,
  kCsir = 6,
  kVerify = 7,
};

std::uint64_t splitmix64(std::uint64_t& state);

/// Counter-based seed derivation: (master, trial, stream) -> seed.
/// Trials can be evaluated in any order or concurrently without touching
/// each other's streams.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t trial,
                          StreamTag tag);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform on [0, 1) with 53-bit resolution.
  double uniform();
  /// Uniform on [lo, hi); returns lo exactly for a point interval.
  double uniform(double lo, double hi);
  /// Circularly-symmetric complex Gaussian CN(0, variance).
  std::complex<double> complex_gaussian(double variance);

  std::uint64_t next_u64() { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

}  // namespace cfmgm
