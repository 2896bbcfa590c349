#include "cfmgm/rng.hpp"

#include <cmath>
#include <numbers>

namespace cfmgm {

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t trial,
                          StreamTag tag) {
  std::uint64_t s = master;
  std::uint64_t h = splitmix64(s);
  s = h ^ (trial + 0x9e3779b97f4a7c15ULL);
  h = splitmix64(s);
  s = h ^ (static_cast<std::uint64_t>(tag) * 0xbf58476d1ce4e5b9ULL);
  return splitmix64(s);
}

double Rng::uniform() {
  return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + uniform() * (hi - lo); }

std::complex<double> Rng::complex_gaussian(double variance) {
  if (variance <= 0.0) return {0.0, 0.0};
  const double u1 = uniform();
  const double u2 = uniform();
  // |z|^2 ~ Exp(variance), phase uniform.
  const double mag = std::sqrt(-variance * std::log1p(-u1));
  return std::polar(mag, 2.0 * std::numbers::pi * u2);
}

}  // namespace cfmgm
