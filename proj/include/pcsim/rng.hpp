#ifndef PCSIM_RNG_HPP
#define PCSIM_RNG_HPP

#include <cstdint>
#include <initializer_list>
#include <random>

namespace pcsim {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Derived stream seed, e.g. derive_seed({master, cell, trial}).
inline std::uint64_t derive_seed(std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = 0x6a09e667f3bcc909ULL;
  for (auto p : parts) {
    h = splitmix64(h ^ splitmix64(p));
  }
  return h;
}

/// Counter-based uniform in [0,1): the value for (seed, counter) does not
/// depend on how many other draws happened or on which thread asks.
inline double counter_uniform(std::uint64_t seed, std::uint64_t counter) {
  const std::uint64_t bits = splitmix64(seed ^ splitmix64(counter + 0x1234567ULL));
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

using Rng = std::mt19937_64;

} // namespace pcsim

#endif // PCSIM_RNG_HPP
