#pragma once

#include <cstdint>
#include <random>

namespace prb {

using Rng = std::mt19937_64;

/// Independent random streams derived from one master seed. Each consumer
/// owns its own stream so adding draws in one place never shifts another.
enum class Stream : std::uint64_t {
  env = 1,
  f1_init = 2,
  f2_init = 3,
  tie_break = 4,
  ts_sampling = 5,
  training = 6,
  reveal = 7,
  env_setup = 8,
};

/// SplitMix64 finaliser.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// derive_seed(master, s) = mix64(mix64(master) ^ mix64(s)).
constexpr std::uint64_t derive_seed(std::uint64_t master,
                                    std::uint64_t stream) noexcept {
  return mix64(mix64(master) ^ mix64(stream * 0xd1b54a32d192ed03ULL));
}

constexpr std::uint64_t derive_seed(std::uint64_t master, Stream s) noexcept {
  return derive_seed(master, static_cast<std::uint64_t>(s));
}

inline Rng make_rng(std::uint64_t master, Stream s) {
  return Rng(derive_seed(master, s));
}

}  // namespace prb
