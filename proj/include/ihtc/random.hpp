#pragma once

#include <cstdint>
#include <random>

namespace ihtc {

// All randomness in the library flows through std::mt19937_64 engines seeded
// from a 64-bit base seed. Independent streams are derived with SplitMix64 so
// that adding a draw to one stream never shifts another.
using Engine = std::mt19937_64;

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  return splitmix64(splitmix64(base) ^ splitmix64(stream + 0x5851F42D4C957F2DULL));
}

inline Engine make_engine(std::uint64_t base, std::uint64_t stream) {
  return Engine(derive_seed(base, stream));
}

}  // namespace ihtc
