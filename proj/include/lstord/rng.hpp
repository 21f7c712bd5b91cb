#pragma once

#include <cstdint>
#include <random>

namespace lstord {

using engine_type = std::mt19937_64;

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Seed for an independent stream `stream` under master seed `seed`. Every
// replicate, run and start derives its engine this way so results do not
// depend on execution order.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  return mix64(mix64(seed) ^ mix64(stream * 0xD1B54A32D192ED03ULL + 1));
}

inline engine_type make_engine(std::uint64_t seed, std::uint64_t stream) {
  return engine_type(derive_seed(seed, stream));
}

// Stream tags keep the derived seeds of unrelated consumers apart.
namespace stream {
inline constexpr std::uint64_t starts = 0x5741525453ULL;
inline constexpr std::uint64_t null_draw = 0x4E554C4CULL;
inline constexpr std::uint64_t null_fit = 0x46495421ULL;
inline constexpr std::uint64_t boot_draw = 0x424F4F54ULL;
inline constexpr std::uint64_t boot_fit = 0x42464954ULL;
inline constexpr std::uint64_t quad = 0x51554144ULL;
inline constexpr std::uint64_t group_x = 0x47525058ULL;
inline constexpr std::uint64_t group_y = 0x47525059ULL;
inline constexpr std::uint64_t mixture = 0x4D495854ULL;
inline constexpr std::uint64_t run = 0x52554E21ULL;
}  // namespace stream

}  // namespace lstord
