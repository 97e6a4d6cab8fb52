#pragma once

#include <cstdint>
#include <string_view>

// Counter-based randomness: every decision is keyed by (seed, ids...) so
// results never depend on iteration order or thread count.

namespace unitals::rng {

constexpr std::uint64_t mix(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t combine(std::uint64_t h, std::uint64_t v) noexcept {
  return mix(h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)));
}

constexpr std::uint64_t derive(std::uint64_t seed, std::uint64_t a) noexcept {
  return combine(mix(seed), a);
}

constexpr std::uint64_t derive(std::uint64_t seed, std::uint64_t a,
                               std::uint64_t b) noexcept {
  return combine(combine(mix(seed), a), b);
}

constexpr std::uint64_t derive(std::uint64_t seed, std::uint64_t a,
                               std::uint64_t b, std::uint64_t c) noexcept {
  return combine(combine(combine(mix(seed), a), b), c);
}

// FNV-1a, for deriving per-stage streams from a stage name.
constexpr std::uint64_t hash_name(std::string_view name) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char ch : name) {
    h ^= static_cast<unsigned char>(ch);
    h *= 0x100000001b3ULL;
  }
  return h;
}

constexpr std::uint64_t derive_stage(std::uint64_t seed,
                                     std::string_view stage) noexcept {
  return combine(mix(seed), hash_name(stage));
}

// Uniform in [0,1), 53 bits of precision.
constexpr double unit(std::uint64_t h) noexcept {
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

constexpr bool bernoulli(std::uint64_t h, double p) noexcept {
  return unit(h) < p;
}

constexpr std::uint32_t below(std::uint64_t h, std::uint32_t n) noexcept {
  return static_cast<std::uint32_t>(h % n);
}

}  // namespace unitals::rng
