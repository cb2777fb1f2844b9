#ifndef AUTOTUNE_RNG_HPP
#define AUTOTUNE_RNG_HPP

#include <cstdint>
#include <random>
#include <string_view>

namespace autotune {

// Derive an independent stream seed from a master seed and a fixed label,
// so e.g. toggling plant noise never perturbs the optimizer's draws.
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view label) {
  // FNV-1a over the label, then splitmix64 over the combination.
  std::uint64_t h = 14695981039346656037ull;
  for (char c : label) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  std::uint64_t z = master + 0x9e3779b97f4a7c15ull + h;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t master, std::string_view label) {
  return Rng(derive_seed(master, label));
}

}  // namespace autotune

#endif
