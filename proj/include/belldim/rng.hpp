#pragma once

#include <cstdint>
#include <initializer_list>

namespace belldim {

/// splitmix64 finalizer. Good avalanche, cheap, stable across platforms.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Derives an independent stream seed from a root seed and a path of indices
/// (trial, party, ...). Streams are decoupled from execution order, so
/// parallel ensembles reproduce the sequential results.
inline std::uint64_t derive_seed(std::uint64_t root,
                                 std::initializer_list<std::uint64_t> path) {
  std::uint64_t x = mix64(root);
  for (std::uint64_t p : path) x = mix64(x ^ mix64(p));
  return x;
}

}  // namespace belldim
