#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <string_view>

namespace ptsat {

// xoshiro256** (Blackman & Vigna), state expanded from a 64-bit seed with
// SplitMix64. Both the bit stream and the derived uniform variates are fully
// specified here, so runs reproduce across compilers and platforms (the
// <random> distributions do not guarantee that).
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed = 0);

  std::uint64_t next();
  std::uint64_t operator()() { return next(); }
  static constexpr std::uint64_t min() { return 0; }
  static constexpr std::uint64_t max() { return ~std::uint64_t{0}; }

  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  // Uniform on [0, bound); bound > 0. Lemire's multiply-shift with rejection.
  std::uint64_t below(std::uint64_t bound);

 private:
  std::array<std::uint64_t, 4> s_;
};

std::uint64_t splitmix64(std::uint64_t& state);

// Seed for an independent stream keyed by a tuple of ids, e.g.
// (master, repeat, replica). Each component is absorbed through a SplitMix64
// finalizer round, so permuting or extending the tuple changes the result.
std::uint64_t derive_seed(std::uint64_t master,
                          std::initializer_list<std::uint64_t> keys);

// FNV-1a, for turning instance names into stream keys.
std::uint64_t hash_name(std::string_view name);

}  // namespace ptsat
