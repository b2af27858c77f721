#pragma once

#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>
#include <variant>

namespace cso {

/// Counter-based generator: the n-th output is splitmix64(key + n * golden).
/// Satisfies UniformRandomBitGenerator, so it plugs into <random> distributions.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t key = 0) : key_(key) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  result_type operator()();

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01();

  /// Independent child stream; the parent is not advanced.
  Rng derive(std::uint64_t label) const;

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

std::uint64_t splitmix64(std::uint64_t x);

using SeedLabel = std::variant<std::int64_t, std::string_view>;

/// Key derived by hashing the master seed together with every label in order.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<SeedLabel> labels);

inline Rng seed_stream(std::uint64_t master, std::initializer_list<SeedLabel> labels) {
  return Rng(derive_seed(master, labels));
}

}  // namespace cso
