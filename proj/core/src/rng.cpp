#include "cso/rng.hpp"

namespace cso {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kFnvOffset = 0xCBF29CE484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001B3ULL;

std::uint64_t fnv1a(std::uint64_t h, const void* data, std::size_t len) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= kFnvPrime;
  }
  return h;
}
}  // namespace

std::uint64_t splitmix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

Rng::result_type Rng::operator()() {
  ++counter_;
  return splitmix64(key_ + counter_ * kGolden);
}

double Rng::uniform01() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

Rng Rng::derive(std::uint64_t label) const {
  return Rng(splitmix64(splitmix64(key_ ^ kGolden) + splitmix64(label + kGolden)));
}

std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<SeedLabel> labels) {
  std::uint64_t h = fnv1a(kFnvOffset, &master, sizeof master);
  for (const auto& label : labels) {
    if (const auto* i = std::get_if<std::int64_t>(&label)) {
      const unsigned char tag = 'i';
      h = fnv1a(h, &tag, 1);
      h = fnv1a(h, i, sizeof *i);
    } else {
      const auto s = std::get<std::string_view>(label);
      const unsigned char tag = 's';
      const std::uint64_t len = s.size();
      h = fnv1a(h, &tag, 1);
      h = fnv1a(h, &len, sizeof len);
      h = fnv1a(h, s.data(), s.size());
    }
  }
  return splitmix64(h);
}

}  // namespace cso
