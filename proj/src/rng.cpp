#include "appe/rng.hpp"

#include <stdexcept>

namespace appe {
namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// splitmix64 finalizer (Steele, Lea, Flood 2014).
constexpr std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}

}  // namespace

RngStream::RngStream(std::uint64_t seed)
    : key_(mix64(seed ^ kGolden)), counter_(0) {}

RngStream::RngStream(std::uint64_t key, std::uint64_t counter)
    : key_(key), counter_(counter) {}

RngStream RngStream::fork(std::uint64_t domain, std::uint64_t a,
                          std::uint64_t b) const {
  std::uint64_t h = mix64(key_ ^ (domain + kGolden));
  h = mix64(h ^ (a + kGolden));
  h = mix64(h ^ (b + kGolden));
  return RngStream(h, 0);
}

std::uint64_t RngStream::next_u64() {
  counter_ += 1;
  return mix64(key_ + counter_ * kGolden);
}

double RngStream::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

bool RngStream::bernoulli(double p) {
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("bernoulli: p outside [0,1]");
  return uniform() < p;
}

std::uint32_t RngStream::uniform_int(std::uint32_t n) {
  if (n == 0) throw std::invalid_argument("uniform_int: n == 0");
  // Masked rejection keeps the draw exactly uniform.
  std::uint32_t mask = n - 1;
  mask |= mask >> 1;
  mask |= mask >> 2;
  mask |= mask >> 4;
  mask |= mask >> 8;
  mask |= mask >> 16;
  for (;;) {
    auto v = static_cast<std::uint32_t>(next_u64()) & mask;
    if (v < n) return v;
  }
}

std::uint8_t RngStream::bit() { return static_cast<std::uint8_t>(next_u64() >> 63); }

std::vector<std::uint8_t> RngStream::bits(std::size_t count) {
  std::vector<std::uint8_t> out(count);
  for (auto& b : out) b = bit();
  return out;
}

}  // namespace appe
