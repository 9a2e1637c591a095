#pragma once

#include <cstdint>
#include <vector>

namespace appe {

// Counter-based random stream.  A stream is a 64-bit key; draws are the
// splitmix64 sequence anchored at that key.  fork() derives a child key by
// hashing (key, domain, a, b), so every agent and every round gets an
// independent stream that does not depend on the order other streams are
// consumed in.  Identical seeds give identical draws on any platform.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed);

  // Child stream for (domain, a, b).  Forking never advances this stream.
  [[nodiscard]] RngStream fork(std::uint64_t domain, std::uint64_t a = 0,
                               std::uint64_t b = 0) const;

  std::uint64_t next_u64();
  double uniform();                  // [0, 1), 53-bit resolution
  bool bernoulli(double p);
  std::uint32_t uniform_int(std::uint32_t n);  // unbiased draw from [0, n)
  std::uint8_t bit();

  std::vector<std::uint8_t> bits(std::size_t count);

 private:
  RngStream(std::uint64_t key, std::uint64_t counter);
  std::uint64_t key_;
  std::uint64_t counter_;
};

// Stream domains.  Values are part of the determinism contract: changing
// them changes every seeded output.
namespace stream {
inline constexpr std::uint64_t kNotification = 1;
inline constexpr std::uint64_t kVote = 2;
inline constexpr std::uint64_t kAcka = 3;
inline constexpr std::uint64_t kSv = 4;
inline constexpr std::uint64_t kRound = 5;
inline constexpr std::uint64_t kAnnounce = 6;
inline constexpr std::uint64_t kAttack = 7;
inline constexpr std::uint64_t kTest = 99;
}  // namespace stream

}  // namespace appe
