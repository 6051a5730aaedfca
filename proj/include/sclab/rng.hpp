#pragma once

#include <cstdint>

namespace sclab {

// Counter-keyed random stream: (root_seed, stream_index) fully determines the
// sequence, independent of platform, standard library, or thread schedule.
// The generator is xoshiro256** seeded through splitmix64, and uniform doubles
// are built from the top 53 bits, so results are bit-reproducible everywhere.
// (std::mt19937 plus std::uniform_real_distribution is not portable across
// library implementations, which is why this is hand-pinned.)
class RngStream {
 public:
  RngStream(std::uint64_t root_seed, std::uint64_t stream_index)
      : root_(root_seed), index_(stream_index) {
    std::uint64_t x = root_seed + 0x9E3779B97F4A7C15ULL * (stream_index + 1);
    for (auto& word : s_) word = splitmix64(x);
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;  // forbidden all-zero state
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  // +1.0 or -1.0 with equal probability.
  double sign() { return (next_u64() >> 63) ? 1.0 : -1.0; }

  std::uint64_t root_seed() const { return root_; }
  std::uint64_t stream_index() const { return index_; }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  static std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t root_;
  std::uint64_t index_;
  std::uint64_t s_[4];
};

}  // namespace sclab
