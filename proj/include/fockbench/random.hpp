#pragma once

// xoshiro256++ with jump-ahead, used for every random draw in the project.
// Substreams are addressed by (seed, stream, chunk): the seed fills the state
// through splitmix64, `stream` applies long jumps (2^192 steps each) and
// `chunk` applies jumps (2^128 steps each), so a substream's content depends
// only on its address and never on scheduling.

#include <array>
#include <cstdint>
#include <limits>

namespace fockbench {

class Xoshiro256 {
 public:
  using result_type = std::uint64_t;

  explicit Xoshiro256(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& word : state_) {
      word = splitmix64(x);
    }
  }

  static Xoshiro256 substream(std::uint64_t seed, std::uint64_t stream, std::uint64_t chunk = 0) {
    Xoshiro256 rng(seed);
    for (std::uint64_t k = 0; k < stream; ++k) {
      rng.long_jump();
    }
    for (std::uint64_t k = 0; k < chunk; ++k) {
      rng.jump();
    }
    return rng;
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  void jump() {
    static constexpr std::array<std::uint64_t, 4> kJump = {
        0x180ec6d33cfd0abaULL, 0xd5a61266f0c9392cULL, 0xa9582618e03fc9aaULL,
        0x39abdc4529b1661cULL};
    apply(kJump);
  }

  void long_jump() {
    static constexpr std::array<std::uint64_t, 4> kLongJump = {
        0x76e15d3efefdcbbfULL, 0xc5004e441c522fb3ULL, 0x77710069854ee241ULL,
        0x39109bb02acbe635ULL};
    apply(kLongJump);
  }

  bool operator==(const Xoshiro256&) const = default;

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  static std::uint64_t splitmix64(std::uint64_t& x) {
    std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  void apply(const std::array<std::uint64_t, 4>& table) {
    std::array<std::uint64_t, 4> acc{};
    for (std::uint64_t word : table) {
      for (int b = 0; b < 64; ++b) {
        if (word & (std::uint64_t{1} << b)) {
          for (std::size_t k = 0; k < 4; ++k) {
            acc[k] ^= state_[k];
          }
        }
        (*this)();
      }
    }
    state_ = acc;
  }

  std::array<std::uint64_t, 4> state_{};
};

}  // namespace fockbench
