#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>

namespace laserlab::rng {

/// Recorded in output metadata of every stochastic run.
inline constexpr const char* kGeneratorName = "philox4x64-10";

namespace detail {

inline constexpr std::uint64_t kMul0 = 0xD2E7470EE14C6C93ull;
inline constexpr std::uint64_t kMul1 = 0xCA5A826395121157ull;
inline constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ull;
inline constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73Bull;

inline void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi,
                    std::uint64_t& lo) {
  const auto p = static_cast<unsigned __int128>(a) * b;
  hi = static_cast<std::uint64_t>(p >> 64);
  lo = static_cast<std::uint64_t>(p);
}

}  // namespace detail

/**
 * Philox 4x64 block function, 10 rounds. Counter-based: the output is a
 * keyed bijection of the counter, so distinct keys (seed, stream) produce
 * non-overlapping random sequences by construction. Output cross-checked
 * against numpy.random.Philox.
 */
inline std::array<std::uint64_t, 4> philox4x64(std::array<std::uint64_t, 4> ctr,
                                               std::array<std::uint64_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    std::uint64_t hi0, lo0, hi1, lo1;
    detail::mulhilo(detail::kMul0, ctr[0], hi0, lo0);
    detail::mulhilo(detail::kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += detail::kWeyl0;
    key[1] += detail::kWeyl1;
  }
  return ctr;
}

/**
 * Buffered draw stream over Philox blocks. Each (seed, stream_id) pair is an
 * independent stream; trajectories are keyed by their index so any parallel
 * schedule reproduces the same per-trajectory randomness.
 */
class Stream {
 public:
  Stream(std::uint64_t seed, std::uint64_t stream_id) : key_{seed, stream_id} {}

  std::uint64_t next_u64() {
    if (pos_ == 4) {
      buf_ = philox4x64({block_++, 0, 0, 0}, key_);
      pos_ = 0;
    }
    return buf_[pos_++];
  }

  /// Uniform on [0, 1), 53-bit resolution.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform on (0, 1]; safe under log().
  double uniform_open() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller (fixed draw consumption, reproducible).
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const auto [z0, z1] = normal_pair();
    spare_ = z1;
    has_spare_ = true;
    return z0;
  }

  std::pair<double, double> normal_pair() {
    const double r = std::sqrt(-2.0 * std::log(uniform_open()));
    const double phi = 2.0 * std::numbers::pi * uniform();
    return {r * std::cos(phi), r * std::sin(phi)};
  }

 private:
  std::array<std::uint64_t, 2> key_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 4> buf_{};
  int pos_ = 4;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace laserlab::rng
