#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace svolt::rng {

/// Philox4x32-10 counter-based block cipher (Salmon et al. constants).
/// Stateless: the caller owns counter and key, so draws can be indexed
/// deterministically from (seed, path, block) regardless of scheduling.
struct Philox4x32 {
  using ctr_t = std::array<std::uint32_t, 4>;
  using key_t = std::array<std::uint32_t, 2>;

  static ctr_t block(ctr_t ctr, key_t key) noexcept {
    constexpr std::uint32_t kMul0 = 0xD2511F53u;
    constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = std::uint64_t(kMul0) * ctr[0];
      const std::uint64_t p1 = std::uint64_t(kMul1) * ctr[2];
      ctr = {std::uint32_t(p1 >> 32) ^ ctr[1] ^ key[0], std::uint32_t(p1),
             std::uint32_t(p0 >> 32) ^ ctr[3] ^ key[1], std::uint32_t(p0)};
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    return ctr;
  }
};

inline std::uint64_t splitmix64(std::uint64_t z) noexcept {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// One independent N(0,1) stream per (seed, path, substream). Each Philox
/// block yields two 53-bit uniforms which feed one Box-Muller pair.
class NormalStream {
public:
  NormalStream(std::uint64_t seed, std::uint64_t path,
               std::uint32_t substream = 0) noexcept
      : sub_(substream) {
    const std::uint64_t k = splitmix64(seed ^ splitmix64(path + 0x736F6C76ull));
    key_ = {std::uint32_t(k), std::uint32_t(k >> 32)};
  }

  double normal() noexcept {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const auto words = next_block();
    const double u1 = to_unit(words[0], words[1]);
    const double u2 = to_unit(words[2], words[3]);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  /// Uniform on (0,1); consumes one block per call.
  double uniform() noexcept {
    const auto words = next_block();
    return to_unit(words[0], words[1]);
  }

private:
  Philox4x32::ctr_t counter() const noexcept {
    return {std::uint32_t(block_), std::uint32_t(block_ >> 32), sub_, 0u};
  }
  Philox4x32::ctr_t next_block() noexcept {
    const auto w = Philox4x32::block(counter(), key_);
    ++block_;
    return w;
  }
  static double to_unit(std::uint32_t hi, std::uint32_t lo) noexcept {
    const std::uint64_t v = (std::uint64_t(hi) << 32) | lo;
    return (double(v >> 11) + 0.5) * 0x1p-53;
  }

  Philox4x32::key_t key_{};
  std::uint32_t sub_ = 0;
  std::uint64_t block_ = 0;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

} // namespace svolt::rng
