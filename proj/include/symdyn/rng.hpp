#pragma once

#include <array>
#include <cstdint>

namespace symdyn {

using Seed = std::uint64_t;

// Philox4x32-10 (Salmon et al., Random123) in counter mode. Version tag
// "philox4x32-10/v1": the mapping (seed, stream, counter) -> bits is part of
// the reproducibility contract and must not change.
class Philox4x32 {
 public:
  static constexpr const char* kName = "philox4x32-10/v1";

  Philox4x32(Seed seed, std::uint64_t stream) noexcept
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        stream_(stream) {}

  // Raw block for an explicit counter value.
  std::array<std::uint32_t, 4> block(std::uint64_t counter) const noexcept;

  std::uint64_t next_u64() noexcept {
    if (buffered_ == 0) {
      auto b = block(counter_++);
      buf_[0] = (std::uint64_t{b[1]} << 32) | b[0];
      buf_[1] = (std::uint64_t{b[3]} << 32) | b[2];
      buffered_ = 2;
    }
    return buf_[2 - buffered_--];
  }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, bound). bound must be > 0.
  std::uint64_t below(std::uint64_t bound) noexcept;

 private:
  std::array<std::uint32_t, 2> key_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
  std::array<std::uint64_t, 2> buf_{};
  int buffered_ = 0;
};

// Derives an independent child seed; used to give every (round, component)
// block or (trial, channel) pair its own generator.
Seed derive_seed(Seed parent, std::uint64_t a, std::uint64_t b = 0) noexcept;

// Stream ids reserved per consumer so two consumers never share bits.
namespace streams {
inline constexpr std::uint64_t kSamplePath = 1;
inline constexpr std::uint64_t kSubstitution = 2;
inline constexpr std::uint64_t kIndel = 3;
}  // namespace streams

}  // namespace symdyn
