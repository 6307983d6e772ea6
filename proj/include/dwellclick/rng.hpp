#pragma once

// Counter-based random streams for the synthetic generator.
//
// A Stream is a Philox4x32-10 key. Every draw is a pure function of
// (key, index, lane), so per-ad streams can be generated in any order or in
// parallel and still reproduce the same values. Child streams are derived
// by mixing the parent key with a stream id through SplitMix64.

#include <array>
#include <cstdint>

namespace dwell::rng {

inline constexpr const char* kAlgorithmName = "philox4x32-10+splitmix64";

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

PhiloxCounter philox4x32_10(PhiloxCounter counter, PhiloxKey key);

std::uint64_t splitmix64_mix(std::uint64_t z);

class Stream {
  public:
    explicit Stream(std::uint64_t seed) : key_(splitmix64_mix(seed)) {}

    Stream split(std::uint64_t stream_id) const;

    // 128 random bits for the given (index, lane) pair.
    PhiloxCounter block(std::uint64_t index, std::uint32_t lane) const;

    // Uniform on [0, 1) with 53 random bits.
    double uniform(std::uint64_t index, std::uint32_t lane) const;

    // Uniform on (0, 1); safe to pass to log().
    double uniform_open(std::uint64_t index, std::uint32_t lane) const;

    // Standard normal via Box-Muller on one block.
    double normal(std::uint64_t index, std::uint32_t lane) const;

    std::uint64_t key() const { return key_; }

  private:
    struct FromKey {};
    Stream(FromKey, std::uint64_t key) : key_(key) {}

    std::uint64_t key_;
};

}  // namespace dwell::rng
