#pragma once

#include <cstdint>

namespace nonlocal {

// Counter-based generator: every draw is a pure hash of (seed, stream,
// counter), so any path or block can be replayed independently of execution
// order and partitioning. The mix is splitmix64's finalizer over a Weyl
// sequence keyed per stream.
class CounterRng {
  public:
    CounterRng(std::uint64_t seed, std::uint64_t stream)
        : key_(mix(mix(seed + GOLDEN) ^ mix(stream * MUL1 + GOLDEN))) {}

    std::uint64_t next_u64() { return mix(key_ + (++counter_) * GOLDEN); }

    // Strictly inside (0,1): 53-bit mantissa offset by half an ulp.
    double uniform_open() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

  private:
    static constexpr std::uint64_t GOLDEN = 0x9E3779B97F4A7C15ull;
    static constexpr std::uint64_t MUL1 = 0xBF58476D1CE4E5B9ull;

    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace nonlocal
