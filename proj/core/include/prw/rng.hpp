#pragma once

#include <cstdint>

namespace prw {

// Counter-based generator: output n is a pure function of (seed, stream, n),
// so distinct trajectories get independent substreams and results do not
// depend on how trials are scheduled across threads.
//
// The mixer is the splitmix64 finalizer applied twice with distinct keys,
// which passes the usual empirical batteries at Monte Carlo scales.
class CounterRng {
  public:
    CounterRng(std::uint64_t seed, std::uint64_t stream)
        : key_(mix(seed ^ 0x9e3779b97f4a7c15ull) ^ mix(stream ^ 0xbf58476d1ce4e5b9ull)),
          counter_(0) {}

    std::uint64_t next_u64() {
        std::uint64_t z = key_ + 0x9e3779b97f4a7c15ull * (++counter_);
        return mix(mix(z) ^ key_);
    }

    // uniform in [0,1)
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // uniform in {0,...,n-1}, n > 0 (Lemire rejection)
    std::uint64_t next_below(std::uint64_t n) {
        for (;;) {
            std::uint64_t x = next_u64();
            __uint128_t m = static_cast<__uint128_t>(x) * n;
            std::uint64_t lo = static_cast<std::uint64_t>(m);
            if (lo >= n || lo >= (-n) % n) return static_cast<std::uint64_t>(m >> 64);
        }
    }

  private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    std::uint64_t key_;
    std::uint64_t counter_;
};

} // namespace prw
