#pragma once

#include <cstdint>
#include <random>

namespace gaprisk {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// One independent pseudo-random stream. Streams derived from the same seed
// but different indices are decorrelated, so Monte Carlo loops can hand one
// stream per path and stay deterministic under any execution order.
class RngStream {
  public:
    explicit RngStream(std::uint64_t seed, std::uint64_t stream_index = 0)
        : engine_(splitmix64(splitmix64(seed) ^ splitmix64(stream_index + 0x51ed2700215ULL))) {}

    double normal() { return normal_(engine_); }
    double uniform() { return uniform_(engine_); }
    double exponential(double rate) {
        return std::exponential_distribution<double>(rate)(engine_);
    }
    long poisson(double mean) {
        if (mean <= 0.0) return 0;
        return std::poisson_distribution<long>(mean)(engine_);
    }
    std::mt19937_64& engine() { return engine_; }

  private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

} // namespace gaprisk
