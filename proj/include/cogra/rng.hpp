#pragma once

#include <cmath>
#include <cstdint>

namespace cogra {

/// Counter-based generator: draw i of stream k is a pure function of
/// (seed, k, i), so trial order and thread count never change a result.
class CounterRng {
public:
    explicit constexpr CounterRng(std::uint64_t key) : key_(key) {}

    static constexpr std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    constexpr std::uint64_t bits(std::uint64_t counter) const {
        return mix(key_ ^ mix(counter * 0xd1b54a32d192ed03ULL));
    }

    /// Uniform on [0, 1) with 53 random bits.
    constexpr double uniform(std::uint64_t counter) const {
        return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
    }

    CounterRng substream(std::uint64_t index) const {
        return CounterRng(mix(key_ + mix(index + 0x632be59bd9b4e019ULL)));
    }

    std::uint64_t key() const { return key_; }

private:
    std::uint64_t key_;
};

/// Sequential view over one counter stream.
class RngStream {
public:
    explicit RngStream(CounterRng rng) : rng_(rng) {}

    double uniform() { return rng_.uniform(next_++); }
    double exponential(double mean) { return -mean * std::log1p(-uniform()); }
    bool bernoulli(double p) { return uniform() < p; }

private:
    CounterRng rng_;
    std::uint64_t next_ = 0;
};

}  // namespace cogra
