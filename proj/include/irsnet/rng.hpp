#pragma once

#include <array>
#include <cstdint>

namespace irsnet {

// Philox4x64-10 block function (Random123 constants). Stateless; the
// counter/key pair fully determines the four output words.
std::array<std::uint64_t, 4> philox4x64_10(const std::array<std::uint64_t, 4>& counter,
                                           std::uint64_t key0, std::uint64_t key1);

// Counter-based stream: key = (seed, stream id), 256-bit block counter starting
// at 1 so the raw output sequence matches numpy.random.Philox(key=seed) for
// stream 0. Distinct stream ids give statistically independent sequences, which
// is what makes per-trial parallel Monte-Carlo reproducible.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed, std::uint64_t stream = 0)
        : key0_(seed), key1_(stream) {}

    std::uint64_t next_u64();
    double uniform();       // [0, 1), 53-bit
    double uniform_pos();   // (0, 1]
    double normal();        // standard normal, Box-Muller (polar)
    double exponential();   // mean 1
    double gamma(double shape, double scale = 1.0); // Marsaglia-Tsang
    std::uint64_t poisson(double mean);             // exact; PTRS for large mean

private:
    void refill();
    std::uint64_t key0_, key1_;
    std::array<std::uint64_t, 4> counter_{0, 0, 0, 0};
    std::array<std::uint64_t, 4> buf_{};
    int buf_pos_ = 4;
    double cached_normal_ = 0.0;
    bool has_cached_normal_ = false;
};

} // namespace irsnet
