#include "irsnet/rng.hpp"
#include "irsnet/util.hpp"

#include <cmath>

namespace irsnet {

namespace {

constexpr std::uint64_t kM0 = 0xD2E7470EE14C6C93ull;
constexpr std::uint64_t kM1 = 0xCA5A826395121157ull;
constexpr std::uint64_t kW0 = 0x9E3779B97F4A7C15ull;
constexpr std::uint64_t kW1 = 0xBB67AE8584CAA73Bull;

inline void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi, std::uint64_t& lo) {
    unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
    hi = static_cast<std::uint64_t>(p >> 64);
    lo = static_cast<std::uint64_t>(p);
}

} // namespace

std::array<std::uint64_t, 4> philox4x64_10(const std::array<std::uint64_t, 4>& counter,
                                           std::uint64_t key0, std::uint64_t key1) {
    std::uint64_t x0 = counter[0], x1 = counter[1], x2 = counter[2], x3 = counter[3];
    std::uint64_t k0 = key0, k1 = key1;
    for (int r = 0; r < 10; ++r) {
        std::uint64_t hi0, lo0, hi1, lo1;
        mulhilo(kM0, x0, hi0, lo0);
        mulhilo(kM1, x2, hi1, lo1);
        std::uint64_t y0 = hi1 ^ x1 ^ k0;
        std::uint64_t y2 = hi0 ^ x3 ^ k1;
        x0 = y0;
        x1 = lo1;
        x2 = y2;
        x3 = lo0;
        k0 += kW0;
        k1 += kW1;
    }
    return {x0, x1, x2, x3};
}

void RandomStream::refill() {
    // Increment-before-generate, matching numpy's Philox block sequence.
    if (++counter_[0] == 0)
        if (++counter_[1] == 0)
            if (++counter_[2] == 0) ++counter_[3];
    buf_ = philox4x64_10(counter_, key0_, key1_);
    buf_pos_ = 0;
}

std::uint64_t RandomStream::next_u64() {
    if (buf_pos_ >= 4) refill();
    return buf_[buf_pos_++];
}

double RandomStream::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomStream::uniform_pos() {
    return 1.0 - uniform();
}

double RandomStream::normal() {
    if (has_cached_normal_) {
        has_cached_normal_ = false;
        return cached_normal_;
    }
    double u, v, s;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    double m = std::sqrt(-2.0 * std::log(s) / s);
    cached_normal_ = v * m;
    has_cached_normal_ = true;
    return u * m;
}

double RandomStream::exponential() {
    return -std::log(uniform_pos());
}

double RandomStream::gamma(double shape, double scale) {
    if (shape < 1.0) {
        // Boost a shape+1 draw back down.
        double u = uniform_pos();
        return gamma(shape + 1.0, scale) * std::pow(u, 1.0 / shape);
    }
    double d = shape - 1.0 / 3.0;
    double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x = normal();
        double v = 1.0 + c * x;
        if (v <= 0.0) continue;
        v = v * v * v;
        double u = uniform_pos();
        double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) return scale * d * v;
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return scale * d * v;
    }
}

std::uint64_t RandomStream::poisson(double mean) {
    if (mean <= 0.0) return 0;
    if (mean < 10.0) {
        // Knuth multiplication method.
        double limit = std::exp(-mean);
        double prod = uniform();
        std::uint64_t n = 0;
        while (prod > limit) {
            prod *= uniform();
            ++n;
        }
        return n;
    }
    // Hormann's PTRS transformed-rejection sampler (exact for mean >= 10).
    const double b = 0.931 + 2.53 * std::sqrt(mean);
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);
    for (;;) {
        double u = uniform() - 0.5;
        double v = uniform();
        double us = 0.5 - std::abs(u);
        double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
        if (us >= 0.07 && v <= v_r) return static_cast<std::uint64_t>(k);
        if (k < 0.0 || (us < 0.013 && v > us)) continue;
        if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
            k * std::log(mean) - mean - std::lgamma(k + 1.0)) {
            return static_cast<std::uint64_t>(k);
        }
    }
}

} // namespace irsnet
