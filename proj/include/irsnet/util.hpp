#pragma once

#include <cstdint>
#include <cstddef>
#include <cmath>
#include <string>
#include <string_view>
#include <thread>
#include <vector>
#include <functional>

namespace irsnet {

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kSpeedOfLight = 299792458.0;

// Compensated summation; addition order still matters, so callers that need
// bit-stable parallel reductions must merge partials in a fixed order.
struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;
    void add(double x) {
        double y = x - carry;
        double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    double value() const { return sum; }
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }
inline double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

inline double clamp01(double x) { return x < 0.0 ? 0.0 : (x > 1.0 ? 1.0 : x); }

inline std::uint64_t fnv1a64(std::string_view data, std::uint64_t h = 1469598103934665603ull) {
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline unsigned worker_count() {
    if (const char* env = std::getenv("IRSNET_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1u : hw;
}

// Splits [0, n) into contiguous blocks processed by worker_count() threads.
// fn(begin, end) must write only to disjoint per-index state.
inline void parallel_for_blocks(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn) {
    unsigned workers = worker_count();
    if (workers <= 1 || n < 2) {
        fn(0, n);
        return;
    }
    std::size_t chunk = (n + workers - 1) / workers;
    std::vector<std::thread> threads;
    for (unsigned w = 0; w < workers; ++w) {
        std::size_t b = w * chunk;
        if (b >= n) break;
        std::size_t e = std::min(n, b + chunk);
        threads.emplace_back([&fn, b, e] { fn(b, e); });
    }
    for (auto& t : threads) t.join();
}

} // namespace irsnet
