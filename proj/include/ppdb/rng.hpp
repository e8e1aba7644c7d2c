#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

namespace ppdb {

/// Counter-based pseudo-random stream.  A draw is a pure function of the key
/// words plus a running counter, so sampling is order-independent and
/// embarrassingly parallel: stream (seed, index, relation, ...) always yields
/// the same sequence on every platform.
///
/// The mixer is the splitmix64 finalizer applied over the chained key words;
/// distribution procedures below are fixed (inverse CDF for discrete models,
/// Box-Muller for normals) so results are bit-reproducible.
class CounterStream {
public:
    explicit CounterStream(std::initializer_list<std::uint64_t> key) {
        state_ = 0x9e3779b97f4a7c15ULL;
        for (auto w : key) state_ = mix(state_ ^ w);
    }

    std::uint64_t next_u64() { return mix(state_ ^ mix(counter_++ + 0x632be59bd9b4e019ULL)); }

    /// Uniform in [0, 1) with 53 random bits.
    double next_u01() { return (double)(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [lo, hi] via 128-bit range reduction (no modulo
    /// bias worth caring about at 64 bits; fixed procedure for determinism).
    std::int64_t next_int(std::int64_t lo, std::int64_t hi) {
        std::uint64_t span = (std::uint64_t)(hi - lo) + 1;
        unsigned __int128 prod = (unsigned __int128)next_u64() * span;
        return lo + (std::int64_t)(prod >> 64);
    }

    double next_real(double lo, double hi) { return lo + next_u01() * (hi - lo); }

    /// Index into a normalized cumulative weight table (inverse CDF).
    std::size_t next_categorical(const std::vector<double>& cumulative) {
        double u = next_u01();
        for (std::size_t i = 0; i + 1 < cumulative.size(); ++i)
            if (u < cumulative[i]) return i;
        return cumulative.size() - 1;
    }

    /// Standard normal via Box-Muller (two draws per call).
    double next_normal() {
        double u1 = next_u01();
        double u2 = next_u01();
        // avoid log(0)
        if (u1 <= 0) u1 = 0x1.0p-53;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
    std::uint64_t counter_ = 0;
};

/// Truncated-Poisson CDF on {0..n_max}, renormalized.
inline std::vector<double> truncated_poisson_cdf(double lambda, std::uint64_t n_max) {
    std::vector<double> pmf;
    double p = std::exp(-lambda);
    double total = 0;
    for (std::uint64_t k = 0; k <= n_max; ++k) {
        if (k > 0) p *= lambda / (double)k;
        pmf.push_back(p);
        total += p;
    }
    std::vector<double> cdf;
    double acc = 0;
    for (double x : pmf) {
        acc += x / total;
        cdf.push_back(acc);
    }
    return cdf;
}

}  // namespace ppdb
