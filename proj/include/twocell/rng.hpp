#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace twocell {

// Counter-based pseudo-random stream (SplittableRandom / splitmix64 family).
// A stream is addressed by (seed, hi, lo); draws are a pure function of the
// address and the draw counter, so any draw of any stream can be generated
// independently of all others. That is what makes Monte Carlo runs
// reproducible bit-for-bit regardless of how draws are partitioned over
// workers.
class RngStream {
  public:
    RngStream() = default;

    RngStream(std::uint64_t seed, std::uint64_t hi = 0, std::uint64_t lo = 0) {
        state_ = mix(seed + 0x9e3779b97f4a7c15ull);
        state_ = mix(state_ ^ mix(hi + 0xbf58476d1ce4e5b9ull));
        state_ = mix(state_ ^ mix(lo + 0x94d049bb133111ebull));
    }

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ull;
        return mix(state_);
    }

    // Uniform on the open interval (0,1); never returns an exact 0 or 1, so
    // -log(u) is always finite and exponential samples are strictly positive.
    double next_unit_open() {
        const std::uint64_t bits = next_u64() >> 11;  // 53 bits
        return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
    }

    // Exponential with the given rate (mean 1/rate).
    double next_exp(double rate) { return -std::log(next_unit_open()) / rate; }

    // Zero-mean circularly symmetric complex Gaussian with unit variance.
    // |g|^2 is exactly Exp(1) and the phase is uniform.
    std::complex<double> next_complex_gaussian() {
        const double m = std::sqrt(-std::log(next_unit_open()));
        const double ph = 2.0 * pi() * next_unit_open();
        return {m * std::cos(ph), m * std::sin(ph)};
    }

    static constexpr double pi() { return 3.141592653589793238462643383279502884; }

  private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    std::uint64_t state_ = 0x9e3779b97f4a7c15ull;
};

// Sub-stream roles used by the Monte Carlo harness; every draw index owns one
// independent stream per role.
enum class StreamRole : std::uint64_t {
    fading = 1,
    locations = 2,
    ppp_right = 3,
    ppp_left = 4,
};

inline RngStream draw_stream(std::uint64_t seed, std::uint64_t draw_index, StreamRole role) {
    return RngStream(seed, draw_index, static_cast<std::uint64_t>(role));
}

}  // namespace twocell
