#ifndef TKTP_RNG_HPP
#define TKTP_RNG_HPP

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

namespace tktp {

// Counter-based generator built on the splitmix64 mixing function.
// Output i of stream (seed, stream) is mix(key + i*GAMMA), so streams can be
// split deterministically and results do not depend on thread scheduling.
// The same sequence is produced on every platform.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : key_(mix(seed ^ 0x5851f42d4c957f2dULL)) {}

    // Independent stream derived from (seed, stream index).
    static Rng derive(std::uint64_t seed, std::uint64_t stream) {
        Rng r(seed);
        r.key_ = mix(r.key_ + mix(stream * 0x9e3779b97f4a7c15ULL + 0x0b5ad4eceda1ce2aULL));
        return r;
    }

    std::uint64_t next_u64() { return mix(key_ + (++counter_) * 0x9e3779b97f4a7c15ULL); }

    // Uniform on [0,1), 53-bit resolution.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform on (0,1]; safe as a log() argument.
    double next_open_double() {
        return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    }

    // Unbiased integer in [0, bound). bound must be > 0.
    std::uint64_t next_below(std::uint64_t bound) {
        const std::uint64_t threshold = -bound % bound;  // 2^64 mod bound
        for (;;) {
            const std::uint64_t x = next_u64();
            if (x >= threshold) return x % bound;
        }
    }

    // Standard normal pair (Box-Muller; consumes exactly two uniforms).
    std::pair<double, double> next_normal_pair() {
        const double u1 = next_open_double();
        const double u2 = next_double();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        return {r * std::cos(a), r * std::sin(a)};
    }

    // Uniform random permutation of 1..n (Fisher-Yates).
    std::vector<std::int32_t> permutation(std::int32_t n) {
        std::vector<std::int32_t> p(static_cast<std::size_t>(n));
        for (std::int32_t i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = i + 1;
        for (std::int32_t i = n - 1; i > 0; --i) {
            const auto j = static_cast<std::int32_t>(next_below(static_cast<std::uint64_t>(i) + 1));
            std::swap(p[static_cast<std::size_t>(i)], p[static_cast<std::size_t>(j)]);
        }
        return p;
    }

    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

  private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace tktp

#endif
