#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <span>

namespace trustnet {

// Finalizer from splitmix64. Used to derive independent substream seeds from
// a single scenario seed so that draw order in one component never shifts the
// stream of another.
constexpr std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Deterministic RNG. Bounded/real/normal draws are implemented here instead
// of through std::*_distribution so a (config, seed) pair replays to the same
// byte sequence on any standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    static Rng substream(std::uint64_t seed, std::uint64_t tag)
    {
        return Rng(splitmix64(seed ^ splitmix64(tag)));
    }

    std::uint64_t u64() { return gen_(); }

    std::uint32_t u32() { return static_cast<std::uint32_t>(gen_() >> 32); }

    // Uniform on [0, bound), unbiased via rejection.
    std::uint64_t below(std::uint64_t bound)
    {
        for (;;) {
            const std::uint64_t r = u64();
            const std::uint64_t v = r % bound;
            // Accept only draws from a complete bucket of size `bound`.
            if (r - v <= std::numeric_limits<std::uint64_t>::max() - (bound - 1)) {
                return v;
            }
        }
    }

    // Uniform on [0, 1) with 53 random bits.
    double unit() { return static_cast<double>(u64() >> 11) * 0x1.0p-53; }

    // Standard normal via Box-Muller; the second member of each pair is cached.
    double normal()
    {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        do {
            u1 = unit();
        } while (u1 == 0.0);
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * 3.14159265358979323846 * unit();
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

    void fill(std::span<std::uint8_t> out)
    {
        std::size_t i = 0;
        while (i < out.size()) {
            std::uint64_t word = u64();
            for (int b = 0; b < 8 && i < out.size(); ++b, ++i) {
                out[i] = static_cast<std::uint8_t>(word & 0xff);
                word >>= 8;
            }
        }
    }

private:
    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace trustnet
