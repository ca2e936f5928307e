#pragma once

// Portable seeded randomness. std::mt19937_64 output is fully specified by
// the standard; the std distributions are not, so sampling is done here by
// rejection on raw 64-bit draws. Streams are derived with splitmix64 so that
// (seed, stream) pairs are reproducible independently of each other.

#include "hetsched/rational.hpp"

#include <cstdint>
#include <random>
#include <stdexcept>

namespace hetsched {

inline constexpr const char* kGeneratorName = "mt19937_64/splitmix64-streams";

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    Rng(std::uint64_t seed, std::uint64_t stream) : engine_(derive_stream_seed(seed, stream)) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform integer in [lo, hi], inclusive.
    std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi) {
        if (hi < lo) throw std::invalid_argument("uniform_int: empty range");
        std::uint64_t span = hi - lo;
        if (span == UINT64_MAX) return next();
        std::uint64_t n = span + 1;
        std::uint64_t limit = UINT64_MAX - (UINT64_MAX % n);
        std::uint64_t x;
        do {
            x = next();
        } while (x >= limit);
        return lo + x % n;
    }

    /// Uniform draw from the grid {k / denominator} intersected with [lo, hi]
    /// (or (lo, hi] when lo_open). Both ends must be non-negative.
    Rational uniform_grid(const Rational& lo, const Rational& hi, std::uint64_t denominator,
                          bool lo_open = false) {
        mpz_class den(static_cast<unsigned long>(denominator));
        Rational lo_scaled = lo * den;
        Rational hi_scaled = hi * den;
        mpz_class k_lo, k_hi;
        mpz_cdiv_q(k_lo.get_mpz_t(), lo_scaled.get_num_mpz_t(), lo_scaled.get_den_mpz_t());
        mpz_fdiv_q(k_hi.get_mpz_t(), hi_scaled.get_num_mpz_t(), hi_scaled.get_den_mpz_t());
        if (lo_open && Rational(k_lo) == lo_scaled) k_lo += 1;
        if (k_hi < k_lo || k_lo < 0 || !k_hi.fits_ulong_p())
            throw std::invalid_argument("uniform_grid: no grid point in range");
        std::uint64_t k = uniform_int(k_lo.get_ui(), k_hi.get_ui());
        Rational r(mpz_class(static_cast<unsigned long>(k)), den);
        r.canonicalize();
        return r;
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace hetsched
