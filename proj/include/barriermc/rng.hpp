#pragma once

#include <array>
#include <cstdint>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "normal.hpp"

namespace barriermc {

// Counter-based random numbers. Every draw is a pure function of
// (master seed, path index, step index), so path streams can be evaluated
// in any order on any number of threads and still reproduce bit-identically.

namespace detail {

// Philox4x32-10 block cipher (Salmon et al. counter-based generator).
struct PhiloxBlock {
    uint32_t w0, w1, w2, w3;
};

inline PhiloxBlock philox4x32(uint64_t key, uint64_t ctr_hi, uint64_t ctr_lo) {
    constexpr uint32_t M0 = 0xD2511F53u;
    constexpr uint32_t M1 = 0xCD9E8D57u;
    constexpr uint32_t W0 = 0x9E3779B9u;
    constexpr uint32_t W1 = 0xBB67AE85u;

    uint32_t k0 = static_cast<uint32_t>(key);
    uint32_t k1 = static_cast<uint32_t>(key >> 32);
    uint32_t c0 = static_cast<uint32_t>(ctr_lo);
    uint32_t c1 = static_cast<uint32_t>(ctr_lo >> 32);
    uint32_t c2 = static_cast<uint32_t>(ctr_hi);
    uint32_t c3 = static_cast<uint32_t>(ctr_hi >> 32);

    for (int round = 0; round < 10; ++round) {
        uint64_t p0 = static_cast<uint64_t>(M0) * c0;
        uint64_t p1 = static_cast<uint64_t>(M1) * c2;
        uint32_t hi0 = static_cast<uint32_t>(p0 >> 32);
        uint32_t lo0 = static_cast<uint32_t>(p0);
        uint32_t hi1 = static_cast<uint32_t>(p1 >> 32);
        uint32_t lo1 = static_cast<uint32_t>(p1);
        uint32_t n0 = hi1 ^ c1 ^ k0;
        uint32_t n1 = lo1;
        uint32_t n2 = hi0 ^ c3 ^ k1;
        uint32_t n3 = lo0;
        c0 = n0;
        c1 = n1;
        c2 = n2;
        c3 = n3;
        k0 += W0;
        k1 += W1;
    }
    return {c0, c1, c2, c3};
}

// Uniform in [0,1) from two 32-bit words (53 significant bits).
inline double uniform53(uint32_t hi, uint32_t lo) {
    uint64_t u = (static_cast<uint64_t>(hi) << 32) | lo;
    return static_cast<double>(u >> 11) * 0x1.0p-53;
}

} // namespace detail

// Deterministic mixing of a master seed with tags; used to derive
// independent sub-seeds (per table cell, per shift dimension, ...).
inline uint64_t derive_seed(uint64_t master, uint64_t tag, uint64_t salt = 0) {
    auto b = detail::philox4x32(master, tag, salt);
    return (static_cast<uint64_t>(b.w0) << 32) | b.w1;
}

struct GaussianPair {
    double z1, z2;
};

// One stream of N(0,1) draws per simulated path, addressed by step index.
class PathStream {
public:
    PathStream(uint64_t master_seed, uint64_t path_index)
        : seed_(master_seed), path_(path_index) {}

    // Pair of independent standard normals for step k (Box-Muller on one
    // Philox block). 2-D schemes consume both, 1-D schemes only the first.
    GaussianPair gaussian_pair(uint64_t k) const {
        auto b = detail::philox4x32(seed_, path_, k);
        double u1 = 1.0 - detail::uniform53(b.w0, b.w1); // (0,1], log-safe
        double u2 = detail::uniform53(b.w2, b.w3);
        double rad = std::sqrt(-2.0 * std::log(u1));
        double ang = 6.283185307179586477 * u2;
        return {rad * std::cos(ang), rad * std::sin(ang)};
    }

    double gaussian(uint64_t k) const {
        auto b = detail::philox4x32(seed_, path_, k);
        double u1 = 1.0 - detail::uniform53(b.w0, b.w1);
        double u2 = detail::uniform53(b.w2, b.w3);
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
    }

    uint64_t seed() const { return seed_; }
    uint64_t path_index() const { return path_; }

private:
    uint64_t seed_;
    uint64_t path_;
};

// Free-function form of the per-step draw.
inline double gaussian_increment(const PathStream& stream, uint64_t k) {
    return stream.gaussian(k);
}

// Randomly shifted Halton sequence for the optional low-discrepancy mode.
// Only the path-independent estimators may use it: there the sample
// dimension is fixed (steps, or 2*steps for stochastic volatility), which
// is what makes a quasi-random point set well-posed.
class HaltonTable {
public:
    HaltonTable(int dimensions, uint64_t seed) {
        if (dimensions < 1)
            throw std::invalid_argument("HaltonTable: dimensions must be >= 1");
        primes_ = first_primes(dimensions);
        shifts_.resize(dimensions);
        for (int j = 0; j < dimensions; ++j) {
            auto b = detail::philox4x32(seed, 0x51ED0A11u, static_cast<uint64_t>(j));
            shifts_[j] = detail::uniform53(b.w0, b.w1);
        }
    }

    int dimensions() const { return static_cast<int>(primes_.size()); }

    // Cranley-Patterson rotated radical-inverse coordinate in (0,1).
    double point(uint64_t index, int dim) const {
        double u = radical_inverse(index + 1, primes_[dim]) + shifts_[dim];
        if (u >= 1.0) u -= 1.0;
        // clamp away from 0/1 so norm_inv stays finite
        constexpr double eps = 1e-16;
        if (u < eps) u = eps;
        if (u > 1.0 - 1e-16) u = 1.0 - 1e-16;
        return u;
    }

    double gaussian(uint64_t index, int dim) const { return norm_inv(point(index, dim)); }

private:
    static double radical_inverse(uint64_t n, uint32_t base) {
        double inv = 1.0 / base;
        double f = inv;
        double r = 0.0;
        while (n > 0) {
            r += f * static_cast<double>(n % base);
            n /= base;
            f *= inv;
        }
        return r;
    }

    static std::vector<uint32_t> first_primes(int count) {
        std::vector<uint32_t> out;
        out.reserve(count);
        uint32_t cand = 2;
        while (static_cast<int>(out.size()) < count) {
            bool prime = true;
            for (uint32_t p : out) {
                if (p * p > cand) break;
                if (cand % p == 0) {
                    prime = false;
                    break;
                }
            }
            if (prime) out.push_back(cand);
            cand = (cand == 2) ? 3 : cand + 2;
        }
        return out;
    }

    std::vector<uint32_t> primes_;
    std::vector<double> shifts_;
};

// Gaussian drivers consumed by the path engine. Both expose the same
// step-indexed interface; the engine is templated on the driver type.

struct PseudoDriver {
    PathStream stream;
    double gaussian(uint64_t k) const { return stream.gaussian(k); }
    GaussianPair gaussian_pair(uint64_t k) const { return stream.gaussian_pair(k); }
};

struct HaltonDriver {
    const HaltonTable* table;
    uint64_t index;   // point index = path index
    int pair_stride;  // 1 for 1-D models (dim k), 2 for SV (dims 2k, 2k+1)

    double gaussian(uint64_t k) const {
        return table->gaussian(index, static_cast<int>(k) * pair_stride);
    }
    GaussianPair gaussian_pair(uint64_t k) const {
        int d = static_cast<int>(k) * pair_stride;
        return {table->gaussian(index, d), table->gaussian(index, d + 1)};
    }
};

} // namespace barriermc
