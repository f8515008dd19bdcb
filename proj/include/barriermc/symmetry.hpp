#pragma once

#include <cmath>
#include <cstdint>

#include "models.hpp"

namespace barriermc {

// Barrier symmetrization: coefficient transforms that make the modified
// process distribution-symmetric about the barrier(s) while matching the
// original process up to the first hitting time. Pricing then needs no
// path monitoring: a knock-out expectation becomes a difference of two
// path-independent expectations of the transformed process.

// ---------------------------------------------------------------------------
// Single barrier, 1-D. Below the barrier the diffusion is mirrored and the
// drift mirrored with a sign flip:
//   sigma~(x) = sigma(x)      for x > K,   sigma(2K - x)  for x <= K
//   mu~(x)    = mu(x)         for x > K,  -mu(2K - x)     for x <= K
template <class C>
struct Symmetrized1D {
    static_assert(C::dimension == 1, "Symmetrized1D requires a 1-D coefficient set");
    static constexpr int dimension = 1;

    C base;
    double barrier;

    double sigma_at(double x) const {
        return x > barrier ? base.sigma_at(x) : base.sigma_at(2.0 * barrier - x);
    }
    double mu_at(double x) const {
        return x > barrier ? base.mu_at(x) : -base.mu_at(2.0 * barrier - x);
    }
};

template <class C>
inline Symmetrized1D<C> symmetrize_single_1d(const C& coeffs, double barrier) {
    return {coeffs, barrier};
}

// ---------------------------------------------------------------------------
// Single barrier, stochastic volatility. Only the price leg is transformed;
// the V dynamics are untouched. The mirrored diffusion carries a sign flip
// here (either sign induces the same law; this is the convention under
// which the antisymmetry identities below hold exactly):
//   sigma11~(x,v) = sigma11(x,v)  for x >= K,  -sigma11(2K - x, v)  for x < K
//   mu1~(x,v)     = mu1(x,v)      for x >= K,  -mu1(2K - x, v)      for x < K
template <class C>
struct SymmetrizedSv {
    static_assert(C::dimension == 2, "SymmetrizedSv requires an SV coefficient set");
    static constexpr int dimension = 2;

    C base;
    double barrier;

    double sigma11(double x, double v) const {
        return x >= barrier ? base.sigma11(x, v) : -base.sigma11(2.0 * barrier - x, v);
    }
    double mu1(double x, double v) const {
        return x >= barrier ? base.mu1(x, v) : -base.mu1(2.0 * barrier - x, v);
    }
    double sigma21(double v) const { return base.sigma21(v); }
    double sigma22(double v) const { return base.sigma22(v); }
    double mu2(double v) const { return base.mu2(v); }
};

template <class C>
inline SymmetrizedSv<C> symmetrize_single_sv(const C& coeffs, double barrier) {
    return {coeffs, barrier};
}

// ---------------------------------------------------------------------------
// Double barrier (corridor (K, K+K')). Coefficients are extended from the
// fundamental band [K, K+K') by periodic reflection with period 2K'. The
// extension is an infinite alternating series of band indicators; it
// collapses to one term per point, selected by the band index
// m(x) = floor((x - K)/K').

struct BandMap {
    double barrier; // K
    double width;   // K'

    // Band index under the half-open convention [K + mK', K + (m+1)K').
    // The floor is fixed up so the index is always consistent with band
    // edges computed as barrier + m*width, matching the indicator form.
    long long band_index(double x) const {
        long long m = static_cast<long long>(std::floor((x - barrier) / width));
        while (x < barrier + static_cast<double>(m) * width) --m;
        while (x >= barrier + static_cast<double>(m + 1) * width) ++m;
        return m;
    }

    struct Image {
        double arg;  // mapped argument in the fundamental band
        double sign; // +1 on even bands, -1 on odd bands
    };

    Image map_to_fundamental(double x) const {
        long long m = band_index(x);
        if ((m & 1LL) == 0) {
            return {x - static_cast<double>(m) * width, 1.0};
        }
        return {2.0 * barrier - (x - static_cast<double>(m + 1) * width), -1.0};
    }
};

// Folded coefficient sets: sigma^(x,v) = s * sigma11(y,v) and
// mu^(x,v) = s * mu1(y,v), where (y, s) is the band image of x.
template <class C>
struct FoldedSv {
    static_assert(C::dimension == 2, "FoldedSv requires an SV coefficient set");
    static constexpr int dimension = 2;

    C base;
    BandMap bands;

    double sigma11(double x, double v) const {
        auto im = bands.map_to_fundamental(x);
        return im.sign * base.sigma11(im.arg, v);
    }
    double mu1(double x, double v) const {
        auto im = bands.map_to_fundamental(x);
        return im.sign * base.mu1(im.arg, v);
    }
    double sigma21(double v) const { return base.sigma21(v); }
    double sigma22(double v) const { return base.sigma22(v); }
    double mu2(double v) const { return base.mu2(v); }
};

template <class C>
struct Folded1D {
    static_assert(C::dimension == 1, "Folded1D requires a 1-D coefficient set");
    static constexpr int dimension = 1;

    C base;
    BandMap bands;

    double sigma_at(double x) const {
        auto im = bands.map_to_fundamental(x);
        return im.sign * base.sigma_at(im.arg);
    }
    double mu_at(double x) const {
        auto im = bands.map_to_fundamental(x);
        return im.sign * base.mu_at(im.arg);
    }
};

template <class C>
inline auto fold_double(const C& coeffs, double barrier, double width) {
    if (!(width > 0.0))
        throw std::invalid_argument("fold_double: corridor width K' must be > 0");
    if constexpr (C::dimension == 2) {
        return FoldedSv<C>{coeffs, BandMap{barrier, width}};
    } else {
        return Folded1D<C>{coeffs, BandMap{barrier, width}};
    }
}

// ---------------------------------------------------------------------------
// Terminal payoff maps.

// Single barrier: g(x) = f(x) 1{x>K} - f(2K-x) 1{x<K}; zero at x = K.
template <class F>
inline double reflect_payoff_single(const F& payoff, double barrier, double x) {
    if (x > barrier) return payoff(x);
    if (x < barrier) return -payoff(2.0 * barrier - x);
    return 0.0;
}

// Double barrier: the terminal value is read back through the same band
// map; no series truncation is involved.
template <class F>
inline double unfold_payoff_double(const F& payoff, double barrier, double width, double x) {
    auto im = BandMap{barrier, width}.map_to_fundamental(x);
    return im.sign * payoff(im.arg);
}

} // namespace barriermc
