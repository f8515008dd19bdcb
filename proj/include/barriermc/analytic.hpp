#pragma once

#include <cmath>
#include <stdexcept>

#include "normal.hpp"

namespace barriermc {

// Closed-form references. All prices are plain (undiscounted) expectations:
// the rate r enters only through the drift, and e^{rT} multiplies the asset
// leg of the call value.

// Undiscounted Black-Scholes down-and-out call E[(X_T - S)+ 1{tau > T}],
// barrier K below the spot:
//   price = V(x0) - (K/x0)^(2r/sigma^2 - 1) V(K^2/x0)
//   V(x)  = x e^{rT} (1 - Phi(d+(x))) - S (1 - Phi(d-(x)))
//   d+-(x) = [log(S/x) - (r +- sigma^2/2) T] / (sigma sqrt(T))
inline double bs_barrier_exact(double x0, double strike, double barrier, double sigma,
                               double rate, double maturity) {
    if (!(barrier > 0.0) || !(x0 > barrier))
        throw std::domain_error("bs_barrier_exact: requires x0 > K > 0");
    if (!(sigma > 0.0))
        throw std::domain_error("bs_barrier_exact: requires sigma > 0");
    if (!(maturity > 0.0))
        throw std::domain_error("bs_barrier_exact: requires T > 0");

    const double sqt = sigma * std::sqrt(maturity);
    auto vcall = [&](double x) {
        const double dplus = (std::log(strike / x) - (rate + 0.5 * sigma * sigma) * maturity) / sqt;
        const double dminus = (std::log(strike / x) - (rate - 0.5 * sigma * sigma) * maturity) / sqt;
        return x * std::exp(rate * maturity) * (1.0 - norm_cdf(dplus)) -
               strike * (1.0 - norm_cdf(dminus));
    };
    const double reflection_weight =
        std::pow(barrier / x0, 2.0 * rate / (sigma * sigma) - 1.0);
    return vcall(x0) - reflection_weight * vcall(barrier * barrier / x0);
}

// Undiscounted Bachelier call value E[(x + sigma W_T - S)+].
inline double bachelier_call(double x, double strike, double sigma, double maturity) {
    const double s = sigma * std::sqrt(maturity);
    if (s == 0.0) return x > strike ? x - strike : 0.0;
    const double d = (x - strike) / s;
    return (x - strike) * norm_cdf(d) + s * norm_pdf(d);
}

// Down-and-out call under arithmetic Brownian motion X = x0 + sigma W. The
// reflection principle gives the killed terminal density directly, and for
// S >= K the price collapses to a difference of two Bachelier calls.
inline double bachelier_barrier_exact(double x0, double strike, double barrier, double sigma,
                                      double maturity) {
    if (!(x0 > barrier))
        throw std::domain_error("bachelier_barrier_exact: requires x0 > K");
    if (!(sigma >= 0.0) || !(maturity > 0.0))
        throw std::domain_error("bachelier_barrier_exact: requires sigma >= 0, T > 0");
    return bachelier_call(x0, strike, sigma, maturity) -
           bachelier_call(2.0 * barrier - x0, strike, sigma, maturity);
}

inline double relative_error(double estimate, double truth) {
    if (truth == 0.0)
        throw std::domain_error("relative_error: truth must be nonzero");
    return std::abs(estimate - truth) / std::abs(truth);
}

} // namespace barriermc
