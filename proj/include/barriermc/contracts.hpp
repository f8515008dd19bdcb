#pragma once

#include <stdexcept>
#include <variant>

namespace barriermc {

// Knock-out call contract: payoff (X_T - strike)+ paid only if the path
// never leaves the alive region before maturity.

struct VanillaCall {
    double strike;
    double operator()(double x) const { return x > strike ? x - strike : 0.0; }
};

struct DownAndOut {
    double barrier; // K; alive region is x > K
};

struct DoubleOut {
    double barrier; // K
    double width;   // K'; alive region is K < x < K + K'
};

using BarrierGeometry = std::variant<DownAndOut, DoubleOut>;

struct BarrierContract {
    VanillaCall payoff;
    BarrierGeometry geometry;
    double maturity;

    void validate() const {
        if (!(maturity > 0.0))
            throw std::invalid_argument("contract: maturity T must be > 0");
        if (!(payoff.strike > 0.0))
            throw std::invalid_argument("contract: strike must be > 0");
        if (const auto* d = std::get_if<DoubleOut>(&geometry)) {
            if (!(d->width > 0.0))
                throw std::invalid_argument("contract: corridor width K' must be > 0");
        }
    }

    // Spot must start strictly inside the alive region.
    void validate_spot(double x0) const {
        validate();
        if (const auto* s = std::get_if<DownAndOut>(&geometry)) {
            if (!(x0 > s->barrier))
                throw std::invalid_argument("contract: x0 must lie above the barrier K");
        } else {
            const auto& d = std::get<DoubleOut>(geometry);
            if (!(x0 > d.barrier && x0 < d.barrier + d.width))
                throw std::invalid_argument(
                    "contract: x0 must lie strictly inside the corridor (K, K+K')");
        }
    }

    static BarrierContract down_and_out(double strike, double barrier, double maturity) {
        return {VanillaCall{strike}, DownAndOut{barrier}, maturity};
    }
    static BarrierContract double_out(double strike, double barrier, double width,
                                      double maturity) {
        return {VanillaCall{strike}, DoubleOut{barrier, width}, maturity};
    }
};

} // namespace barriermc
