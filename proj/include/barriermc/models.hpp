#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace barriermc {

// Drift/diffusion coefficient sets for the supported models, in the
// canonical forms dX = sigma(X)dW + mu(X)dt (1-D) and
//   dX = sigma11(X,V)dW + mu1(X,V)dt
//   dV = sigma21(V)dW + sigma22(V)dB + mu2(V)dt   (stochastic volatility)
// with W, B independent. Coefficient sets are immutable values, safe to
// evaluate concurrently.

enum class Model1DKind { BlackScholes, Cev, ArithmeticBm };
enum class SvKind { Heston, LambdaSabr };

struct Model1D {
    Model1DKind kind = Model1DKind::BlackScholes;
    double rate = 0.0;  // r
    double sigma = 0.0; // volatility scale
    double beta = 1.0;  // CEV elasticity
    double x0 = 0.0;

    void validate() const {
        if (!(rate >= 0.0))
            throw std::invalid_argument("model: rate r must be >= 0");
        if (!(sigma >= 0.0))
            throw std::invalid_argument("model: sigma must be >= 0");
        if (kind == Model1DKind::Cev && !(beta >= 0.5))
            throw std::invalid_argument("model: CEV elasticity beta must be >= 1/2");
    }

    static Model1D black_scholes(double sigma, double rate, double x0) {
        return {Model1DKind::BlackScholes, rate, sigma, 1.0, x0};
    }
    static Model1D cev(double sigma, double beta, double rate, double x0) {
        return {Model1DKind::Cev, rate, sigma, beta, x0};
    }
    static Model1D arithmetic_bm(double sigma, double x0) {
        return {Model1DKind::ArithmeticBm, 0.0, sigma, 1.0, x0};
    }
};

struct SvModel {
    SvKind kind = SvKind::Heston;
    double rate = 0.0;           // r
    double mean_reversion = 0.0; // kappa (Heston) or lambda (lambda-SABR)
    double theta = 0.0;          // long-run level
    double vol_of_vol = 0.0;     // nu
    double rho = 0.0;            // correlation of the V leg with W
    double beta = 1.0;           // lambda-SABR elasticity
    double x0 = 0.0;
    double v0 = 0.0;             // variance (Heston) or volatility (lambda-SABR)

    void validate() const {
        if (!(rate >= 0.0))
            throw std::invalid_argument("model: rate r must be >= 0");
        if (!(mean_reversion > 0.0))
            throw std::invalid_argument("model: mean reversion (kappa/lambda) must be > 0");
        if (!(theta > 0.0))
            throw std::invalid_argument("model: theta must be > 0");
        if (!(vol_of_vol > 0.0))
            throw std::invalid_argument("model: vol-of-vol nu must be > 0");
        if (!(rho >= -1.0 && rho <= 1.0))
            throw std::invalid_argument("model: correlation rho must lie in [-1, 1]");
        if (!(v0 >= 0.0))
            throw std::invalid_argument("model: v0 must be >= 0");
        if (kind == SvKind::LambdaSabr && !(beta >= 0.5))
            throw std::invalid_argument("model: lambda-SABR elasticity beta must be >= 1/2");
    }

    static SvModel heston(double rate, double kappa, double theta, double nu, double rho,
                          double x0, double v0) {
        return {SvKind::Heston, rate, kappa, theta, nu, rho, 1.0, x0, v0};
    }
    static SvModel lambda_sabr(double rate, double lambda, double theta, double nu, double rho,
                               double beta, double x0, double v0) {
        return {SvKind::LambdaSabr, rate, lambda, theta, nu, rho, beta, x0, v0};
    }
};

// 1-D coefficient set. The diffusion argument is floored at zero before the
// power so that sigma stays real when an unkilled path wanders below zero;
// the barrier geometries in scope keep all relevant mass far above 0, so
// the floor never affects a priced expectation.
struct Coefficients1D {
    static constexpr int dimension = 1;

    Model1DKind kind;
    double rate;
    double sigma;
    double beta;

    double sigma_at(double x) const {
        if (kind == Model1DKind::ArithmeticBm) return sigma;
        double xp = x > 0.0 ? x : 0.0;
        if (beta == 1.0) return sigma * xp;
        return sigma * std::pow(xp, beta);
    }

    double mu_at(double x) const {
        if (kind == Model1DKind::ArithmeticBm) return 0.0;
        return rate * x;
    }
};

inline Coefficients1D coefficients_1d(const Model1D& m) {
    m.validate();
    // BlackScholes is CEV with beta = 1; routing both through the same
    // evaluator makes them agree bit-for-bit.
    double beta = (m.kind == Model1DKind::BlackScholes) ? 1.0 : m.beta;
    return {m.kind, m.rate, m.sigma, beta};
}

// Stochastic-volatility coefficient set. Heston uses full truncation: every
// v-dependent coefficient reads v+ = max(v, 0). Lambda-SABR coefficients are
// polynomial in v and are used raw; a negative v only flips the sign of
// sigma11, which leaves the law of X unchanged.
struct CoefficientsSv {
    static constexpr int dimension = 2;

    SvKind kind;
    double rate;
    double mean_reversion;
    double theta;
    double vol_of_vol;
    double rho;
    double beta;

    double sigma11(double x, double v) const {
        if (kind == SvKind::Heston) {
            double vp = v > 0.0 ? v : 0.0;
            return std::sqrt(vp) * x;
        }
        double xp = x > 0.0 ? x : 0.0;
        return v * std::pow(xp, beta);
    }

    double mu1(double x, double /*v*/) const { return rate * x; }

    double sigma21(double v) const {
        if (kind == SvKind::Heston) {
            double vp = v > 0.0 ? v : 0.0;
            return vol_of_vol * rho * std::sqrt(vp);
        }
        return vol_of_vol * rho * v;
    }

    double sigma22(double v) const {
        double orth = std::sqrt(1.0 - rho * rho);
        if (kind == SvKind::Heston) {
            double vp = v > 0.0 ? v : 0.0;
            return vol_of_vol * orth * std::sqrt(vp);
        }
        return vol_of_vol * orth * v;
    }

    double mu2(double v) const {
        if (kind == SvKind::Heston) {
            double vp = v > 0.0 ? v : 0.0;
            return mean_reversion * (theta - vp);
        }
        return mean_reversion * (theta - v);
    }
};

inline CoefficientsSv coefficients_sv(const SvModel& m) {
    m.validate();
    return {m.kind, m.rate, m.mean_reversion, m.theta, m.vol_of_vol, m.rho, m.beta};
}

inline std::string to_string(Model1DKind k) {
    switch (k) {
    case Model1DKind::BlackScholes: return "black_scholes";
    case Model1DKind::Cev: return "cev";
    case Model1DKind::ArithmeticBm: return "arithmetic_bm";
    }
    return "?";
}

inline std::string to_string(SvKind k) {
    return k == SvKind::Heston ? "heston" : "lambda_sabr";
}

} // namespace barriermc
