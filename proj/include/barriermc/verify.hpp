#pragma once

#include <cmath>
#include <cstdint>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "analytic.hpp"
#include "engine.hpp"
#include "harness.hpp"
#include "models.hpp"
#include "pricing.hpp"
#include "symmetry.hpp"

namespace barriermc {

// Self-contained property suite: definitional identities of the coefficient
// transforms, the band fold against its series definition, the coupled-path
// identity, and the statistical self-tests of the symmetrized estimators.

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct VerifyReport {
    std::vector<CheckResult> checks;

    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }

    void print(std::ostream& os) const {
        for (const auto& c : checks)
            os << (c.pass ? "pass" : "FAIL") << "  " << c.name << ": " << c.detail << '\n';
        os << (all_pass() ? "verification passed" : "VERIFICATION FAILED") << " ("
           << checks.size() << " checks)\n";
    }
};

namespace verify_detail {

constexpr uint64_t kVerifySeed = 20240901;

inline double uniform(uint64_t tag, uint64_t i, double lo, double hi) {
    auto b = detail::philox4x32(kVerifySeed, tag, i);
    return lo + (hi - lo) * detail::uniform53(b.w0, b.w1);
}

inline bool close(double a, double b, double tol) {
    double scale = std::max({1.0, std::abs(a), std::abs(b)});
    return std::abs(a - b) <= tol * scale;
}

struct Collector {
    VerifyReport& report;
    void add(const std::string& name, bool pass, const std::string& detail) {
        report.checks.push_back({name, pass, detail});
    }
    void add_max(const std::string& name, double worst, double tol, size_t points) {
        std::ostringstream os;
        os << "max deviation " << worst << " over " << points << " points (tol " << tol << ")";
        add(name, worst <= tol, os.str());
    }
};

// Frozen high-precision references (independent evaluator, 17 digits).
struct Frozen {
    static constexpr double phi_grid[][2] = {
        {-8.0, 6.2209605742717841e-16}, {-6.0, 9.8658764503769814e-10},
        {-4.0, 3.1671241833119921e-05}, {-2.5, 0.0062096653257761352},
        {-1.0, 0.15865525393145705},    {-0.5, 0.3085375387259869},
        {0.0, 0.5},                     {0.3, 0.61791142218895264},
        {1.0, 0.84134474606854295},     {1.959963985, 0.97500000002688156},
        {3.0, 0.99865010196836991},     {5.0, 0.99999971334842812},
        {8.0, 0.99999999999999938}};
    static constexpr double bs_exact[][3] = {
        // sigma, r, undiscounted down-and-out call (x0=100, S=95, K=90, T=1)
        {0.2, 0.00, 8.1713581310806081},
        {0.2, 0.02, 9.311358396800483},
        {0.5, 0.00, 9.3716273755824649},
        {0.5, 0.02, 10.024650509988331}};
    // x0=100, S=95, K=90, sigma=10, T=1; quadrature of the reflected density
    static constexpr double bachelier_value = 6.684897636387014;
    static constexpr double plain_call_value = 10.519541063676971; // x0=100 S=95 sigma=0.2 r=0
};

} // namespace verify_detail

inline VerifyReport verify_properties(int workers = 0) {
    using namespace verify_detail;
    VerifyReport report;
    Collector out{report};

    const auto bs = coefficients_1d(Model1D::black_scholes(0.2, 0.02, 100.0));
    const auto cev = coefficients_1d(Model1D::cev(0.45, 0.75, 0.02, 100.0));
    const auto heston = coefficients_sv(SvModel::heston(0.0, 1.0, 0.03, 0.03, -0.7, 100.0, 0.03));
    const auto sabr =
        coefficients_sv(SvModel::lambda_sabr(0.0, 1.0, 0.03, 0.3, -0.7, 0.75, 100.0, 0.5));

    // --- coefficient evaluation is deterministic --------------------------------
    {
        size_t mismatches = 0;
        const size_t N = 100000;
        for (size_t i = 0; i < N; ++i) {
            double x = uniform(1, i, 0.0, 300.0);
            double v = uniform(2, i, 0.0, 5.0);
            if (cev.sigma_at(x) != cev.sigma_at(x) || cev.mu_at(x) != cev.mu_at(x)) ++mismatches;
            if (heston.sigma11(x, v) != heston.sigma11(x, v)) ++mismatches;
            if (sabr.sigma11(x, v) != sabr.sigma11(x, v)) ++mismatches;
            if (heston.mu2(v) != heston.mu2(v) || sabr.sigma22(v) != sabr.sigma22(v))
                ++mismatches;
        }
        std::ostringstream os;
        os << mismatches << " mismatches over " << N << " states";
        out.add("coefficients: repeated evaluation is bit-identical", mismatches == 0, os.str());
    }

    // --- Black-Scholes == CEV(beta=1) bit-for-bit --------------------------------
    {
        const auto bs2 = coefficients_1d(Model1D::black_scholes(0.37, 0.015, 100.0));
        const auto cev1 = coefficients_1d(Model1D::cev(0.37, 1.0, 0.015, 100.0));
        size_t mismatches = 0;
        const size_t N = 100000;
        for (size_t i = 0; i < N; ++i) {
            double x = uniform(3, i, 1e-6, 500.0);
            if (bs2.sigma_at(x) != cev1.sigma_at(x)) ++mismatches;
            if (bs2.mu_at(x) != cev1.mu_at(x)) ++mismatches;
        }
        std::ostringstream os;
        os << mismatches << " mismatches over " << N << " points";
        out.add("coefficients: black_scholes == cev(beta=1) bit-for-bit", mismatches == 0,
                os.str());
    }

    // --- Heston correlation decomposition ----------------------------------------
    {
        double worst = 0.0;
        const size_t N = 100000;
        for (size_t i = 0; i < N; ++i) {
            double v = uniform(4, i, 0.0, 5.0);
            double lhs = heston.sigma21(v) * heston.sigma21(v) +
                         heston.sigma22(v) * heston.sigma22(v);
            double rhs = heston.vol_of_vol * heston.vol_of_vol * (v > 0.0 ? v : 0.0);
            double denom = std::max(rhs, 1e-300);
            worst = std::max(worst, std::abs(lhs - rhs) / denom);
        }
        out.add_max("coefficients: heston sigma21^2 + sigma22^2 == nu^2 v+", worst, 1e-12, N);
    }

    // --- single-barrier symmetrized evaluator identities --------------------------
    {
        const double K = 90.0;
        const auto sym = symmetrize_single_1d(cev, K);
        double worst = 0.0;
        const size_t N = 100000;
        for (size_t i = 0; i < N; ++i) {
            double x = uniform(5, i, K - 80.0, K + 80.0);
            if (std::abs(x - K) < 1e-9) continue;
            double refl = 2.0 * K - x;
            double ds = std::abs(sym.sigma_at(x) - sym.sigma_at(refl));
            double dm = std::abs(sym.mu_at(x) + sym.mu_at(refl));
            double scale = std::max({1.0, std::abs(sym.sigma_at(x)), std::abs(sym.mu_at(x))});
            worst = std::max(worst, std::max(ds, dm) / scale);
        }
        out.add_max("symmetry: 1-D sigma~ even / mu~ odd about K", worst, 1e-12, N);
    }
    {
        const double K = 90.0;
        const auto sym = symmetrize_single_sv(sabr, K);
        double worst = 0.0;
        const size_t N = 100000;
        for (size_t i = 0; i < N; ++i) {
            double x = uniform(6, i, K - 80.0, K + 80.0);
            double v = uniform(7, i, -1.0, 2.0);
            if (std::abs(x - K) < 1e-9) continue;
            double refl = 2.0 * K - x;
            double ds = std::abs(sym.sigma11(x, v) + sym.sigma11(refl, v));
            double dm = std::abs(sym.mu1(x, v) + sym.mu1(refl, v));
            double scale = std::max({1.0, std::abs(sym.sigma11(x, v)), std::abs(sym.mu1(x, v))});
            worst = std::max(worst, std::max(ds, dm) / scale);
        }
        out.add_max("symmetry: SV sigma11~ and mu1~ antisymmetric about K", worst, 1e-12, N);
    }

    // --- double-barrier fold: periodicity, antisymmetry, band containment ---------
    {
        const double K = 85.0, Kp = 30.0;
        const auto folded = fold_double(heston, K, Kp);
        const BandMap bands{K, Kp};
        double worst = 0.0;
        size_t outside = 0;
        const size_t N = 100000;
        for (size_t i = 0; i < N; ++i) {
            double x = uniform(8, i, K - 10.0 * Kp, K + 10.0 * Kp);
            double v = uniform(9, i, 0.0, 2.0);
            auto im = bands.map_to_fundamental(x);
            if (!(im.arg >= K && im.arg < K + Kp)) ++outside;
            double p = std::abs(folded.sigma11(x + 2.0 * Kp, v) - folded.sigma11(x, v));
            double a = std::abs(folded.sigma11(2.0 * K - x, v) + folded.sigma11(x, v));
            double pm = std::abs(folded.mu1(x + 2.0 * Kp, v) - folded.mu1(x, v));
            double am = std::abs(folded.mu1(2.0 * K - x, v) + folded.mu1(x, v));
            double scale = std::max({1.0, std::abs(folded.sigma11(x, v))});
            worst = std::max(worst, std::max(std::max(p, a), std::max(pm, am)) / scale);
        }
        out.add_max("symmetry: folded coefficients periodic (2K') and antisymmetric (K)", worst,
                    1e-12, N);
        std::ostringstream os;
        os << outside << " of " << N << " mapped arguments left [K, K+K')";
        out.add("symmetry: band map lands in the fundamental band", outside == 0, os.str());
    }

    // --- fold equals the brute-force truncated series ------------------------------
    {
        const double K = 85.0, Kp = 30.0;
        const auto folded = fold_double(heston, K, Kp);
        auto series_sigma = [&](double x, double v) {
            double s = 0.0;
            for (int n = -50; n <= 50; ++n) {
                double lo_e = K + static_cast<double>(2 * n) * Kp;
                double hi_e = K + static_cast<double>(2 * n + 1) * Kp;
                if (x >= lo_e && x < hi_e)
                    s += heston.sigma11(x - static_cast<double>(2 * n) * Kp, v);
                double lo_o = K + static_cast<double>(2 * n - 1) * Kp;
                double hi_o = K + static_cast<double>(2 * n) * Kp;
                if (x >= lo_o && x < hi_o)
                    s -= heston.sigma11(2.0 * K - (x - static_cast<double>(2 * n) * Kp), v);
            }
            return s;
        };
        auto series_mu = [&](double x, double v) {
            double s = 0.0;
            for (int n = -50; n <= 50; ++n) {
                double lo_e = K + static_cast<double>(2 * n) * Kp;
                double hi_e = K + static_cast<double>(2 * n + 1) * Kp;
                if (x >= lo_e && x < hi_e)
                    s += heston.mu1(x - static_cast<double>(2 * n) * Kp, v);
                double lo_o = K + static_cast<double>(2 * n - 1) * Kp;
                double hi_o = K + static_cast<double>(2 * n) * Kp;
                if (x >= lo_o && x < hi_o)
                    s -= heston.mu1(2.0 * K - (x - static_cast<double>(2 * n) * Kp), v);
            }
            return s;
        };
        size_t mismatches = 0;
        const size_t N = 10000;
        for (size_t i = 0; i < N; ++i) {
            double x = uniform(10, i, K - 20.0 * Kp, K + 20.0 * Kp);
            double v = uniform(11, i, 0.0, 2.0);
            if (folded.sigma11(x, v) != series_sigma(x, v)) ++mismatches;
            if (folded.mu1(x, v) != series_mu(x, v)) ++mismatches;
        }
        std::ostringstream os;
        os << mismatches << " mismatches over " << N << " points (exact comparison)";
        out.add("symmetry: closed-form fold == truncated series (n in [-50,50])",
                mismatches == 0, os.str());
    }

    // --- payoff maps ---------------------------------------------------------------
    {
        const double K = 90.0;
        const VanillaCall call{95.0};
        double worst = 0.0;
        const size_t N = 100000;
        for (size_t i = 0; i < N; ++i) {
            double x = uniform(12, i, K - 80.0, K + 80.0);
            if (std::abs(x - K) < 1e-9) continue;
            double g1 = reflect_payoff_single(call, K, x);
            double g2 = reflect_payoff_single(call, K, 2.0 * K - x);
            worst = std::max(worst, std::abs(g1 + g2) / std::max(1.0, std::abs(g1)));
        }
        out.add_max("symmetry: reflected payoff antisymmetric about K", worst, 1e-12, N);

        const double Kd = 85.0, Kpd = 30.0;
        size_t mismatches = 0;
        for (size_t i = 0; i < 10000; ++i) {
            double x = uniform(13, i, Kd + 1e-9, Kd + Kpd - 1e-9);
            if (unfold_payoff_double(call, Kd, Kpd, x) != call(x)) ++mismatches;
        }
        out.add("symmetry: double-barrier unfold is the identity on the fundamental band",
                mismatches == 0, std::to_string(mismatches) + " mismatches over 10000 points");
    }

    // --- coupled-path identity -------------------------------------------------------
    {
        const double K = 90.0;
        const auto base = coefficients_1d(Model1D::black_scholes(0.5, 0.02, 100.0));
        const auto sym = symmetrize_single_1d(base, K);
        const TimeGrid grid(1.0, 100);
        size_t bad_paths = 0, crossing_paths = 0;
        const uint64_t paths = 1000;
        std::vector<double> orig(grid.steps + 1), tilde(grid.steps + 1);
        for (uint64_t p = 0; p < paths; ++p) {
            PseudoDriver drv{PathStream(kVerifySeed + 7, p)};
            simulate_terminal(base, 100.0, grid, drv,
                              [&](int k, double x) { orig[k] = x; });
            simulate_terminal(sym, 100.0, grid, drv,
                              [&](int k, double x) { tilde[k] = x; });
            int kstar = grid.steps;
            for (int k = 0; k <= grid.steps; ++k) {
                if (orig[k] <= K) {
                    kstar = k;
                    ++crossing_paths;
                    break;
                }
            }
            for (int k = 0; k <= kstar; ++k) {
                if (orig[k] != tilde[k]) {
                    ++bad_paths;
                    break;
                }
            }
        }
        std::ostringstream os;
        os << bad_paths << " of " << paths << " paths disagreed before the hit ("
           << crossing_paths << " crossed the barrier)";
        out.add("engine: original and symmetrized paths agree bit-for-bit up to the hit",
                bad_paths == 0 && crossing_paths > 0, os.str());
    }

    // --- APCS odd-moment statistics ----------------------------------------------------
    {
        const double K = 90.0;
        const auto sym = symmetrize_single_1d(coefficients_1d(Model1D::black_scholes(0.2, 0.0, K)),
                                              K);
        const TimeGrid grid(1.0, 100);
        const uint64_t M = 1000000;
        std::vector<double> terminal(M);
        run_paths(M, workers, [&](uint64_t i) {
            PseudoDriver drv{PathStream(kVerifySeed + 11, i)};
            terminal[i] = simulate_terminal(sym, K, grid, drv).x;
            return 0.0;
        });
        struct Moment {
            const char* name;
            double (*g)(double);
        };
        const Moment moments[] = {
            {"u+", [](double u) { return u > 0.0 ? u : 0.0; }},
            {"u^3", [](double u) { return u * u * u; }},
            {"sin(u)", [](double u) { return std::sin(u); }},
        };
        bool all = true;
        std::ostringstream os;
        for (const auto& m : moments) {
            double sum = 0.0, sumsq = 0.0;
            for (uint64_t i = 0; i < M; ++i) {
                double u = terminal[i] - K;
                double d = m.g(u) - m.g(-u);
                sum += d;
                sumsq += d * d;
            }
            double mean = sum / M;
            double se = std::sqrt((sumsq - sum * sum / M) / (M - 1.0) / M);
            bool ok = std::abs(mean) <= 3.0 * se;
            all = all && ok;
            os << m.name << ": " << mean << " (3se " << 3.0 * se << ") ";
        }
        out.add("pricing: APCS odd moments vanish for the symmetrized process started at K", all,
                os.str());
    }

    // --- arithmetic-BM estimator against the reflection-principle oracle ---------------
    {
        Model1D abm = Model1D::arithmetic_bm(10.0, 100.0);
        BarrierContract contract = BarrierContract::down_and_out(95.0, 90.0, 1.0);
        McConfig cfg;
        cfg.steps = 200;
        cfg.trials = 1000000;
        cfg.seed = kVerifySeed + 13;
        cfg.workers = workers;
        PriceEstimate est = price_pcs(abm, contract, cfg);
        double truth = bachelier_barrier_exact(100.0, 95.0, 90.0, 10.0, 1.0);
        double dev = std::abs(est.mean - truth);
        std::ostringstream os;
        os << "estimate " << est.mean << " vs " << truth << ", |diff| " << dev << " (3se "
           << 3.0 * est.std_error << ")";
        out.add("pricing: symmetrized estimator matches the Bachelier barrier value",
                dev <= 3.0 * est.std_error, os.str());
    }

    // --- normal distribution function ----------------------------------------------------
    {
        double worst = 0.0;
        for (const auto& row : Frozen::phi_grid)
            worst = std::max(worst, std::abs(norm_cdf(row[0]) - row[1]));
        out.add_max("analytic: Phi matches the high-precision reference", worst, 1e-12,
                    std::size(Frozen::phi_grid));

        double worst_sym = 0.0;
        bool monotone = true;
        double prev = -1.0;
        for (int i = 0; i <= 1600; ++i) {
            double z = -8.0 + i * 0.01;
            worst_sym = std::max(worst_sym, std::abs(norm_cdf(-z) - (1.0 - norm_cdf(z))));
            double c = norm_cdf(z);
            if (c < prev) monotone = false;
            prev = c;
        }
        std::ostringstream os;
        os << "max |Phi(-z)-(1-Phi(z))| = " << worst_sym << ", monotone = " << monotone;
        out.add("analytic: Phi symmetry and monotonicity", worst_sym <= 1e-15 && monotone,
                os.str());
    }

    // --- closed forms against frozen references -------------------------------------------
    {
        double worst = 0.0;
        for (const auto& row : Frozen::bs_exact) {
            double v = bs_barrier_exact(100.0, 95.0, 90.0, row[0], row[1], 1.0);
            worst = std::max(worst, std::abs(v - row[2]));
        }
        out.add_max("analytic: Black-Scholes barrier formula vs high-precision reference", worst,
                    1e-9, std::size(Frozen::bs_exact));

        double bach = bachelier_barrier_exact(100.0, 95.0, 90.0, 10.0, 1.0);
        out.add_max("analytic: Bachelier barrier formula vs quadrature reference",
                    std::abs(bach - Frozen::bachelier_value), 1e-12, 1);

        double lim = bs_barrier_exact(100.0, 95.0, 1e-6, 0.2, 0.0, 1.0);
        out.add_max("analytic: barrier formula degenerates to the plain call as K -> 0",
                    std::abs(lim - Frozen::plain_call_value), 1e-9, 1);
    }

    return report;
}

} // namespace barriermc
