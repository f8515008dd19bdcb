#include <catch2/catch_amalgamated.hpp>

#include <barriermc/contracts.hpp>
#include <barriermc/models.hpp>
#include <barriermc/rng.hpp>
#include <barriermc/symmetry.hpp>

using namespace barriermc;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
double uniform(uint64_t tag, uint64_t i, double lo, double hi) {
    auto b = barriermc::detail::philox4x32(321, tag, i);
    return lo + (hi - lo) * barriermc::detail::uniform53(b.w0, b.w1);
}
} // namespace

TEST_CASE("single-barrier 1-D symmetrization", "[symmetry]") {
    const double K = 90.0;
    auto bs = coefficients_1d(Model1D::black_scholes(0.2, 0.02, 100.0));
    auto sym = symmetrize_single_1d(bs, K);

    REQUIRE(sym.sigma_at(80.0) == bs.sigma_at(100.0)); // reflection, no sign flip
    REQUIRE(sym.sigma_at(80.0) == 20.0);
    REQUIRE(sym.mu_at(80.0) == -bs.mu_at(100.0)); // drift antisymmetry
    REQUIRE(sym.mu_at(80.0) == -2.0);
    for (double x : {90.000001, 95.0, 130.0, 250.0}) {
        REQUIRE(sym.sigma_at(x) == bs.sigma_at(x)); // identity branch above K
        REQUIRE(sym.mu_at(x) == bs.mu_at(x));
    }
    // x = K belongs to the reflected branch
    REQUIRE(sym.sigma_at(K) == bs.sigma_at(K));
    REQUIRE(sym.mu_at(K) == -bs.mu_at(K));
}

TEST_CASE("single-barrier SV symmetrization carries a sign flip", "[symmetry]") {
    const double K = 90.0;
    auto h = coefficients_sv(SvModel::heston(0.0, 1.0, 0.03, 0.03, -0.7, 100.0, 0.04));
    auto hs = symmetrize_single_sv(h, K);
    REQUIRE_THAT(hs.sigma11(80.0, 0.04), WithinRel(-20.0, 1e-14));
    for (double v : {0.0, 0.04, 1.0}) REQUIRE(hs.mu1(80.0, v) == 0.0); // r = 0

    auto s = coefficients_sv(SvModel::lambda_sabr(0.0, 1.0, 0.03, 0.3, -0.7, 0.75, 100.0, 0.5));
    auto ss = symmetrize_single_sv(s, K);
    // -0.5 * 100^0.75, frozen from an independent evaluator
    REQUIRE_THAT(ss.sigma11(80.0, 0.5), WithinRel(-15.811388300841897, 1e-14));
    // x = K belongs to the upper branch in the SV convention
    REQUIRE(ss.sigma11(K, 0.5) == s.sigma11(K, 0.5));
    // V dynamics untouched
    REQUIRE(ss.sigma21(0.5) == s.sigma21(0.5));
    REQUIRE(ss.sigma22(0.5) == s.sigma22(0.5));
    REQUIRE(ss.mu2(0.5) == s.mu2(0.5));
}

TEST_CASE("symmetrized evaluator identities hold at random points", "[symmetry]") {
    const double K = 90.0;
    auto cev = coefficients_1d(Model1D::cev(0.45, 0.75, 0.02, 100.0));
    auto sym1 = symmetrize_single_1d(cev, K);
    auto sabr = coefficients_sv(SvModel::lambda_sabr(0.02, 1.0, 0.03, 0.3, -0.7, 0.75, 100.0, 0.5));
    auto sym2 = symmetrize_single_sv(sabr, K);
    for (uint64_t i = 0; i < 20000; ++i) {
        double x = uniform(1, i, K - 70.0, K + 70.0);
        if (std::abs(x - K) < 1e-9) continue;
        double r = 2.0 * K - x;
        double scale = std::max(1.0, std::abs(sym1.sigma_at(x)));
        REQUIRE_THAT(sym1.sigma_at(r), WithinAbs(sym1.sigma_at(x), 1e-12 * scale));
        REQUIRE_THAT(sym1.mu_at(r), WithinAbs(-sym1.mu_at(x), 1e-12 * scale));
        double v = uniform(2, i, 0.0, 1.5);
        scale = std::max(1.0, std::abs(sym2.sigma11(x, v)));
        REQUIRE_THAT(sym2.sigma11(r, v), WithinAbs(-sym2.sigma11(x, v), 1e-12 * scale));
        REQUIRE_THAT(sym2.mu1(r, v), WithinAbs(-sym2.mu1(x, v), 1e-12 * scale));
    }
}

TEST_CASE("double-barrier fold selects the series term in closed form", "[symmetry]") {
    const double K = 85.0, Kp = 30.0;
    auto h = coefficients_sv(SvModel::heston(0.02, 1.0, 0.03, 0.03, -0.7, 100.0, 0.03));
    auto folded = fold_double(h, K, Kp);

    // fundamental band: identity
    REQUIRE(folded.sigma11(100.0, 0.03) == h.sigma11(100.0, 0.03));
    REQUIRE(folded.mu1(100.0, 0.03) == h.mu1(100.0, 0.03));
    // first odd band: reflected argument 2*85 - (120 - 2*30) = 110
    REQUIRE(folded.sigma11(120.0, 0.03) == -h.sigma11(110.0, 0.03));
    REQUIRE(folded.mu1(120.0, 0.03) == -h.mu1(110.0, 0.03));
    // V dynamics untouched
    REQUIRE(folded.sigma21(0.03) == h.sigma21(0.03));

    REQUIRE_THROWS_AS(fold_double(h, K, 0.0), std::invalid_argument);
    REQUIRE_THROWS_AS(fold_double(h, K, -1.0), std::invalid_argument);
}

TEST_CASE("fold equals the brute-force truncated series exactly", "[symmetry]") {
    const double K = 85.0, Kp = 30.0;
    auto h = coefficients_sv(SvModel::heston(0.02, 1.0, 0.03, 0.03, -0.7, 100.0, 0.03));
    auto folded = fold_double(h, K, Kp);
    auto series = [&](double x, double v) {
        double s = 0.0;
        for (int n = -50; n <= 50; ++n) {
            if (x >= K + static_cast<double>(2 * n) * Kp &&
                x < K + static_cast<double>(2 * n + 1) * Kp)
                s += h.sigma11(x - static_cast<double>(2 * n) * Kp, v);
            if (x >= K + static_cast<double>(2 * n - 1) * Kp &&
                x < K + static_cast<double>(2 * n) * Kp)
                s -= h.sigma11(2.0 * K - (x - static_cast<double>(2 * n) * Kp), v);
        }
        return s;
    };
    for (uint64_t i = 0; i < 2000; ++i) {
        double x = uniform(3, i, K - 20.0 * Kp, K + 20.0 * Kp);
        double v = uniform(4, i, 0.0, 1.0);
        REQUIRE(folded.sigma11(x, v) == series(x, v));
    }
}

TEST_CASE("band map properties", "[symmetry]") {
    const BandMap bands{85.0, 30.0};
    for (uint64_t i = 0; i < 20000; ++i) {
        double x = uniform(5, i, 85.0 - 300.0, 85.0 + 300.0);
        auto im = bands.map_to_fundamental(x);
        REQUIRE(im.arg >= 85.0);
        REQUIRE(im.arg < 115.0);
        REQUIRE((im.sign == 1.0 || im.sign == -1.0));
    }
    REQUIRE(bands.band_index(100.0) == 0);
    REQUIRE(bands.band_index(120.0) == 1);
    REQUIRE(bands.band_index(160.0) == 2);
    REQUIRE(bands.band_index(80.0) == -1);
}

TEST_CASE("folded coefficients are periodic with period 2K'", "[symmetry]") {
    auto cev = coefficients_1d(Model1D::cev(0.45, 0.75, 0.02, 100.0));
    auto folded = fold_double(cev, 85.0, 30.0);
    for (uint64_t i = 0; i < 20000; ++i) {
        double x = uniform(6, i, -200.0, 400.0);
        double scale = std::max(1.0, std::abs(folded.sigma_at(x)));
        REQUIRE_THAT(folded.sigma_at(x + 60.0), WithinAbs(folded.sigma_at(x), 1e-12 * scale));
        REQUIRE_THAT(folded.mu_at(x + 60.0), WithinAbs(folded.mu_at(x), 1e-12 * scale));
    }
}

TEST_CASE("reflected single-barrier payoff", "[symmetry]") {
    const VanillaCall call{95.0};
    const double K = 90.0;
    REQUIRE(reflect_payoff_single(call, K, 100.0) == 5.0);
    REQUIRE(reflect_payoff_single(call, K, 80.0) == -5.0); // -(2*90 - 80 - 95)+
    REQUIRE(reflect_payoff_single(call, K, 92.0) == 0.0);  // 92 < 95, reflected 88 < 95
    REQUIRE(reflect_payoff_single(call, K, 90.0) == 0.0);  // exactly at the barrier
    for (uint64_t i = 0; i < 20000; ++i) {
        double x = uniform(7, i, 20.0, 160.0);
        if (std::abs(x - K) < 1e-9) continue;
        double g = reflect_payoff_single(call, K, x);
        double gr = reflect_payoff_single(call, K, 2.0 * K - x);
        REQUIRE_THAT(gr, WithinAbs(-g, 1e-12 * std::max(1.0, std::abs(g))));
    }
}

TEST_CASE("unfolded double-barrier payoff", "[symmetry]") {
    const VanillaCall call{95.0};
    const double K = 85.0, Kp = 30.0;
    REQUIRE(unfold_payoff_double(call, K, Kp, 100.0) == 5.0);   // fundamental band
    REQUIRE(unfold_payoff_double(call, K, Kp, 120.0) == -15.0); // -f(110)
    REQUIRE(unfold_payoff_double(call, K, Kp, 160.0) == 5.0);   // m = 2, f(100)
    // half-open band edges: 115 opens the odd band, 145 the next even one
    REQUIRE(unfold_payoff_double(call, K, Kp, 115.0) == -20.0); // -f(115)
    REQUIRE(unfold_payoff_double(call, K, Kp, 145.0) == 0.0);   // f(85)
    // identity on the fundamental band
    for (uint64_t i = 0; i < 5000; ++i) {
        double x = uniform(8, i, K + 1e-9, K + Kp - 1e-9);
        REQUIRE(unfold_payoff_double(call, K, Kp, x) == call(x));
    }
}
