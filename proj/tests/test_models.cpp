#include <catch2/catch_amalgamated.hpp>

#include <barriermc/models.hpp>
#include <barriermc/rng.hpp>

using namespace barriermc;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("1-D coefficients evaluate the printed forms", "[models]") {
    auto bs = coefficients_1d(Model1D::black_scholes(0.2, 0.0, 100.0));
    REQUIRE(bs.sigma_at(100.0) == 20.0);
    REQUIRE(bs.mu_at(100.0) == 0.0);

    auto cev = coefficients_1d(Model1D::cev(0.45, 0.75, 0.02, 100.0));
    REQUIRE_THAT(cev.mu_at(100.0), WithinAbs(2.0, 1e-14));
    // 0.45 * 100^0.75, frozen from an independent evaluator
    REQUIRE_THAT(cev.sigma_at(100.0), WithinRel(14.230249470757707, 1e-14));

    auto abm = coefficients_1d(Model1D::arithmetic_bm(3.0, 100.0));
    REQUIRE(abm.sigma_at(57.0) == 3.0);
    REQUIRE(abm.mu_at(57.0) == 0.0);
}

TEST_CASE("black-scholes equals cev with beta one, bit for bit", "[models]") {
    auto bs = coefficients_1d(Model1D::black_scholes(0.31, 0.017, 100.0));
    auto cev = coefficients_1d(Model1D::cev(0.31, 1.0, 0.017, 100.0));
    for (uint64_t i = 0; i < 100000; ++i) {
        PathStream s(5, i);
        double x = 250.0 * std::abs(s.gaussian(0)) + 1e-9;
        REQUIRE(bs.sigma_at(x) == cev.sigma_at(x));
        REQUIRE(bs.mu_at(x) == cev.mu_at(x));
    }
}

TEST_CASE("stochastic-volatility coefficients evaluate the printed forms", "[models]") {
    auto h = coefficients_sv(SvModel::heston(0.0, 1.0, 0.03, 0.03, -0.7, 100.0, 0.04));
    REQUIRE_THAT(h.sigma21(0.04), WithinRel(-0.0042, 1e-13)); // 0.03 * (-0.7) * 0.2
    for (double x : {1.0, 50.0, 100.0, 400.0}) REQUIRE(h.sigma11(x, 0.0) == 0.0);
    REQUIRE_THAT(h.sigma11(100.0, 0.04), WithinRel(20.0, 1e-14));
    REQUIRE_THAT(h.mu2(0.05), WithinRel(1.0 * (0.03 - 0.05), 1e-13));

    auto s = coefficients_sv(SvModel::lambda_sabr(0.0, 1.0, 0.03, 0.3, -0.7, 0.75, 100.0, 0.5));
    // 0.3 * sqrt(0.51) * 0.5, frozen from an independent evaluator
    REQUIRE_THAT(s.sigma22(0.5), WithinRel(0.10712142642814275, 1e-14));
    REQUIRE_THAT(s.sigma11(100.0, 0.5), WithinRel(15.811388300841897, 1e-14));
    REQUIRE_THAT(s.mu2(0.5), WithinRel(0.03 - 0.5, 1e-14));
}

TEST_CASE("heston correlation decomposition", "[models]") {
    auto h = coefficients_sv(SvModel::heston(0.0, 1.0, 0.03, 0.03, -0.7, 100.0, 0.04));
    for (int i = 0; i <= 500; ++i) {
        double v = 0.01 * i;
        double lhs = h.sigma21(v) * h.sigma21(v) + h.sigma22(v) * h.sigma22(v);
        double rhs = 0.03 * 0.03 * v;
        REQUIRE_THAT(lhs, WithinAbs(rhs, 1e-12 * std::max(1.0, rhs)));
    }
}

TEST_CASE("diffusion arguments are floored at zero", "[models]") {
    auto cev = coefficients_1d(Model1D::cev(0.45, 0.75, 0.0, 100.0));
    REQUIRE(cev.sigma_at(-5.0) == 0.0);
    REQUIRE(std::isfinite(cev.sigma_at(-1e12)));
    auto h = coefficients_sv(SvModel::heston(0.0, 1.0, 0.03, 0.03, -0.7, 100.0, 0.04));
    REQUIRE(h.sigma11(100.0, -0.5) == 0.0);
    REQUIRE(h.sigma21(-0.5) == 0.0);
    REQUIRE_THAT(h.mu2(-0.5), WithinRel(0.03, 1e-14)); // full truncation: kappa(theta - 0)
    // lambda-SABR volatility is used raw
    auto s = coefficients_sv(SvModel::lambda_sabr(0.0, 1.0, 0.03, 0.3, -0.7, 0.75, 100.0, 0.5));
    REQUIRE(s.sigma11(100.0, -0.1) < 0.0);
}

TEST_CASE("parameter invariants are enforced", "[models]") {
    REQUIRE_THROWS_AS(coefficients_1d(Model1D::cev(0.45, 0.4, 0.0, 100.0)),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(coefficients_1d(Model1D::black_scholes(-0.2, 0.0, 100.0)),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(coefficients_1d(Model1D::black_scholes(0.2, -0.01, 100.0)),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(coefficients_sv(SvModel::heston(0.0, 1.0, 0.03, 0.03, 1.5, 100.0, 0.04)),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(coefficients_sv(SvModel::heston(0.0, -1.0, 0.03, 0.03, -0.7, 100.0, 0.04)),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(coefficients_sv(SvModel::heston(0.0, 1.0, 0.03, 0.03, -0.7, 100.0, -0.1)),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(
        coefficients_sv(SvModel::lambda_sabr(0.0, 1.0, 0.03, 0.3, -0.7, 0.3, 100.0, 0.5)),
        std::invalid_argument);
}
