#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>

#include <barriermc/rng.hpp>

using namespace barriermc;
using Catch::Matchers::WithinAbs;

TEST_CASE("gaussian draws are a pure function of (seed, path, step)", "[rng]") {
    PathStream a(42, 7);
    PathStream b(42, 7);
    for (uint64_t k = 0; k < 50; ++k) {
        REQUIRE(a.gaussian(k) == b.gaussian(k));
        REQUIRE(gaussian_increment(a, k) == a.gaussian(k));
        auto pa = a.gaussian_pair(k);
        auto pb = b.gaussian_pair(k);
        REQUIRE(pa.z1 == pb.z1);
        REQUIRE(pa.z2 == pb.z2);
        REQUIRE(pa.z1 == a.gaussian(k));
    }
    // evaluation order does not matter
    PathStream c(42, 7);
    double late = c.gaussian(49);
    double early = c.gaussian(0);
    REQUIRE(late == a.gaussian(49));
    REQUIRE(early == a.gaussian(0));
}

TEST_CASE("streams with different coordinates differ", "[rng]") {
    PathStream a(1, 0);
    REQUIRE(a.gaussian(0) != a.gaussian(1));
    REQUIRE(PathStream(1, 0).gaussian(0) != PathStream(1, 1).gaussian(0));
    REQUIRE(PathStream(1, 0).gaussian(0) != PathStream(2, 0).gaussian(0));

    std::set<uint64_t> seeds;
    for (uint64_t tag = 0; tag < 100; ++tag) seeds.insert(derive_seed(123, tag));
    REQUIRE(seeds.size() == 100);
}

TEST_CASE("gaussian draws have N(0,1) sample moments", "[rng]") {
    const uint64_t n = 1000000;
    double sum = 0.0, sumsq = 0.0, cross = 0.0;
    for (uint64_t i = 0; i < n; ++i) {
        PathStream s(2024, i);
        auto z = s.gaussian_pair(0);
        sum += z.z1;
        sumsq += z.z1 * z.z1;
        cross += z.z1 * z.z2;
    }
    const double mean = sum / n;
    const double var = sumsq / n - mean * mean;
    REQUIRE(std::abs(mean) < 4.0 / std::sqrt(static_cast<double>(n)));
    REQUIRE(std::abs(var - 1.0) < 0.01);
    REQUIRE(std::abs(cross / n) < 4.0 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("halton table yields shifted points in (0,1) and sane gaussians", "[rng]") {
    HaltonTable t(8, 99);
    REQUIRE(t.dimensions() == 8);
    double sum = 0.0;
    for (uint64_t i = 0; i < 4096; ++i) {
        for (int d = 0; d < 8; ++d) {
            double u = t.point(i, d);
            REQUIRE(u > 0.0);
            REQUIRE(u < 1.0);
        }
        sum += t.gaussian(i, 0);
    }
    // low-discrepancy points integrate the identity very accurately
    REQUIRE(std::abs(sum / 4096.0) < 0.02);

    HaltonTable same(8, 99);
    REQUIRE(same.point(17, 3) == t.point(17, 3));
    HaltonTable other(8, 100);
    REQUIRE(other.point(17, 3) != t.point(17, 3));
    REQUIRE_THROWS_AS(HaltonTable(0, 1), std::invalid_argument);
}
