#include "degen_control/bessel.hpp"

#include "catch_amalgamated.hpp"
#include "oracles.hpp"

#include <cmath>
#include <random>

using namespace degen_control;

TEST_CASE("J agrees with the multiprecision oracle", "[bessel]")
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> on(0.0, 12.0), ox(1e-3, 80.0);
    double worst = 0.0;
    for (int i = 0; i < 300; ++i) {
        double nu = on(rng), x = ox(rng);
        double ref = oracle::bessel_j(nu, x);
        worst = std::max(worst, std::fabs(eval_J(nu, x) - ref));
    }
    CHECK(worst < 1e-13);
}

TEST_CASE("J' agrees with the multiprecision oracle", "[bessel]")
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> on(0.0, 12.0), ox(1e-2, 80.0);
    double worst = 0.0;
    for (int i = 0; i < 300; ++i) {
        double nu = on(rng), x = ox(rng);
        worst = std::max(worst, std::fabs(eval_J_prime(nu, x) - oracle::bessel_j_prime(nu, x)));
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("large orders stay finite", "[bessel]")
{
    for (double nu : {50.0, 100.0, 150.0}) {
        for (double x : {1.0, nu / 2, nu, 2 * nu, 4 * nu}) {
            double v = eval_J(nu, x), ref = oracle::bessel_j(nu, x);
            CHECK(std::isfinite(v));
            CHECK(std::fabs(v - ref) <= 1e-12 * std::max(1.0, std::fabs(ref)) + 1e-300);
        }
    }
}

TEST_CASE("small-argument limits", "[bessel]")
{
    CHECK(eval_J(0.0, 0.0) == 1.0);
    CHECK(eval_J(1.5, 0.0) == 0.0);
    CHECK_THROWS_AS(eval_J(-0.5, 1.0), BesselError);
    CHECK_THROWS_AS(eval_J(1.0, -1.0), BesselError);
    CHECK_THROWS_AS(eval_J_prime(1.0, 0.0), BesselError);
}

TEST_CASE("zero tables match the oracle", "[bessel]")
{
    for (double nu : {0.0, 0.25, 0.5, 1.0, 2.0, 3.0, 10.0, 60.0, 150.0}) {
        const ZeroTable& t = zeros(nu, 40);
        REQUIRE(t.zeros.size() == 40);
        for (int k = 1; k <= 40; ++k) {
            double ref = oracle::bessel_zero(nu, k);
            CHECK(std::fabs(t.zeros[k - 1] - ref) <= 2e-13 * ref);
        }
    }
}

TEST_CASE("zero tables are memoized", "[bessel]")
{
    const ZeroTable& a = zeros(1.25, 12);
    const ZeroTable& b = zeros(1.25, 12);
    CHECK(&a == &b);
    CHECK(a.order_nu == 1.25);
}

TEST_CASE("McMahon seed is close for large k", "[bessel]")
{
    for (double nu : {0.0, 0.5, 2.0}) {
        double ref = oracle::bessel_zero(nu, 30);
        CHECK(std::fabs(zero_seed(nu, 30) - ref) < 1e-4);
    }
    // half-integer order 1/2: the seed is exact
    CHECK(zero_seed(0.5, 7) == Catch::Approx(7 * M_PI).epsilon(1e-15));
}

TEST_CASE("difference sequence monotonicity", "[bessel][property]")
{
    for (double nu : {0.0, 0.25, 0.5, 1.0, 2.0}) {
        const auto& j = zeros(nu, 40).zeros;
        for (int k = 0; k + 2 < 40; ++k) {
            double change = (j[k + 2] - j[k + 1]) - (j[k + 1] - j[k]);
            if (nu > 0.5) CHECK(change < 0.0);
            else if (nu < 0.5) CHECK(change > 0.0);
            else CHECK(std::fabs(change) < 1e-12);
        }
        // and the gaps approach pi (exactly pi throughout at order 1/2)
        if (nu != 0.5) CHECK(std::fabs(j[39] - j[38] - M_PI) < std::fabs(j[1] - j[0] - M_PI));
    }
}

TEST_CASE("extended-precision kernels", "[bessel]")
{
    using extended::quad;
    for (double nu : {0.5, 3.0}) {
        const ZeroTable& t = zeros(nu, 6);
        auto q = extended::refine_zeros(t);
        for (int k = 0; k < 6; ++k) {
            CHECK(std::fabs(double(q[k]) - t.zeros[k]) < 1e-13 * t.zeros[k]);
            CHECK(std::fabs(double(extended::eval_J(quad(nu), q[k]))) < 1e-30);
        }
    }
    // exact zeros of J_{1/2} are k pi
    auto q = extended::refine_zeros(zeros(0.5, 3));
    CHECK(std::fabs(double(q[2] - 3 * M_PIq)) < 1e-30);
}

TEST_CASE("zero ratio is a Kronecker delta", "[bessel]")
{
    const auto& j = zeros(3.0, 6).zeros;
    for (int k = 0; k < 6; ++k)
        for (int l = 0; l < 6; ++l) {
            double r = extended::zero_ratio(3.0, j[k], j[l]);
            if (k == l) CHECK(r == Catch::Approx(1.0).epsilon(1e-15));
            else CHECK(std::fabs(r) < 1e-40);
        }
}
