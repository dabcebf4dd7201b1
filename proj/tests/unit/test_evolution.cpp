#include "degen_control/evolution.hpp"

#include "catch_amalgamated.hpp"

#include <cmath>

using namespace degen_control;
using Catch::Approx;

namespace {

    std::vector<Mode> classical(int K)
    {
        return compute_modes(derive(0, 0, 0, 1), K);
    }

}

TEST_CASE("free evolution decays each mode", "[evolution]")
{
    auto modes = classical(4);
    State s{{1.0, -2.0, 0.5, 0.0}};
    State out = free_evolve(s, modes, 0.1);
    for (int k = 0; k < 4; ++k)
        CHECK(out.coefficients[k] == Approx(s.coefficients[k] * std::exp(-modes[k].lambda * 0.1)));
    CHECK_THROWS(free_evolve(s, modes, -1.0));
}

TEST_CASE("zero control reproduces free evolution", "[evolution]")
{
    auto modes = classical(6);
    State s{{0.3, 0.2, -0.1}};
    ControlSignal f = zero_control(1.0, 128);
    State a = controlled_evolve(s, modes, f, 0.5);
    State b = free_evolve(s, modes, 0.5);
    REQUIRE(a.coefficients.size() == 6);
    for (int k = 0; k < 3; ++k) CHECK(a.coefficients[k] == Approx(b.coefficients[k]).epsilon(1e-14));
    CHECK(a.coefficients[5] == 0.0);
}

TEST_CASE("constant control matches the closed-form Duhamel integral", "[evolution]")
{
    auto modes = classical(3);
    const int N = 4096;
    ControlSignal f = zero_control(1.0, N);
    for (double& v : f.samples) v = 1.0;
    State out = controlled_evolve(State{{0.0}}, modes, f, 1.0);
    for (int k = 0; k < 3; ++k) {
        double lam = modes[k].lambda;
        double exact = modes[k].gen_deriv * (1.0 - std::exp(-lam)) / lam;
        // trapezoid error is O((h lambda)^2)
        double h = 1.0 / N;
        CHECK(std::fabs(out.coefficients[k] - exact) <= 0.1 * h * h * lam * lam * std::fabs(exact) + 1e-15);
    }
}

TEST_CASE("trajectory agrees with point evaluation", "[evolution]")
{
    auto modes = classical(4);
    ControlSignal f = zero_control(1.0, 256);
    for (int i = 0; i <= 256; ++i) f.samples[i] = std::sin(7.0 * f.time(i));
    State s{{1.0, 0.5}};
    auto traj = controlled_trajectory(s, modes, f);
    for (int i : {1, 64, 255, 256}) {
        State pt = controlled_evolve(s, modes, f, f.time(i));
        for (int k = 0; k < 4; ++k) CHECK(traj[i][k] == Approx(pt.coefficients[k]).epsilon(1e-11).margin(1e-14));
    }
}

TEST_CASE("argument validation", "[evolution]")
{
    auto modes = classical(2);
    ControlSignal f = zero_control(1.0, 64);
    CHECK_THROWS_AS(controlled_evolve(State{{1, 2, 3}}, modes, f, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(controlled_evolve(State{{1}}, modes, f, 0.3333), std::invalid_argument);
    CHECK_THROWS_AS(controlled_evolve(State{{1}}, modes, f, 0.0), std::invalid_argument);
}

TEST_CASE("signal norms", "[evolution]")
{
    ControlSignal f = zero_control(2.0, 1000);
    for (int i = 0; i <= 1000; ++i) f.samples[i] = f.time(i);
    CHECK(f.step() == Approx(0.002));
    CHECK(f.sup_norm() == Approx(2.0));
    CHECK(f.l2_norm() == Approx(std::sqrt(8.0 / 3.0)).epsilon(1e-6));
    CHECK(State{{3.0, 4.0}}.norm() == Approx(5.0));
}

TEST_CASE("well-posedness estimate stays bounded", "[evolution][property]")
{
    auto modes = classical(10);
    ControlSignal f = zero_control(1.0, 512);
    for (int i = 0; i <= 512; ++i) f.samples[i] = std::cos(3.0 * f.time(i));
    State s{{1.0, -1.0, 0.5}};
    ProblemParams p = derive(0, 0, 0, 1);
    double gap = wellposedness_gap(s, modes, f, p.nu + 0.5, p.nu);
    CHECK(std::isfinite(gap));
    CHECK(gap < 10.0);
    CHECK_THROWS(wellposedness_gap(s, modes, f, 0.25, p.nu));
}
