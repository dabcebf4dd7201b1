#include "degen_control/spectrum.hpp"

#include "catch_amalgamated.hpp"
#include "oracles.hpp"

#include <cmath>
#include <random>

using namespace degen_control;
using Catch::Approx;

namespace {

    struct Set {
        double alpha, beta, mu;
    };

    const Set reference_sets[] = {{0, 0, 0}, {0.5, 0, 1.0 / 32}, {1.5, -1, -0.5}};

}

TEST_CASE("classical reduction", "[spectrum]")
{
    ProblemParams p = derive(0, 0, 0, 1);
    auto modes = compute_modes(p, 12);
    for (const Mode& m : modes) {
        CHECK(std::fabs(m.lambda - m.index * m.index * M_PI * M_PI) < 1e-9);
        for (int i = 1; i < 200; ++i) {
            double x = i / 200.0;
            double ref = std::sqrt(2.0) * std::sin(m.index * M_PI * x);
            // sign convention of the library: positive near 0
            CHECK(std::fabs(eigenfunction_eval(p, m, x) - ref) < 1e-8);
        }
        CHECK(m.gen_deriv == Approx(std::sqrt(2.0) * m.index * M_PI).epsilon(1e-12));
    }
}

TEST_CASE("eigenfunctions agree with the Boost construction", "[spectrum]")
{
    for (const Set& s : reference_sets) {
        ProblemParams p = derive(s.alpha, s.beta, s.mu, 1);
        auto modes = compute_modes(p, 5);
        for (const Mode& m : modes) {
            oracle::Eigen ref(s.alpha, s.beta, s.mu, m.index);
            CHECK(m.zero == Approx(ref.zero).epsilon(1e-13));
            for (double x : {0.01, 0.2, 0.5, 0.77, 0.99}) {
                CHECK(std::fabs(eigenfunction_eval(p, m, x) - ref.value(x)) < 1e-10);
                CHECK(eigenfunction_derivative(p, m, x)
                      == Approx(ref.derivative(x)).epsilon(1e-9).margin(1e-9));
            }
        }
    }
}

TEST_CASE("orthonormality with an independent integrator", "[spectrum][property]")
{
    for (const Set& s : reference_sets) {
        ProblemParams p = derive(s.alpha, s.beta, s.mu, 1);
        auto modes = compute_modes(p, 6);
        double worst = 0.0;
        for (int i = 0; i < 6; ++i)
            for (int j = i; j < 6; ++j) {
                // integrate in y = x^kappa where the integrand is smooth
                double g = oracle::integrate01([&](double y) {
                    double x = std::pow(y, 1.0 / p.kappa);
                    if (x < 1e-200) return 0.0;
                    double jac = std::pow(x, 1.0 - p.kappa) / p.kappa;
                    return eigenfunction_eval(p, modes[i], x) * eigenfunction_eval(p, modes[j], x)
                           * std::pow(x, p.beta) * jac;
                });
                worst = std::max(worst, std::fabs(g - (i == j ? 1.0 : 0.0)));
            }
        CHECK(worst < 1e-9);
        for (const Mode& m : modes) CHECK(m.norm_check == Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("weak eigen-residual vanishes", "[spectrum][property]")
{
    auto bumps = bump_family(5);
    for (const Set& s : reference_sets) {
        ProblemParams p = derive(s.alpha, s.beta, s.mu, 1);
        QuadratureRule rule = make_rule(p.kappa);
        auto modes = compute_modes(p, 8, rule);
        for (const Mode& m : modes)
            for (const TestFunction& v : bumps) CHECK(std::fabs(weak_residual(p, m, v, rule)) < 1e-6);
    }
}

TEST_CASE("U is an isometry", "[spectrum][property]")
{
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    for (const Set& s : reference_sets) {
        ProblemParams p = derive(s.alpha, s.beta, s.mu, 1);
        QuadratureRule rule = make_rule(p.kappa);
        for (int trial = 0; trial < 10; ++trial) {
            double c0 = coef(rng), c1 = coef(rng), c2 = coef(rng);
            RealFn u = [=](double y) { return c0 * std::sin(M_PI * y) + c1 * y * (1 - y) + c2 * std::cos(3 * y); };
            RealFn uu = unitary_transform(p, u);
            double lhs = std::sqrt(inner_product_beta(p, uu, uu, rule));
            double rhs = std::sqrt(oracle::integrate01([&](double y) { return u(y) * u(y); }));
            CHECK(std::fabs(lhs - rhs) < 1e-8);
            RealFn back = inverse_unitary_transform(p, uu);
            CHECK(back(0.3) == Approx(u(0.3)).epsilon(1e-13));
        }
    }
}

TEST_CASE("U maps classical eigenfunctions onto the spectrum", "[spectrum]")
{
    for (const Set& s : reference_sets) {
        ProblemParams p = derive(s.alpha, s.beta, s.mu, 1);
        auto modes = compute_modes(p, 8);
        for (const Mode& m : modes) {
            RealFn mapped = unitary_transform(p, [&](double y) { return classical_eigenfunction(p, m, y); });
            for (int i = 1; i < 100; ++i) {
                double x = i / 100.0;
                CHECK(std::fabs(mapped(x) - eigenfunction_eval(p, m, x)) < 1e-9);
            }
        }
    }
}

TEST_CASE("Hardy and Poincare inequalities on the bump family", "[spectrum][property]")
{
    auto bumps = bump_family(10);
    for (const Set& s : reference_sets) {
        ProblemParams p = derive(s.alpha, s.beta, s.mu, 1);
        QuadratureRule rule = make_rule(p.kappa);
        for (const TestFunction& u : bumps) {
            auto [hl, hr] = hardy_check(p, u, rule);
            auto [pl, pr] = poincare_check(p, u, rule);
            CHECK(hl <= hr + 1e-10);
            CHECK(pl <= pr + 1e-10);
            CHECK(hl > 0.0);
        }
    }
}

TEST_CASE("generalized derivative matches the limit of the weighted slope", "[spectrum]")
{
    for (const Set& s : reference_sets) {
        ProblemParams p = derive(s.alpha, s.beta, s.mu, 1);
        auto modes = compute_modes(p, 4);
        double w = p.alpha + p.beta + p.gamma;
        for (const Mode& m : modes) {
            oracle::Eigen ref(s.alpha, s.beta, s.mu, m.index);
            // x^w Phi'(x) = L (1 + c x^{2 kappa} + ...)
            double L = oracle::richardson_limit(
                [&](double x) { return std::pow(x, w) * ref.derivative(x); }, 1e-2, 2.0 * p.kappa, 8);
            CHECK(std::fabs(m.gen_deriv - std::fabs(L)) <= 1e-6 * m.gen_deriv);
            CHECK(gen_derivative(p, m) == m.gen_deriv);
        }
    }
}

TEST_CASE("mode invariants", "[spectrum]")
{
    for (const Set& s : reference_sets) {
        ProblemParams p = derive(s.alpha, s.beta, s.mu, 1);
        auto modes = compute_modes(p, 12);
        for (std::size_t k = 0; k < modes.size(); ++k) {
            CHECK(modes[k].lambda > 0.0);
            CHECK(modes[k].index == static_cast<int>(k) + 1);
            CHECK(modes[k].lambda == Approx(p.kappa * p.kappa * modes[k].zero * modes[k].zero));
            if (k > 0) CHECK(modes[k].lambda > modes[k - 1].lambda);
        }
    }
}
