#include "degen_control/bessel.hpp"
#include "degen_control/bounds.hpp"

#include "catch_amalgamated.hpp"
#include "oracles.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>

using namespace degen_control;
using Catch::Approx;
using oracle::mp50;

namespace {

    struct Set {
        double alpha, beta, mu;
    };

    const Set reference_sets[] = {{0, 0, 0}, {0.5, 0, 1.0 / 32}, {1.5, -1, -0.5}};

}

TEST_CASE("upper bound transcription at the classical point", "[bounds]")
{
    // kappa = 1, nu = 1/2, j_1 = pi, weight sum = 1, T = 1, delta = 1/2
    const mp50 pi = boost::math::constants::pi<mp50>();
    const mp50 d = mp50(1) / 2, T = 1;
    mp50 M = (1 + 1 / ((1 - d) * T)) * (exp(1 / sqrt(mp50(2))) + exp(3 / ((1 - d) * T)) / (d * d * d))
             * exp(-pow(1 - d, mp50(1.5)) * pow(T, mp50(1.5)) / (8 * sqrt(1 + T)) * pi * pi);
    mp50 ref = M * sqrt(T) * exp(-T / 2 * pi * pi);

    ProblemParams p = derive(0, 0, 0, 1);
    CHECK(upper_factor(p, 0.5) == Approx(static_cast<double>(M)).epsilon(1e-13));
    CHECK(upper_bound(p, 0.5, 1.0) == Approx(static_cast<double>(ref)).epsilon(1e-13));
    CHECK(upper_bound(p, 0.5, 3.0) == Approx(3.0 * static_cast<double>(ref)).epsilon(1e-13));
}

TEST_CASE("upper bound structure", "[bounds]")
{
    ProblemParams p1 = derive(0, 0, 0, 1), p4 = derive(0, 0, 0, 4);
    CHECK(upper_bound(p4, 0.5) < upper_bound(p1, 0.5));
    // blows up as delta -> 1
    double prev = upper_bound(p1, 0.9);
    for (double d : {0.95, 0.99, 0.995}) {
        double v = upper_bound(p1, d);
        CHECK(v > prev);
        prev = v;
    }
    CHECK(upper_bound(p1, 0.999) > 1e100);
}

TEST_CASE("lower bound closed form at the classical point", "[bounds]")
{
    // j1 = pi, j2 = 2 pi, Gamma(3/2) = sqrt(pi)/2, |J'_{1/2}(pi)| = sqrt(2)/pi
    const mp50 pi = boost::math::constants::pi<mp50>();
    mp50 j1 = pi, j2 = 2 * pi, nu = mp50(1) / 2;
    mp50 num = pow(mp50(2), nu) * sqrt(pi) / 2 * sqrt(mp50(2)) / pi * exp((mp50(1) / 2 - log(mp50(2)) / pi) * j2);
    mp50 den = sqrt(mp50(2)) * 1 * pow(j1, nu);
    mp50 ref = num / den * exp(-(j1 * j1 + j2 * j2 / 2));
    CHECK(lower_bound(derive(0, 0, 0, 1)) == Approx(static_cast<double>(ref)).epsilon(1e-13));
}

TEST_CASE("lower bound below upper bound", "[bounds]")
{
    for (const Set& s : reference_sets)
        for (double T : {0.5, 1.0, 3.0}) {
            ProblemParams p = derive(s.alpha, s.beta, s.mu, T);
            CHECK(lower_bound(p) > 0.0);
            CHECK(lower_bound(p) < upper_bound(p, 0.5, 1.0));
        }
}

TEST_CASE("lower bound exponent for large T", "[bounds]")
{
    ProblemParams p = derive(0.5, 0, 1.0 / 32, 1);
    const auto& j = zeros(p.nu, 2).zeros;
    double rate = -(j[0] * j[0] + j[1] * j[1] / 2) * p.kappa * p.kappa;
    // T^{-1/2} is the only other T dependence; stay clear of underflow
    double T1 = 10, T2 = 20;
    double slope = (std::log(lower_bound(derive(0.5, 0, 1.0 / 32, T2)))
                    - std::log(lower_bound(derive(0.5, 0, 1.0 / 32, T1)))) / (T2 - T1);
    CHECK(slope == Approx(rate - 0.5 * std::log(T2 / T1) / (T2 - T1)).epsilon(1e-10));
}

TEST_CASE("first-mode state and its moment", "[bounds]")
{
    for (const Set& s : reference_sets) {
        ProblemParams p = derive(s.alpha, s.beta, s.mu, 1);
        auto modes = compute_modes(p, 4);
        State u0 = first_mode_state(p, modes);
        REQUIRE(u0.coefficients.size() == 4);
        CHECK(u0.coefficients[1] == 0.0);
        // ||u0||^2 = |J'(j1)|^2 / (2 kappa)
        double jp = oracle::bessel_j_prime(p.nu, modes[0].zero);
        CHECK(u0.norm() == Approx(std::fabs(jp) / std::sqrt(2 * p.kappa)).epsilon(1e-12));
        // the moment target is -a_1 / O(Phi_1)
        CHECK(first_moment_target(p, modes[0]) == Approx(-u0.coefficients[0] / modes[0].gen_deriv).epsilon(1e-12));
    }
}

TEST_CASE("combined derivative identity", "[bounds]")
{
    for (const Set& s : reference_sets) {
        ProblemParams p = derive(s.alpha, s.beta, s.mu, 1);
        auto modes = compute_modes(p, 6);
        for (const Mode& m : modes) {
            double lhs = m.gen_deriv * m.lambda * lambda_prime_at_pole(p, m);
            double rhs = std::sqrt(p.kappa / 2) * (std::sqrt(p.mu_crit) + p.kappa * p.nu) * m.zero;
            CHECK(std::fabs(lhs - rhs) <= 1e-10 * rhs);
        }
    }
}

TEST_CASE("proof-chain items", "[bounds]")
{
    ProblemParams p = derive(0.5, 0, 1.0 / 32, 1);
    auto modes = compute_modes(p, 6);
    Multiplier m = make_multiplier(p, 0.5);
    CHECK(check_lambda_growth(p, 50).pass);
    CHECK(check_multiplier_lower(m, modes).pass);
    CHECK(check_multiplier_upper(m, 40).pass);
    ProofItem kr = check_kronecker(p, m, modes, 6);
    CHECK(kr.pass);
    CHECK(kr.worst < 1e-30);
}

TEST_CASE("single-mode family certifies the lower bound", "[bounds]")
{
    // one-mode control of the one-mode truncation
    ProblemParams p = derive(0, 0, 0, 1);
    auto modes = compute_modes(p, 1);
    BiorthogonalFamily fam = biorthogonal_family(p, modes, 1.0, 0.5, 2048);
    ControlSignal f = synthesize_control(first_mode_state(p, modes), fam, modes);
    ProofReport r = verify_proof_chain(p, fam, modes, f);
    REQUIRE(r.items.size() == 4);
    CHECK(r.items[3].name == "lower bound");
    CHECK(r.items[3].pass);
    CHECK(r.items[2].pass);
    CostReport c = cost_report(p, 0.5, 1.0, f);
    CHECK(c.lower_value <= c.achieved_L2);
    CHECK(c.achieved_sup >= c.achieved_L2);
    CHECK(std::isfinite(c.upper_value));
    CHECK(calibrate_upper_constant(p, 0.5, f, 1.0) > 0.0);
}

TEST_CASE("psi envelope dominates the computed family", "[bounds]")
{
    ProblemParams p = derive(1.5, -1, -0.5, 1);
    auto modes = compute_modes(p, 3);
    BiorthogonalFamily fam = biorthogonal_family(p, modes, 1.0, 0.5, 1024);
    // the envelope constant is unspecified; record the smallest c that works
    double c_needed = 0.0;
    for (int k = 0; k < 3; ++k)
        c_needed = std::max(c_needed, fam.psi_sup(k) / psi_sup_envelope(p, fam.multiplier, modes[k], 1.0));
    CHECK(c_needed > 0.0);
    CHECK(c_needed < 1e3);
}
