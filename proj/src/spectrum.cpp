#include "degen_control/spectrum.hpp"
#include "degen_control/bessel.hpp"

#include <cmath>

namespace degen_control {

    namespace {

        constexpr double small_argument = 1e-3;

        double amplitude(const ProblemParams& p, const Mode& m)
        {
            return std::sqrt(2.0 * p.kappa) / std::fabs(m.jprime);
        }

        double exponent_p(const ProblemParams& p) { return 0.5 * (1.0 - p.alpha - p.beta); }

        // x^e J_order(zero x^kappa), switching to the two-term small-argument
        // form near the origin.
        double weighted_bessel(const ProblemParams& p, double order, double zero, double e, double x)
        {
            double z = zero * std::pow(x, p.kappa);
            if (z < small_argument) {
                double lead = std::exp(e * std::log(x) + order * std::log(z / 2.0) - std::lgamma(order + 1.0));
                return lead * (1.0 - z * z / (4.0 * (order + 1.0)));
            }
            return std::pow(x, e) * eval_J(order, z);
        }

    }

    std::vector<Mode> compute_modes(const ProblemParams& p, int K, const QuadratureRule& rule)
    {
        const ZeroTable& table = zeros(p.nu, K);
        std::vector<Mode> modes(K);
        for (int k = 0; k < K; ++k) {
            Mode& m = modes[k];
            m.index = k + 1;
            m.zero = table.zeros[k];
            m.lambda = p.kappa * p.kappa * m.zero * m.zero;
            m.jprime = eval_J_prime(p.nu, m.zero);
            m.gen_deriv = gen_derivative(p, m);
            RealFn phi = [&](double x) { return eigenfunction_eval(p, m, x); };
            m.norm_check = inner_product_beta(p, phi, phi, rule);
        }
        return modes;
    }

    std::vector<Mode> compute_modes(const ProblemParams& p, int K)
    {
        return compute_modes(p, K, make_rule(p.kappa));
    }

    double eigenfunction_eval(const ProblemParams& p, const Mode& m, double x)
    {
        return amplitude(p, m) * weighted_bessel(p, p.nu, m.zero, exponent_p(p), x);
    }

    double eigenfunction_derivative(const ProblemParams& p, const Mode& m, double x)
    {
        // x^(p-1) [ (p + kappa nu) J_nu(z) - kappa z J_{nu+1}(z) ],  z = zero x^kappa
        double e = exponent_p(p);
        double a = (e + p.kappa * p.nu) * weighted_bessel(p, p.nu, m.zero, e - 1.0, x);
        double b = p.kappa * m.zero * weighted_bessel(p, p.nu + 1.0, m.zero, e - 1.0 + p.kappa, x);
        return amplitude(p, m) * (a - b);
    }

    double classical_eigenfunction(const ProblemParams& p, const Mode& m, double y)
    {
        return std::sqrt(2.0) / std::fabs(m.jprime) * std::sqrt(y) * eval_J(p.nu, m.zero * y);
    }

    RealFn unitary_transform(const ProblemParams& p, RealFn u)
    {
        double k = p.kappa, e = -p.alpha / 4.0 - p.beta / 2.0;
        return [k, e, u = std::move(u)](double x) {
            return std::sqrt(k) * std::pow(x, e) * u(std::pow(x, k));
        };
    }

    RealFn inverse_unitary_transform(const ProblemParams& p, RealFn v)
    {
        double k = p.kappa, e = -p.alpha / 4.0 - p.beta / 2.0;
        return [k, e, v = std::move(v)](double y) {
            double x = std::pow(y, 1.0 / k);
            return v(x) / (std::sqrt(k) * std::pow(x, e));
        };
    }

    double inner_product_beta(const ProblemParams& p, const RealFn& u, const RealFn& v,
                              const QuadratureRule& rule)
    {
        double b = p.beta;
        return rule.integrate([&](double x) { return u(x) * v(x) * std::pow(x, b); });
    }

    double gen_derivative(const ProblemParams& p, const Mode& m)
    {
        double nu = p.nu;
        double log_ratio = nu * std::log(m.zero) - nu * std::log(2.0) - std::lgamma(nu + 1.0);
        return std::sqrt(2.0 * p.kappa) * (std::sqrt(p.mu_crit) + p.kappa * nu) * std::exp(log_ratio)
               / std::fabs(m.jprime);
    }

    std::pair<double, double> hardy_check(const ProblemParams& p, const TestFunction& u,
                                          const QuadratureRule& rule)
    {
        double s = p.alpha + p.beta;
        double lhs = p.mu_crit * rule.integrate([&](double x) {
            double v = u.f(x);
            return v * v * std::pow(x, s - 2.0);
        });
        double rhs = rule.integrate([&](double x) {
            double d = u.df(x);
            return std::pow(x, s) * d * d;
        });
        return {lhs, rhs};
    }

    std::pair<double, double> poincare_check(const ProblemParams& p, const TestFunction& u,
                                             const QuadratureRule& rule)
    {
        double s = p.alpha + p.beta;
        double lhs = rule.integrate([&](double x) {
            double v = u.f(x);
            return v * v * std::pow(x, p.beta);
        });
        double grad = rule.integrate([&](double x) {
            double d = u.df(x);
            return std::pow(x, s) * d * d;
        });
        return {lhs, grad / ((2.0 - p.alpha) * (1.0 - s))};
    }

    double weak_residual(const ProblemParams& p, const Mode& m, const TestFunction& v,
                         const QuadratureRule& rule)
    {
        double s = p.alpha + p.beta;
        return rule.integrate([&](double x) {
            double phi = eigenfunction_eval(p, m, x);
            double dphi = eigenfunction_derivative(p, m, x);
            double vx = v.f(x);
            return std::pow(x, s) * dphi * v.df(x) - p.mu * std::pow(x, s - 2.0) * phi * vx
                   - m.lambda * std::pow(x, p.beta) * phi * vx;
        });
    }

    std::vector<TestFunction> bump_family(int count)
    {
        std::vector<TestFunction> out;
        for (int n = 0; n < count; ++n) {
            // Chebyshev T_n and T_n' on s = 2x - 1 by recurrence
            auto cheb = [n](double s, double& t, double& dt) {
                double t0 = 1.0, t1 = s, d0 = 0.0, d1 = 1.0;
                if (n == 0) { t = 1.0; dt = 0.0; return; }
                for (int j = 2; j <= n; ++j) {
                    double t2 = 2.0 * s * t1 - t0;
                    double d2 = 2.0 * t1 + 2.0 * s * d1 - d0;
                    t0 = t1; t1 = t2; d0 = d1; d1 = d2;
                }
                t = t1;
                dt = d1;
            };
            TestFunction tf;
            tf.f = [cheb](double x) {
                double t, dt;
                cheb(2.0 * x - 1.0, t, dt);
                return x * x * (1.0 - x) * (1.0 - x) * t;
            };
            tf.df = [cheb](double x) {
                double t, dt;
                cheb(2.0 * x - 1.0, t, dt);
                double b = x * x * (1.0 - x) * (1.0 - x);
                double db = 2.0 * x * (1.0 - x) * (1.0 - 2.0 * x);
                return db * t + b * 2.0 * dt;
            };
            out.push_back(std::move(tf));
        }
        return out;
    }

}
