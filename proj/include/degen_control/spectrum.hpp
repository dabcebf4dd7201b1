#pragma once

#include "degen_control/params.hpp"
#include "degen_control/quadrature.hpp"

#include <functional>
#include <utility>
#include <vector>

namespace degen_control {

    using RealFn = std::function<double(double)>;

    struct Mode {
        int index = 1;
        double zero = 0.0;       // k-th positive zero of J_nu
        double lambda = 0.0;     // eigenvalue kappa^2 zero^2
        double gen_deriv = 0.0;  // weighted Neumann trace at x = 0
        double norm_check = 0.0; // quadrature value of the weighted norm
        double jprime = 0.0;     // J_nu'(zero), signed
    };

    // A test function together with its derivative.
    struct TestFunction {
        RealFn f;
        RealFn df;
    };

    std::vector<Mode> compute_modes(const ProblemParams& p, int K, const QuadratureRule& rule);
    std::vector<Mode> compute_modes(const ProblemParams& p, int K);

    double eigenfunction_eval(const ProblemParams& p, const Mode& m, double x);
    double eigenfunction_derivative(const ProblemParams& p, const Mode& m, double x);

    // Eigenfunctions of the classical Bessel problem on (0,1) in y.
    double classical_eigenfunction(const ProblemParams& p, const Mode& m, double y);

    RealFn unitary_transform(const ProblemParams& p, RealFn u);
    RealFn inverse_unitary_transform(const ProblemParams& p, RealFn v);

    double inner_product_beta(const ProblemParams& p, const RealFn& u, const RealFn& v,
                              const QuadratureRule& rule);

    double gen_derivative(const ProblemParams& p, const Mode& m);

    // (lhs, rhs) of the weighted Hardy and Poincare inequalities.
    std::pair<double, double> hardy_check(const ProblemParams& p, const TestFunction& u,
                                          const QuadratureRule& rule);
    std::pair<double, double> poincare_check(const ProblemParams& p, const TestFunction& u,
                                             const QuadratureRule& rule);

    // Weak-form residual of the eigen-equation against a test function
    // vanishing at both ends.
    double weak_residual(const ProblemParams& p, const Mode& m, const TestFunction& v,
                         const QuadratureRule& rule);

    // x^2 (1-x)^2 T_n(2x-1), n = 0..count-1.
    std::vector<TestFunction> bump_family(int count);

}
