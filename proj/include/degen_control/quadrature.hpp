#pragma once

#include <functional>
#include <vector>

namespace degen_control {

    struct GaussRule {
        std::vector<double> nodes;   // on [-1, 1]
        std::vector<double> weights;
    };

    // Memoized n-point Gauss-Legendre rule.
    const GaussRule& gauss_legendre(int n);

    // Composite Gauss rule on (0,1) laid out in y = x^kappa, panels shrinking
    // geometrically toward y = 0.  integrate() takes an integrand in x and
    // applies the Jacobian dx/dy itself.
    struct QuadratureRule {
        int panels = 16;
        int order = 64;
        double grading = 0.5;
        double kappa = 1.0;
        std::vector<double> y;
        std::vector<double> w;    // weights in y
        std::vector<double> x;    // y^(1/kappa)
        std::vector<double> jac;  // dx/dy at each node

        double integrate(const std::function<double(double)>& g) const;
        double integrate_y(const std::function<double(double)>& g) const;
    };

    QuadratureRule make_rule(double kappa, int panels = 16, int order = 64, double grading = 0.5);

    // Composite Gauss-Legendre on [a, b] with equal panels.
    template <class F>
    auto integrate_panels(F&& f, double a, double b, int panels, int order)
    {
        const GaussRule& g = gauss_legendre(order);
        double h = (b - a) / panels;
        decltype(f(a)) sum{};
        for (int p = 0; p < panels; ++p) {
            double mid = a + (p + 0.5) * h;
            for (int i = 0; i < order; ++i)
                sum += f(mid + 0.5 * h * g.nodes[i]) * (0.5 * h * g.weights[i]);
        }
        return sum;
    }

}
