#include "degen_control/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace degen_control {

    namespace {

        GaussRule build_gauss(int n)
        {
            GaussRule r;
            r.nodes.resize(n);
            r.weights.resize(n);
            for (int i = 0; i < (n + 1) / 2; ++i) {
                double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
                double dp = 0.0;
                for (int it = 0; it < 100; ++it) {
                    double p0 = 1.0, p1 = x;
                    for (int k = 2; k <= n; ++k) {
                        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                        p0 = p1;
                        p1 = p2;
                    }
                    dp = n * (x * p1 - p0) / (x * x - 1.0);
                    double dx = p1 / dp;
                    x -= dx;
                    if (std::fabs(dx) < 1e-16) break;
                }
                double w = 2.0 / ((1.0 - x * x) * dp * dp);
                r.nodes[i] = -x;
                r.nodes[n - 1 - i] = x;
                r.weights[i] = w;
                r.weights[n - 1 - i] = w;
            }
            return r;
        }

        std::mutex gauss_mutex;
        std::map<int, GaussRule> gauss_cache;

    }

    const GaussRule& gauss_legendre(int n)
    {
        if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
        std::lock_guard<std::mutex> lock(gauss_mutex);
        auto it = gauss_cache.find(n);
        if (it == gauss_cache.end()) it = gauss_cache.emplace(n, build_gauss(n)).first;
        return it->second;
    }

    QuadratureRule make_rule(double kappa, int panels, int order, double grading)
    {
        if (panels < 1 || order < 1 || !(grading > 0.0 && grading < 1.0) || !(kappa > 0.0))
            throw std::invalid_argument("make_rule: bad rule parameters");
        QuadratureRule r;
        r.panels = panels;
        r.order = order;
        r.grading = grading;
        r.kappa = kappa;
        const GaussRule& g = gauss_legendre(order);
        std::vector<double> breaks(panels + 1);
        breaks[0] = 0.0;
        for (int p = 1; p <= panels; ++p) breaks[p] = std::pow(grading, panels - p);
        for (int p = 0; p < panels; ++p) {
            double a = breaks[p], b = breaks[p + 1];
            for (int i = 0; i < order; ++i) {
                double yi = 0.5 * (a + b) + 0.5 * (b - a) * g.nodes[i];
                double xi = std::pow(yi, 1.0 / kappa);
                r.y.push_back(yi);
                r.w.push_back(0.5 * (b - a) * g.weights[i]);
                r.x.push_back(xi);
                r.jac.push_back(xi / (kappa * yi));
            }
        }
        return r;
    }

    double QuadratureRule::integrate(const std::function<double(double)>& g) const
    {
        double s = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) s += w[i] * jac[i] * g(x[i]);
        return s;
    }

    double QuadratureRule::integrate_y(const std::function<double(double)>& g) const
    {
        double s = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) s += w[i] * g(y[i]);
        return s;
    }

}
