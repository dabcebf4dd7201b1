#include "degen_control/params.hpp"

#include <cmath>
#include <sstream>

namespace degen_control {

    double critical_coefficient(double delta)
    {
        double h = 1.0 - delta;
        return h * h / 4.0;
    }

    ProblemParams derive(double alpha, double beta, double mu, double T)
    {
        if (!std::isfinite(alpha) || !std::isfinite(beta) || !std::isfinite(mu) || !std::isfinite(T))
            throw ParamError("parameters must be finite");
        if (!(alpha >= 0.0 && alpha < 2.0))
            throw ParamError("degeneracy exponent violates 0 <= alpha < 2");
        if (!(alpha + beta < 1.0))
            throw ParamError("drift exponent violates alpha + beta < 1");
        double mc = critical_coefficient(alpha + beta);
        if (!(mu < mc)) {
            std::ostringstream os;
            os << "potential violates mu < mu_crit(alpha+beta) = " << mc << " (strict)";
            throw ParamError(os.str());
        }
        if (!(T > 0.0))
            throw ParamError("horizon violates T > 0");

        ProblemParams p;
        p.alpha = alpha;
        p.beta = beta;
        p.mu = mu;
        p.horizon_T = T;
        p.mu_crit = mc;
        p.kappa = (2.0 - alpha) / 2.0;
        double root_gap = std::sqrt(mc - mu);
        double root_mc = std::sqrt(mc);
        p.nu = root_gap / p.kappa;
        // conjugate form: no cancellation when mu is small
        p.gamma = mu / (root_mc + root_gap);
        if (p.nu > max_order) {
            std::ostringstream os;
            os << "Bessel order nu = " << p.nu << " exceeds the supported cap " << max_order
               << " (mu too negative)";
            throw ParamError(os.str());
        }
        return p;
    }

}
