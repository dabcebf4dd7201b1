#include "degen_control/moment.hpp"
#include "moment_kernels.hpp"

#include <cmath>

namespace degen_control {

    namespace {

        kernels::MultParams<double> params_of(const Multiplier& m)
        {
            return {m.a, m.theta, m.log_normalization};
        }

        Scaled to_scaled(const kernels::ScaledT<double>& s)
        {
            Scaled out;
            out.mantissa = s.mant.to_std();
            out.log_scale = s.log_scale;
            return out;
        }

    }

    Multiplier make_multiplier(const ProblemParams& p, double delta_param)
    {
        if (!(delta_param > 0.0 && delta_param < 1.0))
            throw std::invalid_argument("multiplier parameter must lie in (0, 1)");
        Multiplier m;
        double T = p.horizon_T, k2 = p.kappa * p.kappa;
        m.delta_param = delta_param;
        m.a = T * (1.0 - delta_param) / 2.0;
        m.theta = (1.0 + delta_param) * (1.0 + delta_param) / (k2 * T * (1.0 - delta_param));
        m.log_normalization = -kernels::log_bump_mass<double>(m.theta);
        m.normalization = std::exp(m.log_normalization);
        return m;
    }

    Scaled multiplier_direct(const Multiplier& m, cplx z, int nodes)
    {
        return to_scaled(kernels::multiplier_direct_k<double>(params_of(m), detail::cx<double>(z), nodes));
    }

    Scaled multiplier_eval_scaled(const Multiplier& m, cplx z)
    {
        return to_scaled(kernels::multiplier_k<double>(params_of(m), detail::cx<double>(z)));
    }

    cplx multiplier_eval(const Multiplier& m, cplx z) { return multiplier_eval_scaled(m, z).value(); }

}
