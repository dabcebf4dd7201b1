#include "degen_control/bessel.hpp"
#include "degen_control/moment.hpp"
#include "moment_kernels.hpp"

#include <cmath>

namespace degen_control {

    cplx Scaled::value() const
    {
        if (mantissa == cplx(0.0, 0.0)) return mantissa;
        return mantissa * std::exp(log_scale);
    }

    double Scaled::log_abs() const
    {
        return std::log(std::abs(mantissa)) + log_scale;
    }

    namespace {
        using ld = long double;
        const ld ld_pi = 3.141592653589793238462643383279502884L;
    }

    Scaled lambda_eval_scaled(const ProblemParams& p, cplx z)
    {
        auto r = kernels::lambda_kernel<ld>(p.nu, p.kappa, detail::cx<ld>(z));
        Scaled out;
        out.mantissa = r.mant.to_std();
        out.log_scale = static_cast<double>(r.log_scale);
        return out;
    }

    cplx lambda_eval(const ProblemParams& p, cplx z) { return lambda_eval_scaled(p, z).value(); }

    double lambda_prime_at_pole(const ProblemParams& p, const Mode& m)
    {
        double nu = p.nu, k2 = p.kappa * p.kappa;
        double lg = std::lgamma(nu + 1.0) + nu * std::log(2.0) - (nu + 1.0) * std::log(m.zero);
        return std::exp(lg) * std::fabs(m.jprime) / (2.0 * k2);
    }

    cplx lambda_prime_at_pole_complex(const ProblemParams& p, const Mode& m)
    {
        // d/dz of Gamma 2^nu w^-nu J_nu(w) with w^2 = -i z / kappa^2 at a zero of J_nu
        double mod = lambda_prime_at_pole(p, m);
        return cplx(0.0, m.jprime > 0 ? -mod : mod);
    }

    cplx lambda_product(const ProblemParams& p, cplx z, int factors, bool tail_correction)
    {
        const ZeroTable& t = zeros(p.nu, factors);
        std::complex<long double> prod = 1;
        std::complex<long double> zl(z.real(), z.imag());
        long double k2 = static_cast<long double>(p.kappa) * p.kappa;
        for (int k = 0; k < factors; ++k) {
            long double j = t.zeros[k];
            std::complex<long double> node(0, k2 * j * j);
            prod *= 1.0L - zl / node;
        }
        if (tail_correction) {
            // sum_{k>K} 1/j_k^2 with j_k ~ (k + nu/2 - 1/4) pi, midpoint-summed
            long double shift = static_cast<long double>(factors) + p.nu / 2.0L - 0.25L + 0.5L;
            long double tail = 1.0L / (k2 * ld_pi * ld_pi * shift);
            prod *= std::exp(std::complex<long double>(0, 1) * zl * tail);
        }
        return cplx(prod);
    }

}
