#include "degen_control/bessel.hpp"

#include <algorithm>
#include <cmath>
#include <mpfr.h>

namespace degen_control {
namespace extended {

    namespace {

        struct Mp {
            mpfr_t v;
            explicit Mp(mpfr_prec_t prec) { mpfr_init2(v, prec); }
            ~Mp() { mpfr_clear(v); }
            Mp(const Mp&) = delete;
            Mp& operator=(const Mp&) = delete;
        };

        // J_nu(x) and J'_nu(x) from the power series; the working precision
        // absorbs the e^x cancellation.
        void series(mpfr_t J, mpfr_t dJ, const mpfr_t nu, const mpfr_t x, mpfr_prec_t prec)
        {
            Mp half(prec), q(prec), term(prec), tmp(prec), lead(prec);
            mpfr_div_ui(half.v, x, 2, MPFR_RNDN);
            mpfr_sqr(q.v, half.v, MPFR_RNDN);
            mpfr_neg(q.v, q.v, MPFR_RNDN);
            // (x/2)^nu / Gamma(nu+1)
            mpfr_log(lead.v, half.v, MPFR_RNDN);
            mpfr_mul(lead.v, lead.v, nu, MPFR_RNDN);
            mpfr_add_ui(tmp.v, nu, 1, MPFR_RNDN);
            mpfr_lngamma(tmp.v, tmp.v, MPFR_RNDN);
            mpfr_sub(lead.v, lead.v, tmp.v, MPFR_RNDN);
            mpfr_exp(term.v, lead.v, MPFR_RNDN);
            mpfr_set(J, term.v, MPFR_RNDN);
            mpfr_mul(dJ, term.v, nu, MPFR_RNDN);
            double xd = mpfr_get_d(x, MPFR_RNDN);
            for (long m = 1; m < 100000; ++m) {
                mpfr_mul(term.v, term.v, q.v, MPFR_RNDN);
                mpfr_add_ui(tmp.v, nu, m, MPFR_RNDN);
                mpfr_mul_ui(tmp.v, tmp.v, m, MPFR_RNDN);
                mpfr_div(term.v, term.v, tmp.v, MPFR_RNDN);
                mpfr_add(J, J, term.v, MPFR_RNDN);
                mpfr_add_ui(tmp.v, nu, 2 * m, MPFR_RNDN);
                mpfr_mul(tmp.v, tmp.v, term.v, MPFR_RNDN);
                mpfr_add(dJ, dJ, tmp.v, MPFR_RNDN);
                if (m > xd && !mpfr_zero_p(term.v)
                    && mpfr_get_exp(term.v) < mpfr_get_exp(lead.v) - static_cast<mpfr_exp_t>(prec) - 8)
                    break;
                if (m > xd && mpfr_zero_p(term.v)) break;
            }
            mpfr_div(dJ, dJ, x, MPFR_RNDN);
        }

        void polish(mpfr_t z, const mpfr_t nu, mpfr_prec_t prec)
        {
            Mp J(prec), dJ(prec), step(prec);
            for (int it = 0; it < 40; ++it) {
                series(J.v, dJ.v, nu, z, prec);
                mpfr_div(step.v, J.v, dJ.v, MPFR_RNDN);
                mpfr_sub(z, z, step.v, MPFR_RNDN);
                if (mpfr_zero_p(step.v)
                    || mpfr_get_exp(step.v) < mpfr_get_exp(z) - static_cast<mpfr_exp_t>(prec) + 16)
                    break;
            }
        }

    }

    double zero_ratio(double nu, double zero_k, double zero_l)
    {
        if (zero_k == zero_l) return 1.0;
        double top = std::max(zero_k, zero_l);
        mpfr_prec_t prec = 256 + static_cast<mpfr_prec_t>(std::ceil(1.5 * top));
        Mp n(prec), jk(prec), jl(prec), J(prec), dJ(prec), Jl(prec), dJl(prec), num(prec), den(prec), t(prec);
        mpfr_set_d(n.v, nu, MPFR_RNDN);
        mpfr_set_d(jk.v, zero_k, MPFR_RNDN);
        mpfr_set_d(jl.v, zero_l, MPFR_RNDN);
        polish(jk.v, n.v, prec);
        polish(jl.v, n.v, prec);
        series(J.v, dJ.v, n.v, jk.v, prec);
        series(Jl.v, dJl.v, n.v, jl.v, prec);
        // log(2 j_k^{nu+1} / j_l^nu)
        mpfr_log(num.v, jk.v, MPFR_RNDN);
        mpfr_add_ui(t.v, n.v, 1, MPFR_RNDN);
        mpfr_mul(num.v, num.v, t.v, MPFR_RNDN);
        mpfr_log(t.v, jl.v, MPFR_RNDN);
        mpfr_mul(t.v, t.v, n.v, MPFR_RNDN);
        mpfr_sub(num.v, num.v, t.v, MPFR_RNDN);
        mpfr_exp(num.v, num.v, MPFR_RNDN);
        mpfr_mul_ui(num.v, num.v, 2, MPFR_RNDN);
        mpfr_mul(num.v, num.v, Jl.v, MPFR_RNDN);
        mpfr_sqr(den.v, jl.v, MPFR_RNDN);
        mpfr_sqr(t.v, jk.v, MPFR_RNDN);
        mpfr_sub(den.v, den.v, t.v, MPFR_RNDN);
        mpfr_mul(den.v, den.v, dJ.v, MPFR_RNDN);
        mpfr_div(num.v, num.v, den.v, MPFR_RNDN);
        return mpfr_get_d(num.v, MPFR_RNDN);
    }

}
}
