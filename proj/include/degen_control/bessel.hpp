#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace degen_control {

    // Raised by the evaluators on domain errors and by the zero finder when
    // refinement does not converge.  `index` is the failing zero (0 if n/a).
    class BesselError : public std::runtime_error {
    public:
        BesselError(const std::string& what, int index = 0)
            : std::runtime_error(what), index(index) {}
        int index;
    };

    double eval_J(double nu, double x);
    double eval_J_prime(double nu, double x);

    // Two-term McMahon estimate of the k-th positive zero of J_nu.
    double zero_seed(double nu, int k);

    struct ZeroTable {
        double order_nu = 0.0;
        std::vector<double> zeros;
        double refinement_tol = 0.0;
    };

    // First K positive zeros.  Tables are memoized per (nu, K, tol) and the
    // returned reference stays valid for the life of the process.
    const ZeroTable& zeros(double nu, int K, double tol = 1e-13);

    // Generic kernel, instantiated for double, long double and __float128.
    template <class T> T bessel_j(T nu, T x);

    namespace extended {
        using quad = __float128;
        quad eval_J(quad nu, quad x);
        quad eval_J_prime(quad nu, quad x);
        // Re-polish a double table in 113-bit arithmetic.
        std::vector<quad> refine_zeros(const ZeroTable& table);

        // 2 j_k^{nu+1} J_nu(j_l) / (j_l^nu J'_nu(j_k) (j_l^2 - j_k^2)) with both
        // zeros re-polished in MPFR at a precision scaled to the arguments.
        // Zero for k != l up to that precision, 1 for k == l.
        double zero_ratio(double nu, double zero_k, double zero_l);
    }

}
