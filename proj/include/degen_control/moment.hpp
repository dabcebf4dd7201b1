#pragma once

#include "degen_control/evolution.hpp"
#include "degen_control/params.hpp"
#include "degen_control/spectrum.hpp"

#include <complex>
#include <stdexcept>
#include <vector>

namespace degen_control {

    using cplx = std::complex<double>;

    // value = mantissa * exp(log_scale); keeps far-out evaluations finite.
    struct Scaled {
        cplx mantissa{0.0, 0.0};
        double log_scale = 0.0;

        cplx value() const;
        double log_abs() const;
    };

    class FamilyError : public std::runtime_error {
    public:
        using std::runtime_error::runtime_error;
    };

    Scaled lambda_eval_scaled(const ProblemParams& p, cplx z);
    cplx lambda_eval(const ProblemParams& p, cplx z);

    // Modulus of the derivative at the zero i lambda_k.
    double lambda_prime_at_pole(const ProblemParams& p, const Mode& m);
    // Same with its phase (the derivative is purely imaginary).
    cplx lambda_prime_at_pole_complex(const ProblemParams& p, const Mode& m);

    // Finite product over the first `factors` zeros, for cross-checking.
    // With tail_correction the omitted factors are folded in to first order
    // through the asymptotic zero positions.
    cplx lambda_product(const ProblemParams& p, cplx z, int factors, bool tail_correction = false);

    struct Multiplier {
        double a = 0.0;
        double theta = 0.0;
        double delta_param = 0.5;
        double normalization = 0.0;      // may underflow for large theta
        double log_normalization = 0.0;
    };

    Multiplier make_multiplier(const ProblemParams& p, double delta_param);

    Scaled multiplier_eval_scaled(const Multiplier& m, cplx z);
    cplx multiplier_eval(const Multiplier& m, cplx z);
    // Plain Gauss-Legendre evaluation, no path deformation.
    Scaled multiplier_direct(const Multiplier& m, cplx z, int nodes = 0);

    Scaled F_eval_scaled(const ProblemParams& p, const Multiplier& m, const std::vector<Mode>& modes, int k,
                         cplx z);
    cplx F_eval(const ProblemParams& p, const Multiplier& m, const std::vector<Mode>& modes, int k, cplx z);

    // F_k(i lambda_l) with the Bessel part in multiprecision.  The double
    // path cannot resolve these: rounding lambda_l to double is amplified by
    // H(i lambda_l)/H(i lambda_k).
    double F_at_node(const ProblemParams& p, const Multiplier& m, const std::vector<Mode>& modes, int k, int l);

    enum class Precision { automatic, standard, extended };

    struct FamilyOptions {
        double tail_tol = 1e-16;     // tail of |F_k| beyond R_k relative to its L1 norm
        double extended_tail_tol = 1e-32;
        double max_radius = 5e6;
        double radius_scale = 1.0;   // multiplies every R_k (convergence studies)
        int threads = 1;
        // automatic: 113-bit inversion when the cancellation in the Fourier
        // sum defeats 64-bit arithmetic but not 113-bit arithmetic
        Precision precision = Precision::automatic;
    };

    struct BiorthogonalFamily {
        double horizon_T = 1.0;
        double delta_param = 0.5;
        Multiplier multiplier;
        std::vector<double> lambdas;
        std::vector<double> times;              // N + 1 grid points on [0, T]
        std::vector<double> log_scale;          // psi_k = exp(log_scale[k]) * shape[k]
        std::vector<std::vector<double>> shape;
        // low-order part of each sample (double-double storage)
        std::vector<std::vector<double>> shape_low;
        std::vector<double> truncation_radius;
        std::vector<double> imag_residue;       // max |Im eta_k| / max |eta_k|
        std::vector<std::vector<double>> gram;
        double gram_max_deviation = 0.0;
        bool extended = false;                  // inversion ran in 113-bit arithmetic
        // log of max_k e^{lambda_k T/2} sup_tau |F_k(tau)|: the absolute
        // rounding error of psi_k is roughly eps times its exponential
        double cancellation_log = 0.0;

        int size() const { return static_cast<int>(shape.size()); }
        std::vector<double> psi(int k) const;   // materialized samples, throws on overflow
        double psi_sup(int k) const;            // sup norm, may be +inf
    };

    BiorthogonalFamily biorthogonal_family(const ProblemParams& p, const std::vector<Mode>& modes, double T,
                                           double delta_param, int N, const FamilyOptions& opts = {});

    // Control driving u0 to rest; uses the first u0.truncation() members.
    ControlSignal synthesize_control(const State& u0, const BiorthogonalFamily& family,
                                     const std::vector<Mode>& modes);

}
