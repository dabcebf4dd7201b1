#pragma once

#include "degen_control/evolution.hpp"
#include "degen_control/moment.hpp"
#include "degen_control/params.hpp"
#include "degen_control/spectrum.hpp"

#include <string>
#include <vector>

namespace degen_control {

    // Factor M(T, alpha, nu, delta) of the upper cost bound.
    double upper_factor(const ProblemParams& p, double delta_param);

    // Upper bound on the control cost; c_cal stands in for the unspecified
    // absolute constant.
    double upper_bound(const ProblemParams& p, double delta_param, double c_cal = 1.0);

    // Lower bound on the control cost with the constant set to 1.
    double lower_bound(const ProblemParams& p);

    // sup-norm envelope for psi_k with its constant set to c
    double psi_sup_envelope(const ProblemParams& p, const Multiplier& m, const Mode& mode, double c = 1.0);

    // Normalized first mode: a_1 = |J'(j_1)| / sqrt(2 kappa), all others zero.
    State first_mode_state(const ProblemParams& p, const std::vector<Mode>& modes);

    // Exact value of int_0^T f e^{lambda_1 t} dt for that state.
    double first_moment_target(const ProblemParams& p, const Mode& first);

    // Smallest c_cal with sup|f| sqrt(T) <= upper_bound(c_cal) ||u0||.
    double calibrate_upper_constant(const ProblemParams& p, double delta_param, const ControlSignal& f,
                                    double u0_norm);

    struct CostReport {
        ProblemParams params;
        double delta_param = 0.5;
        double c_cal = 1.0;
        double upper_value = 0.0;
        double lower_value = 0.0;
        double achieved_L2 = 0.0;
        double achieved_sup = 0.0;
    };

    CostReport cost_report(const ProblemParams& p, double delta_param, double c_cal, const ControlSignal& f);

    struct ProofItem {
        std::string name;
        bool pass = false;
        double worst = 0.0;      // largest violation margin (<= 0 when passing) or residual
        std::string witness;     // where the worst case occurred
    };

    struct ProofReport {
        std::vector<ProofItem> items;
        bool all_pass() const;
    };

    // |Lambda(x)| against its growth bound on 2 * samples real points up to
    // x_max (both signs), plus the complex form on the same radii.
    ProofItem check_lambda_growth(const ProblemParams& p, int samples = 200, double x_max = 1e6);

    // Lower bound on H(i x) at x = +-lambda_1, +-lambda_3.
    ProofItem check_multiplier_lower(const Multiplier& m, const std::vector<Mode>& modes);

    // |H(z)| <= exp(a |Im z|) at pseudo-random complex points.
    ProofItem check_multiplier_upper(const Multiplier& m, int samples = 100, unsigned seed = 7);

    // F_k(i lambda_l) = delta_kl for k, l <= K.
    ProofItem check_kronecker(const ProblemParams& p, const Multiplier& m, const std::vector<Mode>& modes, int K,
                              double tol = 1e-8);

    // Moments int_0^T f e^{lambda_k t} dt of a control for the first-mode state.
    ProofItem check_moment_identity(const ProblemParams& p, const std::vector<Mode>& modes, int K,
                                    const ControlSignal& f, double tol = 1e-6);

    ProofItem check_lower_bound(const ProblemParams& p, const ControlSignal& f);

    // Items (i)-(iv): growth of Lambda, the multiplier inequalities, the moment
    // identity and the lower bound, for a control built for the first-mode state.
    ProofReport verify_proof_chain(const ProblemParams& p, const BiorthogonalFamily& family,
                                   const std::vector<Mode>& modes, const ControlSignal& f);

}
