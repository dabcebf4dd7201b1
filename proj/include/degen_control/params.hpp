#pragma once

#include <stdexcept>
#include <string>

namespace degen_control {

    class ParamError : public std::invalid_argument {
    public:
        using std::invalid_argument::invalid_argument;
    };

    struct ProblemParams {
        double alpha = 0.0;
        double beta = 0.0;
        double mu = 0.0;
        double horizon_T = 1.0;
        double kappa = 1.0;
        double nu = 0.5;
        double gamma = 0.0;
        double mu_crit = 0.25;
    };

    // Bessel orders above this are rejected: mode counts stop being meaningful.
    inline constexpr double max_order = 150.0;

    double critical_coefficient(double delta);

    // Validates admissibility and fills in the derived constants.
    // Throws ParamError naming the violated constraint.
    ProblemParams derive(double alpha, double beta, double mu, double T);

}
