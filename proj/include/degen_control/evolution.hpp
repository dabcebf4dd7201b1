#pragma once

#include "degen_control/spectrum.hpp"

#include <stdexcept>
#include <vector>

namespace degen_control {

    struct State {
        std::vector<double> coefficients;
        int truncation() const { return static_cast<int>(coefficients.size()); }
        double norm() const;  // weighted L2 norm via Parseval
    };

    // Samples f(t_i), t_i = i T / N, i = 0..N.
    struct ControlSignal {
        std::vector<double> samples;
        double horizon_T = 1.0;

        int intervals() const { return static_cast<int>(samples.size()) - 1; }
        double step() const { return horizon_T / intervals(); }
        double time(int i) const { return i * horizon_T / intervals(); }
        double l2_norm() const;   // trapezoid
        double sup_norm() const;
    };

    ControlSignal zero_control(double T, int N);

    State free_evolve(const State& s, const std::vector<Mode>& modes, double t);

    // Coefficients at time tau (a grid point) under the boundary control f.
    // The state is padded with zeros up to modes.size().
    State controlled_evolve(const State& s, const std::vector<Mode>& modes, const ControlSignal& f,
                            double tau);

    // Coefficient trajectories at every grid time; result[i][k].
    std::vector<std::vector<double>> controlled_trajectory(const State& s, const std::vector<Mode>& modes,
                                                           const ControlSignal& f);

    double negative_norm(const State& s, const std::vector<Mode>& modes, double order);

    double wellposedness_gap(const State& s, const std::vector<Mode>& modes, const ControlSignal& f,
                             double order, double nu);

}
