#include "degen_control/evolution.hpp"

#include <algorithm>
#include <cmath>

namespace degen_control {

    double State::norm() const
    {
        double s = 0.0;
        for (double a : coefficients) s += a * a;
        return std::sqrt(s);
    }

    double ControlSignal::l2_norm() const
    {
        int n = intervals();
        double h = step(), s = 0.0;
        for (int i = 0; i <= n; ++i) {
            double w = (i == 0 || i == n) ? 0.5 : 1.0;
            s += w * samples[i] * samples[i];
        }
        return std::sqrt(h * s);
    }

    double ControlSignal::sup_norm() const
    {
        double m = 0.0;
        for (double v : samples) m = std::max(m, std::fabs(v));
        return m;
    }

    ControlSignal zero_control(double T, int N)
    {
        ControlSignal f;
        f.horizon_T = T;
        f.samples.assign(N + 1, 0.0);
        return f;
    }

    State free_evolve(const State& s, const std::vector<Mode>& modes, double t)
    {
        if (t < 0.0) throw std::invalid_argument("free_evolve: negative time");
        State out = s;
        for (std::size_t k = 0; k < out.coefficients.size() && k < modes.size(); ++k)
            out.coefficients[k] *= std::exp(-modes[k].lambda * t);
        return out;
    }

    namespace {

        int grid_index(const ControlSignal& f, double tau)
        {
            int n = f.intervals();
            double pos = tau / f.horizon_T * n;
            int i = static_cast<int>(std::lround(pos));
            if (i < 1 || i > n || std::fabs(pos - i) > 1e-9 * n)
                throw std::invalid_argument("controlled_evolve: tau must be a grid point in (0, T]");
            return i;
        }

        double duhamel(const Mode& m, const ControlSignal& f, int upto)
        {
            double h = f.step(), tau = f.time(upto), s = 0.0;
            for (int i = 0; i <= upto; ++i) {
                double w = (i == 0 || i == upto) ? 0.5 : 1.0;
                s += w * f.samples[i] * std::exp(-m.lambda * (tau - f.time(i)));
            }
            return h * s;
        }

    }

    State controlled_evolve(const State& s, const std::vector<Mode>& modes, const ControlSignal& f,
                            double tau)
    {
        if (s.coefficients.size() > modes.size())
            throw std::invalid_argument("controlled_evolve: state has more coefficients than modes");
        int idx = grid_index(f, tau);
        double t = f.time(idx);
        State out;
        out.coefficients.resize(modes.size(), 0.0);
        for (std::size_t k = 0; k < out.coefficients.size(); ++k) {
            double a = k < s.coefficients.size() ? s.coefficients[k] : 0.0;
            const Mode& m = modes[k];
            out.coefficients[k] = std::exp(-m.lambda * t) * a + m.gen_deriv * duhamel(m, f, idx);
        }
        return out;
    }

    std::vector<std::vector<double>> controlled_trajectory(const State& s, const std::vector<Mode>& modes,
                                                           const ControlSignal& f)
    {
        int n = f.intervals();
        double h = f.step();
        std::size_t K = modes.size();
        std::vector<std::vector<double>> out(n + 1, std::vector<double>(K, 0.0));
        for (std::size_t k = 0; k < K; ++k) {
            double a = k < s.coefficients.size() ? s.coefficients[k] : 0.0;
            double decay = std::exp(-modes[k].lambda * h);
            double c = a;
            out[0][k] = c;
            // one trapezoid panel per step reproduces the composite rule exactly
            for (int i = 1; i <= n; ++i) {
                c = decay * c + modes[k].gen_deriv * 0.5 * h * (decay * f.samples[i - 1] + f.samples[i]);
                out[i][k] = c;
            }
        }
        return out;
    }

    double negative_norm(const State& s, const std::vector<Mode>& modes, double order)
    {
        double sum = 0.0;
        for (std::size_t k = 0; k < s.coefficients.size() && k < modes.size(); ++k) {
            double a = s.coefficients[k];
            sum += std::pow(modes[k].lambda, -order) * a * a;
        }
        return std::sqrt(sum);
    }

    double wellposedness_gap(const State& s, const std::vector<Mode>& modes, const ControlSignal& f,
                             double order, double nu)
    {
        if (!(order > nu)) throw std::invalid_argument("wellposedness_gap: need order > nu");
        auto traj = controlled_trajectory(s, modes, f);
        double worst = 0.0;
        for (const auto& row : traj) {
            State u{row};
            worst = std::max(worst, negative_norm(u, modes, order));
        }
        return worst / (negative_norm(s, modes, order) + f.l2_norm());
    }

}
