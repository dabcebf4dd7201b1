#include "degen_control/bounds.hpp"

#include "degen_control/bessel.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace degen_control {

    namespace {

        double weight_sum(const ProblemParams& p)
        {
            return std::sqrt(p.mu_crit) + std::sqrt(p.mu_crit - p.mu);
        }

        std::string at(const char* label, double x)
        {
            std::ostringstream os;
            os << label << "=" << x;
            return os.str();
        }

    }

    double upper_factor(const ProblemParams& p, double delta_param)
    {
        double T = p.horizon_T, k = p.kappa, d = delta_param;
        double j1 = zeros(p.nu, 1).zeros[0];
        double lead = 1.0 + 1.0 / ((1.0 - d) * k * k * T);
        double mid = std::exp(1.0 / (std::sqrt(2.0) * k)) + std::exp(3.0 / ((1.0 - d) * k * k * T)) / (d * d * d);
        double tail = std::exp(-std::pow(1.0 - d, 1.5) * std::pow(T, 1.5) / (8.0 * std::sqrt(1.0 + T)) * k * k * k
                               * j1 * j1);
        return lead * mid * tail;
    }

    double upper_bound(const ProblemParams& p, double delta_param, double c_cal)
    {
        double T = p.horizon_T, k = p.kappa;
        double j1 = zeros(p.nu, 1).zeros[0];
        return c_cal * upper_factor(p, delta_param) * std::sqrt(T) / std::sqrt(k) / weight_sum(p)
               * std::exp(-0.5 * T * k * k * j1 * j1);
    }

    double lower_bound(const ProblemParams& p)
    {
        const ZeroTable& t = zeros(p.nu, 2);
        double j1 = t.zeros[0], j2 = t.zeros[1], nu = p.nu, k = p.kappa, T = p.horizon_T;
        double jp = std::fabs(eval_J_prime(nu, j1));
        double log_num = nu * std::log(2.0) + std::lgamma(nu + 1.0) + std::log(jp) + (0.5 - std::log(2.0) / M_PI) * j2;
        double log_den = 0.5 * std::log(2.0 * T * k) + std::log(weight_sum(p)) + nu * std::log(j1);
        return std::exp(log_num - log_den - (j1 * j1 + 0.5 * j2 * j2) * k * k * T);
    }

    double psi_sup_envelope(const ProblemParams& p, const Multiplier& m, const Mode& mode, double c)
    {
        double root = std::sqrt(m.theta + 1.0), k = p.kappa;
        double C = c * root * (std::exp(1.0 / (std::sqrt(2.0) * k)) + root * k * k * std::exp(0.75 * m.theta)
                                                                      / std::pow(m.delta_param, 3));
        double lp = lambda_prime_at_pole(p, mode);
        return C / (mode.lambda * lp)
               * std::exp(p.horizon_T * mode.lambda / 2.0 - m.a * mode.lambda / (2.0 * root));
    }

    State first_mode_state(const ProblemParams& p, const std::vector<Mode>& modes)
    {
        if (modes.empty()) throw std::invalid_argument("first_mode_state: no modes");
        State s;
        s.coefficients.assign(modes.size(), 0.0);
        s.coefficients[0] = std::fabs(modes[0].jprime) / std::sqrt(2.0 * p.kappa);
        return s;
    }

    double first_moment_target(const ProblemParams& p, const Mode& first)
    {
        double nu = p.nu, k = p.kappa, j1 = first.zero;
        double log_mag = nu * std::log(2.0) + std::lgamma(nu + 1.0) + 2.0 * std::log(std::fabs(first.jprime))
                         - std::log(2.0 * k * (std::sqrt(p.mu_crit) + k * nu)) - nu * std::log(j1);
        return -std::exp(log_mag);
    }

    double calibrate_upper_constant(const ProblemParams& p, double delta_param, const ControlSignal& f,
                                    double u0_norm)
    {
        return f.sup_norm() * std::sqrt(p.horizon_T) / (upper_bound(p, delta_param, 1.0) * u0_norm);
    }

    CostReport cost_report(const ProblemParams& p, double delta_param, double c_cal, const ControlSignal& f)
    {
        CostReport r;
        r.params = p;
        r.delta_param = delta_param;
        r.c_cal = c_cal;
        r.upper_value = upper_bound(p, delta_param, c_cal);
        r.lower_value = lower_bound(p);
        r.achieved_L2 = f.l2_norm();
        r.achieved_sup = f.sup_norm();
        return r;
    }

    bool ProofReport::all_pass() const
    {
        for (const ProofItem& it : items)
            if (!it.pass) return false;
        return true;
    }

    ProofItem check_lambda_growth(const ProblemParams& p, int samples, double x_max)
    {
        ProofItem item{"lambda growth", true, -1e300, ""};
        const double k = p.kappa;
        auto record = [&](double margin, const std::string& where) {
            if (margin > item.worst) { item.worst = margin; item.witness = where; }
        };
        for (int i = 0; i < samples; ++i) {
            double x = std::pow(10.0, -2.0 + (std::log10(x_max) + 2.0) * i / (samples - 1));
            for (double sx : {x, -x}) {
                double real_bound = std::sqrt(std::fabs(sx)) / (std::sqrt(2.0) * k);
                record(lambda_eval_scaled(p, sx).log_abs() - real_bound, at("x", sx));
                // complex form, on a ray off the real axis
                cplx z = std::polar(std::fabs(sx), sx > 0 ? 0.7 : 2.3);
                record(lambda_eval_scaled(p, z).log_abs() - std::sqrt(std::abs(z)) / k, at("|z|", std::abs(z)));
            }
        }
        item.pass = item.worst <= 1e-10;
        return item;
    }

    ProofItem check_multiplier_lower(const Multiplier& m, const std::vector<Mode>& modes)
    {
        ProofItem item{"multiplier lower bound", true, -1e300, ""};
        double root = std::sqrt(m.theta + 1.0);
        for (int idx : {0, 2}) {
            if (idx >= static_cast<int>(modes.size())) continue;
            for (double x : {modes[idx].lambda, -modes[idx].lambda}) {
                Scaled h = multiplier_eval_scaled(m, cplx(0.0, x));
                double log_bound = m.a * std::fabs(x) / (2.0 * root) - std::log(11.0 * root);
                double margin = log_bound - h.log_abs();
                if (h.mantissa.real() <= 0.0) margin = 1e300;
                if (margin > item.worst) { item.worst = margin; item.witness = at("x", x); }
            }
        }
        item.pass = item.worst <= 0.0;
        return item;
    }

    ProofItem check_multiplier_upper(const Multiplier& m, int samples, unsigned seed)
    {
        ProofItem item{"multiplier growth", true, -1e300, ""};
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> logr(-2.0, 4.0), ang(-M_PI, M_PI);
        for (int i = 0; i < samples; ++i) {
            cplx z = std::polar(std::pow(10.0, logr(rng)), ang(rng));
            double margin = multiplier_eval_scaled(m, z).log_abs() - m.a * std::fabs(z.imag());
            if (margin > item.worst) {
                std::ostringstream os;
                os << "z=" << z.real() << (z.imag() < 0 ? "" : "+") << z.imag() << "i";
                item.worst = margin;
                item.witness = os.str();
            }
        }
        item.pass = item.worst <= 1e-10;
        return item;
    }

    ProofItem check_kronecker(const ProblemParams& p, const Multiplier& m, const std::vector<Mode>& modes, int K,
                              double tol)
    {
        ProofItem item{"kronecker", true, -1.0, ""};
        for (int k = 1; k <= K; ++k) {
            for (int l = 1; l <= K; ++l) {
                double err = std::fabs(F_at_node(p, m, modes, k, l) - (k == l ? 1.0 : 0.0));
                if (err > item.worst) {
                    item.worst = err;
                    item.witness = "k=" + std::to_string(k) + ",l=" + std::to_string(l);
                }
            }
        }
        item.pass = item.worst <= tol;
        return item;
    }

    ProofItem check_moment_identity(const ProblemParams& p, const std::vector<Mode>& modes, int K,
                                    const ControlSignal& f, double tol)
    {
        ProofItem item{"moment identity", true, -1.0, ""};
        const double target = first_moment_target(p, modes.at(0));
        const int n = f.intervals();
        const long double h = f.step();
        for (int k = 1; k <= K && k <= static_cast<int>(modes.size()); ++k) {
            long double s = 0.0L;
            for (int i = 0; i <= n; ++i) {
                long double w = (i == 0 || i == n) ? h / 2 : h;
                s += w * f.samples[i] * std::exp(static_cast<long double>(modes[k - 1].lambda) * f.time(i));
            }
            double err = k == 1 ? std::fabs(static_cast<double>(s) / target - 1.0)
                                : std::fabs(static_cast<double>(s));
            if (!std::isfinite(err)) err = HUGE_VAL;
            if (err > item.worst) {
                item.worst = err;
                item.witness = "k=" + std::to_string(k);
            }
        }
        item.pass = item.worst <= tol;
        return item;
    }

    ProofItem check_lower_bound(const ProblemParams& p, const ControlSignal& f)
    {
        ProofItem item{"lower bound", true, 0.0, ""};
        double lb = lower_bound(p), got = f.l2_norm();
        item.worst = lb - got;
        std::ostringstream os;
        os << "L2=" << got << ",bound=" << lb;
        item.witness = os.str();
        item.pass = got >= lb;
        return item;
    }

    ProofReport verify_proof_chain(const ProblemParams& p, const BiorthogonalFamily& family,
                                   const std::vector<Mode>& modes, const ControlSignal& f)
    {
        ProofReport r;
        r.items.push_back(check_lambda_growth(p));
        ProofItem lower = check_multiplier_lower(family.multiplier, modes);
        ProofItem upper = check_multiplier_upper(family.multiplier);
        ProofItem both{"multiplier inequalities", lower.pass && upper.pass, std::max(lower.worst, upper.worst),
                       lower.pass ? upper.witness : lower.witness};
        r.items.push_back(both);
        r.items.push_back(check_moment_identity(p, modes, family.size(), f));
        r.items.push_back(check_lower_bound(p, f));
        return r;
    }

}
