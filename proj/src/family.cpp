#include "degen_control/bessel.hpp"
#include "degen_control/detail/parallel.hpp"
#include "degen_control/moment.hpp"
#include "moment_kernels.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <quadmath.h>

namespace degen_control {

    namespace {

        const Mode& mode_at(const std::vector<Mode>& modes, int k)
        {
            if (k < 1 || k > static_cast<int>(modes.size()))
                throw std::out_of_range("mode index out of range");
            return modes[k - 1];
        }

        Scaled times(const Scaled& a, const Scaled& b)
        {
            return {a.mantissa * b.mantissa, a.log_scale + b.log_scale};
        }

    }

    Scaled F_eval_scaled(const ProblemParams& p, const Multiplier& m, const std::vector<Mode>& modes, int k,
                         cplx z)
    {
        const Mode& md = mode_at(modes, k);
        cplx pole(0.0, md.lambda);
        Scaled hk = multiplier_eval_scaled(m, pole);
        Scaled hz = multiplier_eval_scaled(m, z);
        Scaled psi;
        cplx dz = z - pole;
        if (std::abs(dz) <= 1e-9 * md.lambda) {
            psi.mantissa = 1.0;  // removable singularity
        } else {
            Scaled lam = lambda_eval_scaled(p, z);
            psi.mantissa = lam.mantissa / (lambda_prime_at_pole_complex(p, md) * dz);
            psi.log_scale = lam.log_scale;
        }
        Scaled out = times(psi, hz);
        out.mantissa /= hk.mantissa;
        out.log_scale -= hk.log_scale;
        return out;
    }

    cplx F_eval(const ProblemParams& p, const Multiplier& m, const std::vector<Mode>& modes, int k, cplx z)
    {
        return F_eval_scaled(p, m, modes, k, z).value();
    }

    double F_at_node(const ProblemParams& p, const Multiplier& m, const std::vector<Mode>& modes, int k, int l)
    {
        const Mode& mk = mode_at(modes, k);
        const Mode& ml = mode_at(modes, l);
        if (k == l) return 1.0;
        // Psi_k(i lambda_l) reduces to Bessel data at the two zeros; kappa cancels
        const ZeroTable& t = zeros(p.nu, std::max(k, l));
        double psi = extended::zero_ratio(p.nu, t.zeros[k - 1], t.zeros[l - 1]);
        Scaled hl = multiplier_eval_scaled(m, cplx(0.0, ml.lambda));
        Scaled hk = multiplier_eval_scaled(m, cplx(0.0, mk.lambda));
        return psi * (hl.mantissa.real() / hk.mantissa.real()) * std::exp(hl.log_scale - hk.log_scale);
    }

    std::vector<double> BiorthogonalFamily::psi(int k) const
    {
        std::vector<double> out(shape[k].size());
        double scale = std::exp(log_scale[k]);
        for (std::size_t i = 0; i < out.size(); ++i) {
            out[i] = shape[k][i] == 0.0 ? 0.0 : scale * shape[k][i];
            if (!std::isfinite(out[i])) throw FamilyError("psi samples overflow the floating-point range");
        }
        return out;
    }

    double BiorthogonalFamily::psi_sup(int k) const
    {
        double m = 0.0;
        for (double v : shape[k]) m = std::max(m, std::fabs(v));
        return m == 0.0 ? 0.0 : std::exp(std::log(m) + log_scale[k]);
    }

    namespace {

        struct Envelope {
            std::vector<double> radii;
            std::vector<double> peak_log;   // log sup |F_k| e^{lambda_k T/2} on the real axis
        };

        // Smallest radius beyond which the fitted exp(-B sqrt(tau)) envelope of
        // |F_k| leaves a tail below tol times its L1 norm.
        Envelope truncation_radii(const ProblemParams& p, const Multiplier& m, const std::vector<Mode>& modes,
                                  const FamilyOptions& opts, double tol)
        {
            std::vector<double> centers{0.0};
            for (double t = 1.0; t <= opts.max_radius; t *= 1.05) centers.push_back(t);
            const int window = 8;
            const double period = 2.0 * M_PI / m.a;
            std::vector<double> env(centers.size(), 0.0);  // log of windowed max |Lambda H|
            detail::parallel_for(static_cast<int>(centers.size()), opts.threads, [&](int i) {
                double best = -1e300;
                for (int w = 0; w < window; ++w) {
                    double tau = centers[i] + period * w / window;
                    Scaled v = lambda_eval_scaled(p, tau);
                    best = std::max(best, v.log_abs() + multiplier_eval_scaled(m, tau).log_abs());
                }
                env[i] = best;
            });

            const std::size_t K = modes.size();
            Envelope out;
            out.radii.resize(K);
            out.peak_log.resize(K);
            for (std::size_t k = 0; k < K; ++k) {
                double lk = modes[k].lambda;
                double shift = std::log(std::abs(lambda_prime_at_pole_complex(p, modes[k])))
                               + multiplier_eval_scaled(m, cplx(0.0, lk)).log_abs();
                auto logf = [&](std::size_t i) { return env[i] - std::log(std::hypot(centers[i], lk)) - shift; };
                double ref = logf(0), l1 = 0.0, radius = -1.0;
                for (std::size_t i = 1; i < centers.size(); ++i) {
                    double a = logf(i - 1), b = logf(i);
                    ref = std::max(ref, b);
                    l1 += 0.5 * (std::exp(a - ref) + std::exp(b - ref)) * (centers[i] - centers[i - 1]);
                    double slope = (a - b) / (std::sqrt(centers[i]) - std::sqrt(centers[i - 1]));
                    if (slope <= 0.0 || i < 8) continue;
                    double r = std::sqrt(centers[i]);
                    double tail = std::exp(b - ref) * 2.0 * (r / slope + 1.0 / (slope * slope));
                    if (tail <= tol * l1) { radius = centers[i]; break; }
                }
                if (radius < 0.0) throw FamilyError("inversion radius exceeds the configured cap");
                out.radii[k] = radius * opts.radius_scale;
                out.peak_log[k] = ref + lk * p.horizon_T / 2.0;
            }
            return out;
        }

        using kernels::ScaledT;
        using detail::cx;

        template <class T>
        struct Pole {
            T lambda;
            cx<T> dlam;        // Lambda'(i lambda_k), purely imaginary
            ScaledT<T> hpole;  // H(i lambda_k)
        };

        template <class T>
        std::vector<Pole<T>> pole_data(const ProblemParams& p, const kernels::MultParams<T>& mp, std::size_t K)
        {
            std::vector<extended::quad> jq = extended::refine_zeros(zeros(p.nu, static_cast<int>(K)));
            extended::quad nu = p.nu, kap = p.kappa;
            std::vector<Pole<T>> out(K);
            for (std::size_t k = 0; k < K; ++k) {
                extended::quad j = jq[k];
                extended::quad jp = extended::eval_J_prime(nu, j);
                extended::quad mod = expq(lgammaq(nu + 1) + nu * logq(extended::quad(2)) - (nu + 1) * logq(j))
                                     * fabsq(jp) / (2 * kap * kap);
                out[k].lambda = T(kap * kap * j * j);
                out[k].dlam = cx<T>(T(0), T(jp > 0 ? -mod : mod));
                out[k].hpole = kernels::multiplier_direct_k<T>(mp, cx<T>(T(0), out[k].lambda), 0);
            }
            return out;
        }

        // eta_k is the inverse transform of F_k, sampled at tau_j = j h with
        // h = pi/(2T).  On s_i = i T/N - T/2 the phase s_i tau_j is
        // pi i j/(2N) - pi j/4, so after an eighth-root twist the sum is a
        // length-4N DFT.  psi_k(t) = e^{lambda_k T/2} eta_k(t - T/2).
        template <class T>
        void invert_family(const ProblemParams& p, const Multiplier& m, std::size_t K,
                           const std::vector<int>& reach, int N, int threads, BiorthogonalFamily& fam)
        {
            using namespace detail;
            const T pi = real_traits<T>::pi();
            const T Th = T(fam.horizon_T);
            const T h = pi / (T(2) * Th);
            kernels::MultParams<T> mp;
            T kap = T(p.kappa), dl = T(m.delta_param);
            mp.a = Th * (T(1) - dl) / T(2);
            mp.theta = (T(1) + dl) * (T(1) + dl) / (kap * kap * Th * (T(1) - dl));
            mp.log_norm = -kernels::log_bump_mass<T>(mp.theta);
            std::vector<Pole<T>> poles = pole_data<T>(p, mp, K);

            // Lambda(tau) H(tau) is shared by all modes; conjugate-symmetric in tau
            const int jmax = *std::max_element(reach.begin(), reach.end());
            std::vector<ScaledT<T>> base(jmax + 1);
            parallel_for(jmax + 1, threads, [&](int j) {
                cx<T> tau(T(j) * h);
                base[j] = kernels::lambda_kernel<T>(T(p.nu), kap, tau) * kernels::multiplier_k<T>(mp, tau);
            });

            const T r2 = r_sqrt(T(2)) / T(2);
            const std::array<cx<T>, 8> twist{cx<T>(1), cx<T>(r2, -r2), cx<T>(0, -1), cx<T>(-r2, -r2),
                                             cx<T>(-1), cx<T>(-r2, r2), cx<T>(0, 1), cx<T>(r2, r2)};
            const long M = 4L * N;
            const double a = m.a;
            fam.log_scale.assign(K, 0.0);
            fam.shape.assign(K, std::vector<double>(N + 1, 0.0));
            fam.shape_low.assign(K, std::vector<double>(N + 1, 0.0));
            fam.imag_residue.assign(K, 0.0);

            parallel_for(static_cast<int>(K), threads, [&](int k) {
                const Pole<T>& pk = poles[k];
                T ref = T(-1e300);
                for (int j = 0; j <= reach[k]; ++j) {
                    if (base[j].mant == cx<T>(0)) continue;
                    ref = std::max(ref, base[j].log_abs() - r_log(r_hypot(T(j) * h, pk.lambda)));
                }
                cx<T> unit = pk.dlam / abs(pk.dlam);
                std::vector<cx<T>> folded(M);
                for (int j = -reach[k]; j <= reach[k]; ++j) {
                    const ScaledT<T>& b = base[std::abs(j)];
                    cx<T> mant = j < 0 ? conj(b.mant) : b.mant;
                    cx<T> v = mant * r_exp(b.log_scale - ref) / (unit * cx<T>(T(j) * h, -pk.lambda));
                    long r = ((j % M) + M) % M;
                    folded[r] += v * twist[((j % 8) + 8) % 8];
                }
                kernels::inverse_dft(folded);

                const T full = pk.lambda * Th / T(2) + ref - r_log(abs(pk.dlam)) - pk.hpole.log_abs()
                               + r_log(h / (T(2) * pi));
                // stored scale is a double; fold the rounding into the samples
                const double scale = double(full);
                const T adjust = r_exp(full - T(scale));
                fam.log_scale[k] = scale;
                T mr = 0, mi = 0;
                for (int i = 0; i <= N; ++i) {
                    double s = fam.times[i] - fam.horizon_T / 2.0;
                    // the transform is supported in [-a, a]
                    if (std::fabs(s) >= a) continue;
                    mr = std::max(mr, r_abs(folded[i].re));
                    mi = std::max(mi, r_abs(folded[i].im));
                    T v = folded[i].re * adjust;
                    double hi = double(v);
                    fam.shape[k][i] = hi;
                    fam.shape_low[k][i] = double(v - T(hi));
                }
                fam.imag_residue[k] = mr > T(0) ? double(mi / mr) : 0.0;
            });

            // Gram matrix of the stored samples against the exact exponentials
            fam.gram.assign(K, std::vector<double>(K, 0.0));
            const T dt = Th / T(N);
            double worst = 0.0;
            for (std::size_t k = 0; k < K; ++k) {
                for (std::size_t l = 0; l < K; ++l) {
                    T g = 0;
                    for (int i = 0; i <= N; ++i) {
                        T v = T(fam.shape[k][i]) + T(fam.shape_low[k][i]);
                        if (v == T(0)) continue;
                        T w = (i == 0 || i == N) ? dt / T(2) : dt;
                        g += w * v * r_exp(T(fam.log_scale[k]) - poles[l].lambda * (Th - T(i) * dt));
                    }
                    double gd = double(g);
                    if (!std::isfinite(gd)) throw FamilyError("gram entry overflows the floating-point range");
                    fam.gram[k][l] = gd;
                    worst = std::max(worst, double(r_abs(g - T(k == l ? 1 : 0))));
                }
            }
            fam.gram_max_deviation = worst;
        }

    }

    BiorthogonalFamily biorthogonal_family(const ProblemParams& params, const std::vector<Mode>& modes, double T,
                                           double delta_param, int N, const FamilyOptions& opts)
    {
        if (N < 64) throw std::invalid_argument("time grid needs at least 64 intervals");
        if (modes.empty()) throw std::invalid_argument("no modes to synthesize");
        ProblemParams p = params;
        p.horizon_T = T;
        BiorthogonalFamily fam;
        fam.horizon_T = T;
        fam.delta_param = delta_param;
        fam.multiplier = make_multiplier(p, delta_param);
        const Multiplier& m = fam.multiplier;
        const std::size_t K = modes.size();
        for (const Mode& md : modes) fam.lambdas.push_back(md.lambda);

        Envelope env = truncation_radii(p, m, modes, opts, opts.tail_tol);
        fam.cancellation_log = *std::max_element(env.peak_log.begin(), env.peak_log.end());

        bool ext = opts.precision == Precision::extended;
        if (opts.precision == Precision::automatic) {
            // worth it when 64-bit rounding is visible at 1e-10 and 113-bit is not
            double lost = fam.cancellation_log / std::log(10.0);
            ext = lost > 6.0 && lost < 24.0;
        }
        if (ext) env = truncation_radii(p, m, modes, opts, opts.extended_tail_tol);
        fam.extended = ext;
        fam.truncation_radius = env.radii;

        const double h = M_PI / (2.0 * T);
        std::vector<int> reach(K);
        for (std::size_t k = 0; k < K; ++k) reach[k] = static_cast<int>(std::ceil(fam.truncation_radius[k] / h));

        fam.times.resize(N + 1);
        for (int i = 0; i <= N; ++i) fam.times[i] = i * T / N;
        if (ext) invert_family<extended::quad>(p, m, K, reach, N, opts.threads, fam);
        else invert_family<long double>(p, m, K, reach, N, opts.threads, fam);
        return fam;
    }

    ControlSignal synthesize_control(const State& u0, const BiorthogonalFamily& family,
                                     const std::vector<Mode>& modes)
    {
        int K = u0.truncation();
        if (K > family.size() || K > static_cast<int>(modes.size()))
            throw std::invalid_argument("initial state has more modes than the family");
        ControlSignal f;
        f.horizon_T = family.horizon_T;
        std::size_t n = family.times.size();
        f.samples.assign(n, 0.0);
        for (int k = 0; k < K; ++k) {
            double a = u0.coefficients[k];
            if (a == 0.0) continue;
            // e^{-lambda T} and e^{lambda T/2} meet in the exponent, not in floating point
            double expo = family.log_scale[k] - modes[k].lambda * family.horizon_T;
            double coef = -a / modes[k].gen_deriv;
            for (std::size_t i = 0; i < n; ++i) {
                double v = family.shape[k][i];
                if (v != 0.0) f.samples[i] += coef * v * std::exp(expo);
            }
        }
        return f;
    }

}
