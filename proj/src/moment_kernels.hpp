#pragma once
// Precision-generic kernels behind the moment module.  Instantiated for long
// double / double (public API) and __float128 (extended family construction).

#include "degen_control/detail/cx.hpp"
#include "degen_control/detail/real_math.hpp"
#include "degen_control/quadrature.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <mutex>
#include <vector>

namespace degen_control {
namespace kernels {

    using namespace detail;

    template <class T>
    struct ScaledT {
        cx<T> mant{};
        T log_scale{};
        T log_abs() const { return detail::r_log(abs(mant)) + log_scale; }
    };

    template <class T>
    ScaledT<T> operator*(const ScaledT<T>& a, const ScaledT<T>& b)
    {
        return {a.mant * b.mant, a.log_scale + b.log_scale};
    }

    // ---- Gauss-Legendre nodes in working precision ----

    template <class T>
    struct GaussT {
        std::vector<T> nodes, weights;
    };

    template <class T>
    GaussT<T> build_gauss_t(int n)
    {
        using namespace detail;
        const GaussRule& seed = gauss_legendre(n);
        GaussT<T> r;
        r.nodes.resize(n);
        r.weights.resize(n);
        for (int i = 0; i < n; ++i) {
            T x = T(seed.nodes[i]);
            T dp = 1;
            for (int it = 0; it < 4; ++it) {
                T p0 = 1, p1 = x;
                for (int k = 2; k <= n; ++k) {
                    T p2 = (T(2 * k - 1) * x * p1 - T(k - 1) * p0) / T(k);
                    p0 = p1;
                    p1 = p2;
                }
                dp = T(n) * (x * p1 - p0) / (x * x - T(1));
                x -= p1 / dp;
            }
            r.nodes[i] = x;
            r.weights[i] = T(2) / ((T(1) - x * x) * dp * dp);
        }
        return r;
    }

    template <class T>
    const GaussT<T>& gauss_t(int n)
    {
        static std::mutex mtx;
        static std::map<int, GaussT<T>> cache;
        std::lock_guard<std::mutex> lock(mtx);
        auto it = cache.find(n);
        if (it == cache.end()) it = cache.emplace(n, build_gauss_t<T>(n)).first;
        return it->second;
    }

    // ---- entire function with zeros at i kappa^2 j_k^2 ----

    // 0F1(; nu+1; -w^2/4) = Gamma(nu+1) (2/w)^nu J_nu(w)
    template <class T>
    cx<T> hyp_series(T nu, cx<T> w)
    {
        const T eps = real_traits<T>::eps();
        cx<T> zeta = -(w * w) / T(4);
        cx<T> term(1), sum(1);
        T aw = abs(w);
        for (int m = 1; m < 40000; ++m) {
            term = term * zeta / (T(m) * (nu + T(m)));
            sum += term;
            if (abs(term) <= eps / T(8) * abs(sum) && T(m) > aw) break;
        }
        return sum;
    }

    // J_nu(w) by backward recurrence, normalised with
    // (w/2)^v0 = sum_k (v0+2k) Gamma(v0+k)/k! J_{v0+2k}(w).
    template <class T>
    cx<T> j_miller_complex(T nu, cx<T> w)
    {
        using namespace detail;
        int n = static_cast<int>(r_floor(nu));
        T nu0 = nu - T(n);
        double scale = std::max(double(abs(w)), double(nu));
        int top = static_cast<int>(scale + 80.0 + 12.0 * std::sqrt(scale));
        top = std::max(top, n + 30);
        if (top & 1) ++top;
        const T big = T(1e300), tiny = T(1e-300);
        cx<T> jp1(0), j(T(1e-30)), sum(0), res(0);
        for (int m = top; m >= 1; --m) {
            if ((m & 1) == 0) {
                int k = m / 2;
                T coef = (nu0 + T(2 * k)) * r_exp(r_lgamma(nu0 + T(k)) - r_lgamma(T(k + 1)));
                sum += j * coef;
            }
            if (m == n) res = j;
            cx<T> jm1 = j * (T(2) * (nu0 + T(m))) / w - jp1;
            jp1 = j;
            j = jm1;
            if (abs(j) > big) {
                j = j * tiny; jp1 = jp1 * tiny; sum = sum * tiny; res = res * tiny;
            }
        }
        sum += j * r_exp(r_lgamma(nu0 + T(1)));
        if (n == 0) res = j;
        cx<T> norm = nu0 == T(0) ? cx<T>(1) : exp(log(w / T(2)) * nu0);
        return res * norm / sum;
    }

    // Large-|w| expansion of Gamma(nu+1) 2^nu w^-nu J_nu(w) in scaled form.
    template <class T>
    bool hankel_scaled(T nu, cx<T> w, ScaledT<T>& out)
    {
        using namespace detail;
        const T eps = real_traits<T>::eps();
        const T pi = real_traits<T>::pi();
        const T mu = T(4) * nu * nu;
        cx<T> term(1), P(1), Q(0);
        T prev = 1, biggest = 1;
        bool decreasing = false, done = false;
        for (int k = 1; k < 600; ++k) {
            T odd = T(2 * k - 1);
            term = term * (mu - odd * odd) / (cx<T>(T(8 * k)) * w);
            T mag = abs(term);
            if (mag == T(0)) { done = true; break; }
            switch (k % 4) {
                case 1: Q += term; break;
                case 2: P -= term; break;
                case 3: Q -= term; break;
                default: P += term; break;
            }
            biggest = std::max(biggest, mag);
            if (mag < prev) decreasing = true;
            else if (decreasing) return false;
            if (mag < eps / T(4)) { done = true; break; }
            prev = mag;
        }
        if (!done || biggest > T(10)) return false;
        cx<T> chi = w - cx<T>((nu / T(2) + T(0.25)) * pi);
        T s = r_abs(chi.im);
        cx<T> iu(0, 1);
        cx<T> ep = exp(iu * chi - cx<T>(s));
        cx<T> em = exp(-(iu * chi) - cx<T>(s));
        cx<T> cs = (ep + em) / T(2);
        cx<T> sn = (ep - em) / cx<T>(0, 2);
        cx<T> core = sqrt(cx<T>(T(2)) / (w * pi)) * (P * cs - Q * sn);
        out.mant = core * polar(T(1), -nu * arg(w));
        out.log_scale = s + r_lgamma(nu + T(1)) + nu * r_log(T(2)) - nu * r_log(abs(w));
        return true;
    }

    template <class T>
    ScaledT<T> lambda_kernel(T nu, T kappa, cx<T> z)
    {
        using namespace detail;
        cx<T> w = sqrt(cx<T>(0, -1) * z) / kappa;
        T aw = abs(w);
        ScaledT<T> out;
        if (aw == T(0)) {
            out.mant = cx<T>(1);
            return out;
        }
        if (aw > T(12) && hankel_scaled(nu, w, out)) return out;
        T im = r_abs(w.im);
        cx<T> val;
        if (aw <= T(4) || aw - im <= im) {
            val = hyp_series(nu, w);
        } else {
            cx<T> jv = j_miller_complex(nu, w);
            val = jv * exp(cx<T>(r_lgamma(nu + T(1)) + nu * r_log(T(2))) - log(w) * nu);
        }
        T mag = abs(val);
        if (mag == T(0)) return out;
        out.log_scale = r_log(mag);
        out.mant = val / mag;
        return out;
    }

    // ---- multiplier: C * int_{-1}^{1} exp(-theta/(1-t^2)) exp(-i a t z) dt ----

    template <class T>
    struct MultParams {
        T a, theta, log_norm;
    };

    template <class T> int panel_order();
    template <> inline int panel_order<double>() { return 32; }
    template <> inline int panel_order<long double>() { return 32; }
    template <> inline int panel_order<detail::quad>() { return 64; }

    // log of int exp(-theta/(1-t^2)) dt
    template <class T>
    T log_bump_mass(T theta)
    {
        using namespace detail;
        const int order = panel_order<T>();
        const GaussT<T>& g = gauss_t<T>(order);
        int panels = std::max(64, static_cast<int>(std::ceil(4.0 * std::sqrt(double(theta)))));
        T h = T(1) / T(panels), s = 0;
        for (int p = 0; p < panels; ++p) {
            T mid = (T(p) + T(0.5)) * h;
            for (int i = 0; i < order; ++i) {
                T t = mid + h / T(2) * g.nodes[i];
                T u = T(1) - t * t;
                if (u > T(0)) s += r_exp(-theta * t * t / u) * g.weights[i] * h / T(2);
            }
        }
        return -theta + r_log(T(2) * s);
    }

    template <class T>
    ScaledT<T> multiplier_direct_k(const MultParams<T>& m, cx<T> z, int nodes)
    {
        using namespace detail;
        const int order = panel_order<T>();
        double a = double(m.a), theta = double(m.theta), az = double(abs(z));
        if (nodes <= 0) nodes = std::max(64, static_cast<int>(std::ceil(4.0 * a * az)));
        int panels = (nodes + order - 1) / order;
        panels = std::max(panels, 4 + static_cast<int>(std::ceil(2.0 * std::sqrt(theta))));
        double y = std::fabs(double(z.im));
        if (a * y > 1.0) {
            double u = std::min(1.0, std::sqrt(theta / (2.0 * a * y)));
            double width = std::sqrt(u * u * u / theta);
            panels = std::max(panels, static_cast<int>(std::ceil(2.0 / width)));
        }
        if (order > 32) panels *= 2;
        panels = std::min(panels, 40000);
        const GaussT<T>& g = gauss_t<T>(order);
        T h = T(2) / T(panels);
        std::vector<T> expo;
        std::vector<T> tt;
        expo.reserve(panels * order);
        tt.reserve(panels * order);
        T top = T(-1e300);
        for (int p = 0; p < panels; ++p) {
            T mid = T(-1) + (T(p) + T(0.5)) * h;
            for (int i = 0; i < order; ++i) {
                T t = mid + h / T(2) * g.nodes[i];
                T e = -m.theta / (T(1) - t * t) + m.a * t * z.im + r_log(h / T(2) * g.weights[i]);
                expo.push_back(e);
                tt.push_back(t);
                top = std::max(top, e);
            }
        }
        cx<T> sum(0);
        for (std::size_t i = 0; i < expo.size(); ++i)
            sum += polar(r_exp(expo[i] - top), -m.a * tt[i] * z.re);
        ScaledT<T> out;
        out.mant = sum;
        out.log_scale = top + m.log_norm;
        return out;
    }

    // exp(phase) is the integrand of one half of the multiplier, A = a z
    template <class T>
    cx<T> phase_fn(T theta, cx<T> A, cx<T> t)
    {
        return cx<T>(-theta) / (cx<T>(1) - t * t) - cx<T>(0, 1) * A * t;
    }

    template <class T>
    cx<T> phase_d1(T theta, cx<T> A, cx<T> t)
    {
        cx<T> u = cx<T>(1) - t * t;
        return cx<T>(-T(2) * theta) * t / (u * u) - cx<T>(0, 1) * A;
    }

    template <class T>
    cx<T> phase_d2(T theta, cx<T> t)
    {
        cx<T> u = cx<T>(1) - t * t;
        return cx<T>(-T(2) * theta) * (cx<T>(1) + T(3) * t * t) / (u * u * u);
    }

    // Saddle in the lower right quadrant from the roots of
    // t^4 - 2t^2 - i(2 theta/A) t + 1, polished by Newton in working precision.
    template <class T>
    bool find_saddle(T theta, cx<T> A, cx<T>& saddle)
    {
        using C = std::complex<double>;
        const C Ad = A.to_std();
        const double th = double(theta);
        const std::array<C, 5> c{1.0, 0.0, -2.0, C(0.0, -2.0 * th) / Ad, 1.0};
        auto poly = [&](C t) {
            C v = c[0];
            for (int i = 1; i < 5; ++i) v = v * t + c[i];
            return v;
        };
        std::array<C, 4> r;
        C seed(0.4, 0.9);
        r[0] = 1.0;
        for (int i = 1; i < 4; ++i) r[i] = r[i - 1] * seed;
        for (int it = 0; it < 1000; ++it) {
            double moved = 0.0;
            for (int i = 0; i < 4; ++i) {
                C den = 1.0;
                for (int j = 0; j < 4; ++j)
                    if (j != i) den *= r[i] - r[j];
                C step = poly(r[i]) / den;
                r[i] -= step;
                moved = std::max(moved, std::abs(step));
            }
            if (moved < 1e-15) break;
        }
        C guess = 1.0 - std::sqrt(th / (2.0 * Ad)) * std::exp(C(0.0, M_PI / 4.0));
        bool found = false;
        double best = 0.0;
        C pick;
        for (C t : r) {
            if (!(t.imag() < 0.0 && t.real() >= 0.0 && t.real() < 1.0)) continue;
            double d = std::abs(t - guess);
            if (!found || d < best) { found = true; best = d; pick = t; }
        }
        if (!found) return false;
        saddle = cx<T>(T(pick.real()), T(pick.imag()));
        const T eps = real_traits<T>::eps();
        for (int it = 0; it < 60; ++it) {
            cx<T> step = phase_d1(theta, A, saddle) / phase_d2(theta, saddle);
            saddle -= step;
            if (abs(step) <= T(4) * eps * abs(saddle)) break;
        }
        return saddle.im < T(0) && saddle.re >= T(0) && saddle.re < T(1)
               && abs(phase_d1(theta, A, saddle)) < T(1e-8) * abs(A);
    }

    template <class T, class Path>
    cx<T> march(T theta, cx<T> A, cx<T> ref, Path path, cx<T> dpath, T h0, T s_max, T cutoff)
    {
        const int order = panel_order<T>();
        const GaussT<T>& g = gauss_t<T>(order);
        cx<T> sum(0);
        T lo = 0, h = h0;
        for (int panel = 0; panel < 400 && lo < s_max; ++panel) {
            T hi = std::min(s_max, lo + h);
            for (int i = 0; i < order; ++i) {
                T s = (lo + hi) / T(2) + (hi - lo) / T(2) * g.nodes[i];
                sum += exp(phase_fn(theta, A, path(s)) - ref) * ((hi - lo) / T(2) * g.weights[i]);
            }
            lo = hi;
            h *= T(2);
            if (lo < s_max && (phase_fn(theta, A, path(lo)) - ref).re < cutoff) break;
        }
        return sum * dpath;
    }

    template <class T> T contour_cutoff();
    template <> inline double contour_cutoff<double>() { return -50.0; }
    template <> inline long double contour_cutoff<long double>() { return -55.0L; }
    template <> inline detail::quad contour_cutoff<detail::quad>() { return detail::quad(-90); }

    // int_0^1 exp(phase) dt deformed onto a vertical ray from -i infinity up
    // to the saddle and a straight segment on to t = 1.  The leg down the
    // imaginary axis is omitted: it cancels against the mirrored half.
    template <class T>
    bool half_contour(T theta, cx<T> A, ScaledT<T>& out)
    {
        cx<T> ts;
        if (!find_saddle(theta, A, ts)) return false;
        cx<T> ref = phase_fn(theta, A, ts);
        T shrink = panel_order<T>() > 32 ? T(0.25) : T(0.5);
        T width = T(1) / r_sqrt(abs(phase_d2(theta, ts)));
        cx<T> iu(0, 1);
        cx<T> ray = march<T>(theta, A, ref, [ts, iu](T y) { return ts - iu * y; }, iu, shrink * width,
                             T(1e300), contour_cutoff<T>());
        cx<T> span = cx<T>(1) - ts;
        T h0 = std::min(T(0.25), shrink * width / abs(span));
        cx<T> seg = march<T>(theta, A, ref, [ts, span](T s) { return ts + span * s; }, span, h0, T(1),
                             contour_cutoff<T>());
        out.mant = polar(T(1), ref.im) * (ray + seg);
        out.log_scale = ref.re;
        return true;
    }

    // Deformed-path evaluation for Re z > 0:
    // H(z) = C (S(a z) + conj S(a conj z)) with S the half integral above.
    template <class T>
    bool multiplier_contour_k(const MultParams<T>& m, cx<T> z, ScaledT<T>& out)
    {
        ScaledT<T> s1, s2;
        if (!half_contour(m.theta, z * m.a, s1)) return false;
        bool real_axis = z.im == T(0);
        if (real_axis) s2 = s1;
        else if (!half_contour(m.theta, conj(z) * m.a, s2)) return false;
        T top = std::max(s1.log_scale, s2.log_scale);
        // the direct rule has absolute error ~ eps H(i|Im z|) <= eps e^{a |Im z|}
        if (top + m.log_norm - m.a * r_abs(z.im) > T(-10)) return false;
        out.mant = s1.mant * r_exp(s1.log_scale - top) + conj(s2.mant) * r_exp(s2.log_scale - top);
        if (real_axis) out.mant = cx<T>(out.mant.re);
        out.log_scale = top + m.log_norm;
        return true;
    }

    template <class T>
    ScaledT<T> multiplier_k(const MultParams<T>& m, cx<T> z)
    {
        // H(-conj z) = conj H(z)
        if (z.re < T(0)) {
            ScaledT<T> r = multiplier_k(m, cx<T>(-z.re, z.im));
            r.mant = conj(r.mant);
            return r;
        }
        if (m.a * z.re >= T(4)) {
            ScaledT<T> out;
            if (multiplier_contour_k(m, z, out)) return out;
        }
        return multiplier_direct_k(m, z, 0);
    }

    // In-place transform out[i] = sum_r in[r] exp(+2 pi i ir/n); radix 2
    // when n is a power of two, plain summation otherwise.
    template <class T>
    void inverse_dft(std::vector<cx<T>>& v)
    {
        const std::size_t n = v.size();
        const T two_pi = T(2) * real_traits<T>::pi();
        if (n == 0 || (n & (n - 1)) != 0) {
            std::vector<cx<T>> out(n);
            for (std::size_t i = 0; i < n; ++i) {
                cx<T> acc(0);
                for (std::size_t r = 0; r < n; ++r)
                    acc += v[r] * polar(T(1), two_pi * T((i * r) % n) / T(n));
                out[i] = acc;
            }
            v.swap(out);
            return;
        }
        for (std::size_t i = 1, j = 0; i < n; ++i) {
            std::size_t bit = n >> 1;
            for (; j & bit; bit >>= 1) j ^= bit;
            j ^= bit;
            if (i < j) std::swap(v[i], v[j]);
        }
        std::vector<cx<T>> roots(n / 2);
        for (std::size_t r = 0; r < n / 2; ++r) roots[r] = polar(T(1), two_pi * T(r) / T(n));
        for (std::size_t len = 2; len <= n; len <<= 1) {
            std::size_t stride = n / len;
            for (std::size_t start = 0; start < n; start += len) {
                for (std::size_t q = 0; q < len / 2; ++q) {
                    cx<T> u = v[start + q];
                    cx<T> t = v[start + q + len / 2] * roots[q * stride];
                    v[start + q] = u + t;
                    v[start + q + len / 2] = u - t;
                }
            }
        }
    }

}
}
