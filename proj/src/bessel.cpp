#include "degen_control/bessel.hpp"
#include "degen_control/detail/real_math.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <tuple>

namespace degen_control {

    namespace {

        using detail::quad;
        using detail::real_traits;

        template <class T> T series_limit();
        template <> double series_limit<double>() { return 8.0; }
        template <> long double series_limit<long double>() { return 6.0L; }
        template <> quad series_limit<quad>() { return quad(2); }

        // Power series with the leading factor assembled in log space.
        template <class T>
        T j_series(T nu, T x)
        {
            using namespace detail;
            T lead = r_exp(nu * r_log(x / T(2)) - r_lgamma(nu + T(1)));
            if (lead == T(0)) return T(0);
            T z = -x * x / T(4);
            T term = T(1), sum = T(1);
            for (int m = 1; m < 500; ++m) {
                term *= z / (T(m) * (nu + T(m)));
                sum += term;
                if (r_abs(term) <= real_traits<T>::eps() * T(0.25) * r_abs(sum)) break;
            }
            return lead * sum;
        }

        // Large-argument expansion.  Returns false when the asymptotic series
        // does not reach working precision before it starts to diverge.
        template <class T>
        bool j_hankel(T nu, T x, T& out)
        {
            using namespace detail;
            const T eps = real_traits<T>::eps();
            const T mu = T(4) * nu * nu;
            T term = T(1), P = T(1), Q = T(0);
            T prev = T(1), biggest = T(1);
            bool decreasing = false;
            auto finish = [&] {
                T chi = x - (nu / T(2) + T(0.25)) * real_traits<T>::pi();
                out = r_sqrt(T(2) / (real_traits<T>::pi() * x)) * (P * r_cos(chi) - Q * r_sin(chi));
                return true;
            };
            for (int k = 1; k < 400; ++k) {
                T odd = T(2 * k - 1);
                term *= (mu - odd * odd) / (T(8 * k) * x);
                T mag = r_abs(term);
                // half-integer orders: the series terminates
                if (mag == T(0)) return finish();
                switch (k % 4) {
                    case 1: Q += term; break;
                    case 2: P -= term; break;
                    case 3: Q -= term; break;
                    default: P += term; break;
                }
                biggest = std::max(biggest, mag);
                if (mag < prev) decreasing = true;
                else if (decreasing) return false;
                if (mag < eps * T(0.1)) {
                    if (biggest > T(10)) return false;
                    return finish();
                }
                prev = mag;
            }
            return false;
        }

        // Backward recurrence normalised with
        // (x/2)^v0 = sum_k (v0+2k) Gamma(v0+k)/k! J_{v0+2k}(x).
        template <class T>
        T j_miller(T nu, T x)
        {
            using namespace detail;
            const T big = real_traits<T>::huge();
            int n = static_cast<int>(r_floor(nu));
            T nu0 = nu - T(n);
            double scale = std::max(static_cast<double>(x), static_cast<double>(nu));
            int top = static_cast<int>(scale + 60.0 + 10.0 * std::sqrt(scale));
            top = std::max(top, n + 20);
            if ((top & 1) == 1) ++top;

            T jp1 = T(0), j = T(1e-30), sum = T(0), res = T(0);
            for (int m = top; m >= 1; --m) {
                if ((m & 1) == 0) {
                    int k = m / 2;
                    T coef = (nu0 + T(2 * k)) * r_exp(r_lgamma(nu0 + T(k)) - r_lgamma(T(k + 1)));
                    sum += coef * j;
                }
                if (m == n) res = j;
                T jm1 = T(2) * (nu0 + T(m)) / x * j - jp1;
                jp1 = j;
                j = jm1;
                if (r_abs(j) > big) {
                    j /= big; jp1 /= big; sum /= big; res /= big;
                }
            }
            sum += r_exp(r_lgamma(nu0 + T(1))) * j;
            if (n == 0) res = j;
            T norm = nu0 == T(0) ? T(1) : r_exp(nu0 * r_log(x / T(2)));
            return res * norm / sum;
        }

        // Safeguarded Newton on a sign-change bracket.
        template <class T>
        T newton_in_bracket(T nu, T lo, T hi, T seed, T tol, int index)
        {
            using namespace detail;
            T flo = bessel_j<T>(nu, lo);
            T x = (seed > lo && seed < hi) ? seed : (lo + hi) / T(2);
            for (int it = 0; it < 200; ++it) {
                T f = bessel_j<T>(nu, x);
                if (f == T(0)) return x;
                if ((f > T(0)) == (flo > T(0))) { lo = x; flo = f; }
                else hi = x;
                T d = nu / x * f - bessel_j<T>(nu + T(1), x);
                T next = x - f / d;
                if (!(next > lo && next < hi)) next = (lo + hi) / T(2);
                T step = r_abs(next - x);
                x = next;
                if (step <= tol || hi - lo <= tol) return x;
            }
            throw BesselError("zero refinement did not converge", index);
        }

    }

    template <class T>
    T bessel_j(T nu, T x)
    {
        if (nu < T(0) || x < T(0)) throw BesselError("bessel_j: negative order or argument");
        if (x == T(0)) return nu == T(0) ? T(1) : T(0);
        if (x <= series_limit<T>() || x * x <= T(4) * (nu + T(1))) return j_series(nu, x);
        T out;
        if (j_hankel(nu, x, out)) return out;
        return j_miller(nu, x);
    }

    template double bessel_j<double>(double, double);
    template long double bessel_j<long double>(long double, long double);
    template quad bessel_j<quad>(quad, quad);

    double eval_J(double nu, double x) { return bessel_j<double>(nu, x); }

    double eval_J_prime(double nu, double x)
    {
        if (!(x > 0.0)) throw BesselError("eval_J_prime: argument must be positive");
        return nu / x * eval_J(nu, x) - eval_J(nu + 1.0, x);
    }

    double zero_seed(double nu, int k)
    {
        double b = (k + nu / 2.0 - 0.25) * M_PI;
        return b - (4.0 * nu * nu - 1.0) / (8.0 * b);
    }

    namespace {

        ZeroTable build_table(double nu, int K, double tol)
        {
            if (nu < 0.0) throw BesselError("zeros: negative order");
            if (K < 1 || !(tol > 0.0)) throw BesselError("zeros: need K >= 1 and tol > 0");
            ZeroTable t;
            t.order_nu = nu;
            t.refinement_tol = tol;
            t.zeros.reserve(K);
            // Consecutive zeros are more than 3 apart, so a half-unit march from
            // just past the previous zero brackets exactly the next one.
            double x = std::max(nu, 0.5);
            for (int k = 1; k <= K; ++k) {
                if (k > 1) x = t.zeros.back() + 1.0;
                double fx = eval_J(nu, x);
                int steps = 0;
                while (true) {
                    double nx = x + 0.5;
                    double fn = eval_J(nu, nx);
                    if (fn == 0.0) { x = nx; break; }
                    if ((fn > 0.0) != (fx > 0.0)) {
                        double tol_eff = std::max(tol, 4.0 * DBL_EPSILON * nx);
                        x = newton_in_bracket<double>(nu, x, nx, zero_seed(nu, k), tol_eff, k);
                        break;
                    }
                    x = nx;
                    fx = fn;
                    if (++steps > 100000) throw BesselError("zeros: no sign change found", k);
                }
                t.zeros.push_back(x);
            }
            return t;
        }

        std::mutex cache_mutex;
        std::map<std::tuple<double, int, double>, ZeroTable> cache;

    }

    const ZeroTable& zeros(double nu, int K, double tol)
    {
        auto key = std::make_tuple(nu, K, tol);
        {
            std::lock_guard<std::mutex> lock(cache_mutex);
            auto it = cache.find(key);
            if (it != cache.end()) return it->second;
        }
        ZeroTable built = build_table(nu, K, tol);
        std::lock_guard<std::mutex> lock(cache_mutex);
        return cache.emplace(key, std::move(built)).first->second;
    }

    namespace extended {

        quad eval_J(quad nu, quad x) { return bessel_j<quad>(nu, x); }

        quad eval_J_prime(quad nu, quad x)
        {
            return nu / x * eval_J(nu, x) - eval_J(nu + 1, x);
        }

        std::vector<quad> refine_zeros(const ZeroTable& table)
        {
            std::vector<quad> out;
            out.reserve(table.zeros.size());
            quad nu = table.order_nu;
            int index = 0;
            for (double z : table.zeros) {
                ++index;
                quad half = quad(1e-6) * quad(z);
                quad tol = quad(8) * real_traits<quad>::eps() * quad(z);
                out.push_back(newton_in_bracket<quad>(nu, quad(z) - half, quad(z) + half, quad(z), tol, index));
            }
            return out;
        }

    }

}
