#pragma once
// Thin overload set so the Bessel kernels can be written once for double,
// long double and __float128.

#include <cfloat>
#include <cmath>
#include <quadmath.h>

namespace degen_control {
namespace detail {

    using quad = __float128;

    template <class T> struct real_traits;

    template <> struct real_traits<double> {
        static double eps() { return DBL_EPSILON; }
        static double pi() { return M_PI; }
        static double huge() { return 1e280; }
    };

    template <> struct real_traits<long double> {
        static long double eps() { return LDBL_EPSILON; }
        static long double pi() { return 3.141592653589793238462643383279502884L; }
        static long double huge() { return 1e4000L; }
    };

    template <> struct real_traits<quad> {
        static quad eps() { return ldexpq(quad(1), -112); }
        static quad pi() { return acosq(quad(-1)); }
        static quad huge() { return ldexpq(quad(1), 16000); }
    };

    inline double r_sqrt(double x) { return std::sqrt(x); }
    inline double r_exp(double x) { return std::exp(x); }
    inline double r_log(double x) { return std::log(x); }
    inline double r_lgamma(double x) { return std::lgamma(x); }
    inline double r_sin(double x) { return std::sin(x); }
    inline double r_cos(double x) { return std::cos(x); }
    inline double r_abs(double x) { return std::fabs(x); }
    inline double r_floor(double x) { return std::floor(x); }
    inline double r_atan2(double y, double x) { return std::atan2(y, x); }
    inline double r_hypot(double x, double y) { return std::hypot(x, y); }

    inline long double r_sqrt(long double x) { return std::sqrt(x); }
    inline long double r_exp(long double x) { return std::exp(x); }
    inline long double r_log(long double x) { return std::log(x); }
    inline long double r_lgamma(long double x) { return std::lgamma(x); }
    inline long double r_sin(long double x) { return std::sin(x); }
    inline long double r_cos(long double x) { return std::cos(x); }
    inline long double r_abs(long double x) { return std::fabs(x); }
    inline long double r_floor(long double x) { return std::floor(x); }
    inline long double r_atan2(long double y, long double x) { return std::atan2(y, x); }
    inline long double r_hypot(long double x, long double y) { return std::hypot(x, y); }

    inline quad r_sqrt(quad x) { return sqrtq(x); }
    inline quad r_exp(quad x) { return expq(x); }
    inline quad r_log(quad x) { return logq(x); }
    inline quad r_lgamma(quad x) { return lgammaq(x); }
    inline quad r_sin(quad x) { return sinq(x); }
    inline quad r_cos(quad x) { return cosq(x); }
    inline quad r_abs(quad x) { return fabsq(x); }
    inline quad r_floor(quad x) { return floorq(x); }
    inline quad r_atan2(quad y, quad x) { return atan2q(y, x); }
    inline quad r_hypot(quad x, quad y) { return hypotq(x, y); }

}
}
