#pragma once
// Minimal complex arithmetic usable with __float128, where std::complex is
// not specified.

#include "degen_control/detail/real_math.hpp"

#include <complex>

namespace degen_control {
namespace detail {

    template <class T>
    struct cx {
        T re{}, im{};

        cx() = default;
        cx(T r) : re(r), im(0) {}
        cx(T r, T i) : re(r), im(i) {}
        template <class U>
        explicit cx(const std::complex<U>& z) : re(T(z.real())), im(T(z.imag())) {}

        std::complex<double> to_std() const { return {double(re), double(im)}; }

        cx& operator+=(const cx& o) { re += o.re; im += o.im; return *this; }
        cx& operator-=(const cx& o) { re -= o.re; im -= o.im; return *this; }
        cx& operator*=(const cx& o) { *this = *this * o; return *this; }
        cx& operator/=(const cx& o) { *this = *this / o; return *this; }

        friend cx operator+(cx a, const cx& b) { return a += b; }
        friend cx operator-(cx a, const cx& b) { return a -= b; }
        friend cx operator-(const cx& a) { return {-a.re, -a.im}; }
        friend cx operator*(const cx& a, const cx& b)
        {
            return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
        }
        friend cx operator*(const cx& a, T s) { return {a.re * s, a.im * s}; }
        friend cx operator*(T s, const cx& a) { return {a.re * s, a.im * s}; }
        friend cx operator/(const cx& a, T s) { return {a.re / s, a.im / s}; }
        friend cx operator/(const cx& a, const cx& b)
        {
            // Smith's algorithm
            if (r_abs(b.re) >= r_abs(b.im)) {
                T r = b.im / b.re, d = b.re + r * b.im;
                return {(a.re + a.im * r) / d, (a.im - a.re * r) / d};
            }
            T r = b.re / b.im, d = b.im + r * b.re;
            return {(a.re * r + a.im) / d, (a.im * r - a.re) / d};
        }
        friend bool operator==(const cx& a, const cx& b) { return a.re == b.re && a.im == b.im; }
    };

    template <class T> T abs(const cx<T>& z) { return r_hypot(z.re, z.im); }
    template <class T> T arg(const cx<T>& z) { return r_atan2(z.im, z.re); }
    template <class T> cx<T> conj(const cx<T>& z) { return {z.re, -z.im}; }

    template <class T> cx<T> exp(const cx<T>& z)
    {
        T m = r_exp(z.re);
        return {m * r_cos(z.im), m * r_sin(z.im)};
    }

    template <class T> cx<T> log(const cx<T>& z) { return {r_log(abs(z)), arg(z)}; }

    // principal branch
    template <class T> cx<T> sqrt(const cx<T>& z)
    {
        if (z.re == T(0) && z.im == T(0)) return {};
        T m = abs(z);
        T r = r_sqrt((m + r_abs(z.re)) / T(2));
        if (z.re >= T(0)) return {r, z.im / (T(2) * r)};
        T i = z.im < T(0) ? -r : r;
        return {r_abs(z.im) / (T(2) * r), i};
    }

    template <class T> cx<T> polar(T mag, T ang) { return {mag * r_cos(ang), mag * r_sin(ang)}; }

}
}
