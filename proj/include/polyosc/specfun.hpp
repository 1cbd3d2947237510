#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace polyosc {

using complexd = std::complex<double>;

namespace detail {

// Lanczos coefficients, g = 7, n = 9 (Godfrey). Relative accuracy ~1e-14
// on the right half-plane.
inline constexpr double lanczos_g = 7.0;
inline constexpr double lanczos_c[9] = {
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
};

} // namespace detail

/// log Gamma(x) for Re x > 0, principal branch.
inline complexd log_gamma(complexd x) {
    if (x.real() <= 0.0)
        throw std::domain_error("log_gamma: requires Re x > 0");
    const complexd z = x - 1.0;
    complexd s = detail::lanczos_c[0];
    for (int i = 1; i < 9; ++i)
        s += detail::lanczos_c[i] / (z + static_cast<double>(i));
    const complexd t = z + detail::lanczos_g + 0.5;
    constexpr double half_log_2pi = 0.91893853320467274178;
    return half_log_2pi + (z + 0.5) * std::log(t) - t + std::log(s);
}

inline double log_gamma(double x) { return log_gamma(complexd(x)).real(); }

/// Gamma(x), x > 0.
inline double gamma_fn(double x) { return std::exp(log_gamma(x)); }

/// Euler beta function B(x, y) = Gamma(x)Gamma(y)/Gamma(x+y).
inline double beta(double x, double y) {
    if (x <= 0.0 || y <= 0.0)
        throw std::domain_error("beta: requires positive arguments");
    return std::exp(log_gamma(x) + log_gamma(y) - log_gamma(x + y));
}

/// Generalized binomial coefficient x(x-1)...(x-k+1)/k!.
inline double gen_binomial(double x, int k) {
    if (k < 0)
        throw std::domain_error("gen_binomial: k must be nonnegative");
    double r = 1.0;
    for (int i = 0; i < k; ++i)
        r *= (x - static_cast<double>(i)) / static_cast<double>(i + 1);
    return r;
}

/// Sum of reciprocals of the first k-1 odd numbers, 1 + 1/3 + ... + 1/(2k-3).
/// Empty (zero) for k = 1.
inline double odd_harmonic(int k) {
    if (k < 1)
        throw std::domain_error("odd_harmonic: k must be positive");
    double s = 0.0;
    for (int i = 1; i < k; ++i)
        s += 1.0 / static_cast<double>(2 * i - 1);
    return s;
}

} // namespace polyosc
