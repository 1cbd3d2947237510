#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "polyosc/multiindex.hpp"
#include "polyosc/problem.hpp"
#include "polyosc/quadrature.hpp"
#include "polyosc/specfun.hpp"

namespace polyosc {

/// b_{j,k}(a) = C(1/2, k) sum_{|alpha|=k, alpha.beta=j} (k!/alpha!) a^alpha.
inline std::complex<double> b_jk(const ProblemSpec& spec, int j, int k) {
    if (k < 1 || k > j)
        throw std::invalid_argument("b_jk: need 1 <= k <= j");
    std::complex<double> s = 0.0;
    for (const auto& mi : multi_indices(spec.m - 1, j, k))
        s += multinomial(mi) * monomial(spec.a, mi);
    return gen_binomial(0.5, k) * s;
}

/// b_j(a) = sum_{k=1}^j b_{j,k}(a), the z^{-j} coefficient of the
/// square-root expansion of 1 + P(z)/z^m for j <= m-1.
inline std::complex<double> b_j(const ProblemSpec& spec, int j) {
    if (j < 1 || j > spec.m - 1)
        throw std::invalid_argument("b_j: need 1 <= j <= m-1");
    std::complex<double> s = 0.0;
    for (int k = 1; k <= j; ++k)
        s += b_jk(spec, j, k);
    return s;
}

/// nu(a) = b_{m/2+1}(a) for even m, 0 for odd m.
inline std::complex<double> nu_coeff(const ProblemSpec& spec) {
    if (spec.m % 2 != 0)
        return 0.0;
    return b_j(spec, spec.m / 2 + 1);
}

/// K_{m,0} = sqrt(pi) Gamma(1 + 1/m) / (2 cos(pi/m) Gamma(3/2 + 1/m)).
inline double K_m0(int m) {
    if (m < 3)
        throw std::invalid_argument("K_m0: m must be >= 3");
    const double im = 1.0 / m;
    return std::sqrt(std::numbers::pi) * gamma_fn(1.0 + im) /
           (2.0 * std::cos(std::numbers::pi * im) * gamma_fn(1.5 + im));
}

namespace detail {

inline bool k_index_generic(int m, int j, int k) {
    // 1 <= k <= j <= (m+1)/2 (integer arithmetic gives floor) or (0,0)
    return (j == 0 && k == 0) || (k >= 1 && k <= j && 2 * j <= m + 1);
}

inline bool k_index_log_case(int m, int j, int k) {
    return m % 2 == 0 && 2 * j == m + 2 && k >= 1 && k <= j;
}

} // namespace detail

/// Closed form of the K_{m,j,k} constants.
inline double K_closed(int m, int j, int k) {
    if (j == 1 && k == 1)
        return -2.0 / m;
    if (detail::k_index_generic(m, j, k) && j != 1 && k >= 1) {
        const double jm = static_cast<double>(j - 1) / m;
        return -static_cast<double>(2 * k - 1) / (m + 2 - 2 * j) *
               beta(k - jm, 0.5 + jm);
    }
    if (detail::k_index_log_case(m, j, k))
        return (2.0 / m) * (std::numbers::ln2 - odd_harmonic(k));
    throw std::domain_error("K_closed: (j,k) outside admissible index set");
}

/// K_{m,j,k} by adaptive quadrature of the defining improper integral,
/// absolute error <= abs_tol. Independent oracle for K_closed.
inline double K_quad(int m, int j, int k, double abs_tol = 1e-11) {
    if (detail::k_index_log_case(m, j, k)) {
        // int_0^inf [t^{mk-m/2-1}/(1+t^m)^{k-1/2} - 1/(1+t)] dt,
        // split at t = 1, with t -> 1/t on the tail.
        auto head = integrate_adaptive(
            [m, k](double t) {
                return std::pow(t, m * k - m / 2 - 1) *
                           std::pow(1.0 + std::pow(t, m), 0.5 - k) -
                       1.0 / (1.0 + t);
            },
            0.0, 1.0, abs_tol / 2);
        auto tail = integrate_adaptive(
            [m, k](double s) {
                const double x = std::pow(s, m);
                double first = 0.0;
                if (x > 0.0)
                    first = std::expm1((0.5 - k) * std::log1p(x)) / s;
                return first + 1.0 / (1.0 + s);
            },
            0.0, 1.0, abs_tol / 2);
        return head.value + tail.value;
    }
    if (!detail::k_index_generic(m, j, k))
        throw std::domain_error("K_quad: (j,k) outside admissible index set");
    // Head piece over t in [0,1], substituted t = u^2 so the integrand is
    // smooth even when m/2 - j = -1/2.
    auto head = integrate_adaptive(
        [m, j, k](double u) {
            const double t = u * u;
            const double lead =
                std::pow(u, 2 * (m * k - j) + 1) *
                std::pow(1.0 + std::pow(t, m), 0.5 - k);
            return 2.0 * (lead - std::pow(u, m - 2 * j + 1));
        },
        0.0, 1.0, abs_tol / 2);
    // Tail over t in [1,inf): with x = t^{-m} the integrand is
    // x^{(j-1)/m - 1/2} h(x), h analytic; x = u^{2m} clears the exponents.
    auto tail = integrate_adaptive(
        [m, j, k](double u) {
            const double x = std::pow(u, 2 * m);
            double h;
            if (x < 1e-200)
                h = 0.5 - k;
            else
                h = std::expm1((0.5 - k) * std::log1p(x)) / x;
            return 2.0 * std::pow(u, 2 * j + m - 3) * h;
        },
        0.0, 1.0, abs_tol / 2);
    return head.value + tail.value;
}

/// K_{m,j}(a) = sum_{k=1}^j b_{j,k}(a) K_{m,j,k}.
inline std::complex<double> K_mj(const ProblemSpec& spec, int j) {
    std::complex<double> s = 0.0;
    for (int k = 1; k <= j; ++k)
        s += b_jk(spec, j, k) * K_closed(spec.m, j, k);
    return s;
}

/// eta_{m,ell}(a), the j = (m+2)/2 quantization coefficient for even m.
inline std::complex<double> eta(const ProblemSpec& spec) {
    if (spec.m % 2 != 0 || spec.ell % 2 == 0)
        return 0.0;
    const int j = (spec.m + 2) / 2;
    std::complex<double> s = 0.0;
    for (int k = 1; k <= j; ++k)
        s += b_jk(spec, j, k);
    const double sign = ((spec.ell - 1) / 2) % 2 == 0 ? 1.0 : -1.0;
    return sign * std::complex<double>(0.0, 4.0 * std::numbers::pi / spec.m) * s;
}

/// Quantization-condition coefficient d_{ell,j}(a), 0 <= j <= floor((m+2)/2).
inline std::complex<double> d_lj(const ProblemSpec& spec, int j) {
    const int m = spec.m;
    const double pi = std::numbers::pi;
    if (j == 0) {
        const double im = 1.0 / m;
        return std::complex<double>(0.0, 2.0) * std::sqrt(pi) *
               std::sin(spec.ell * pi / m) * gamma_fn(1.0 + im) /
               gamma_fn(1.5 + im);
    }
    if (j >= 1 && 2 * j <= m + 1) {
        std::complex<double> s = 0.0;
        for (int k = 1; k <= j; ++k) {
            const double sign = ((spec.ell + 1) * k) % 2 == 0 ? 1.0 : -1.0;
            s += sign * K_closed(m, j, k) * b_jk(spec, j, k);
        }
        return std::complex<double>(0.0, -4.0) * s *
               std::sin((j - 1) * spec.ell * pi / m) *
               std::cos((j - 1) * pi / m);
    }
    if (m % 2 == 0 && 2 * j == m + 2)
        return eta(spec);
    throw std::out_of_range("d_lj: j outside 0..floor((m+2)/2)");
}

/// All d_{ell,j}(a) for j = 0..floor((m+2)/2).
inline std::vector<std::complex<double>> d_vector(const ProblemSpec& spec) {
    std::vector<std::complex<double>> d(spec.j_max() + 1);
    for (int j = 0; j <= spec.j_max(); ++j)
        d[j] = d_lj(spec, j);
    return d;
}

} // namespace polyosc
