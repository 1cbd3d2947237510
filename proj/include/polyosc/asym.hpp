#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "polyosc/coeffs.hpp"
#include "polyosc/problem.hpp"

namespace polyosc {

/// Leading-order eigenvalue
///   lambda_{n,0} = (sqrt(pi) Gamma(3/2+1/m) (n+1/2) /
///                   (sin(ell pi/m) Gamma(1+1/m)))^{2m/(m+2)}.
inline double lambda_n0(int m, int ell, int n) {
    if (n < 0)
        throw std::invalid_argument("lambda_n0: n must be nonnegative");
    const double im = 1.0 / m;
    const double base = std::sqrt(std::numbers::pi) * gamma_fn(1.5 + im) /
                        (std::sin(ell * std::numbers::pi / m) * gamma_fn(1.0 + im)) *
                        (n + 0.5);
    return std::pow(base, 2.0 * m / (m + 2));
}

inline double lambda_n0(const ProblemSpec& spec, int n) {
    return lambda_n0(spec.m, spec.ell, n);
}

/// lambda^s on the principal branch (cut along the negative real axis).
inline std::complex<double> principal_pow(std::complex<double> lambda, double s) {
    if (lambda.imag() == 0.0 && lambda.real() <= 0.0)
        throw std::domain_error("principal_pow: lambda on the branch cut");
    return std::exp(s * std::log(lambda));
}

/// Precomputed coefficient tables for one problem: the quantization
/// coefficients d_j, their ratios c_j = d_j/d_0, and the expansion
/// coefficients e_j obtained by inverting the quantization condition.
struct AsymptoticModel {
    ProblemSpec spec;
    std::vector<std::complex<double>> d; // j = 0..j_max
    std::vector<std::complex<double>> c; // c[j] = d[j]/d[0]
    std::vector<std::complex<double>> e; // e[1] = 0, filled for 2..j_max

    int j_max() const { return spec.j_max(); }
};

namespace detail {

/// View of e as the 1-based vector (e_1, e_2, ...) expected by monomial().
inline std::vector<std::complex<double>>
e_tail(const std::vector<std::complex<double>>& e) {
    return {e.begin() + 1, e.end()};
}

/// The inversion recurrence: with c_r = d_r/d_0 and e_1 = 0,
///   e_j = -(2m/(m+2)) [ c_j
///         + sum_{|alpha|=k>=2, alpha.beta=j} C(1/2+1/m, k) (k!/alpha!) e^alpha
///         + sum_{r=2}^{j-2} c_r sum_{|alpha|=k>=1, alpha.beta=j-r}
///               C(1/2+(1-r)/m, k) (k!/alpha!) e^alpha ].
inline std::vector<std::complex<double>>
invert_quantization(const ProblemSpec& spec,
                    const std::vector<std::complex<double>>& c) {
    const int m = spec.m;
    const int J = spec.j_max();
    std::vector<std::complex<double>> e(std::max(J + 1, m), 0.0);
    for (int j = 2; j <= J; ++j) {
        std::complex<double> s = c[j];
        for (int k = 2; k <= j; ++k) {
            const double bin = gen_binomial(0.5 + 1.0 / m, k);
            for (const auto& mi : multi_indices(m - 1, j, k))
                s += bin * multinomial(mi) * monomial(e_tail(e), mi);
        }
        for (int r = 2; r <= j - 2; ++r) {
            std::complex<double> inner = 0.0;
            for (int k = 1; k <= j - r; ++k) {
                const double bin = gen_binomial(0.5 + (1.0 - r) / m, k);
                for (const auto& mi : multi_indices(m - 1, j - r, k))
                    inner += bin * multinomial(mi) * monomial(e_tail(e), mi);
            }
            s += c[r] * inner;
        }
        e[j] = -(2.0 * m / (m + 2)) * s;
    }
    e.resize(J + 1);
    return e;
}

} // namespace detail

inline std::vector<std::complex<double>>
compute_e(const ProblemSpec& spec) {
    auto d = d_vector(spec);
    std::vector<std::complex<double>> c(d.size());
    for (std::size_t j = 0; j < d.size(); ++j)
        c[j] = d[j] / d[0];
    return detail::invert_quantization(spec, c);
}

inline AsymptoticModel make_model(const ProblemSpec& spec) {
    AsymptoticModel mdl;
    mdl.spec = spec;
    mdl.d = d_vector(spec);
    mdl.c.resize(mdl.d.size());
    for (std::size_t j = 0; j < mdl.d.size(); ++j)
        mdl.c[j] = mdl.d[j] / mdl.d[0];
    mdl.e = detail::invert_quantization(spec, mdl.c);
    return mdl;
}

/// lambda_n = lambda_{n,0} + sum_{j=2}^{j_max} e_j lambda_{n,0}^{1-j/m}.
inline std::complex<double> asym_eigenvalue(const AsymptoticModel& mdl, int n) {
    const double l0 = lambda_n0(mdl.spec, n);
    std::complex<double> lam = l0;
    for (int j = 2; j <= mdl.j_max(); ++j)
        lam += mdl.e[j] * std::pow(l0, 1.0 - static_cast<double>(j) / mdl.spec.m);
    return lam;
}

/// Residual of the truncated quantization condition,
///   sum_{j=0}^{j_max} d_j lambda^{1/2-(j-1)/m} - (2n+1) pi i.
inline std::complex<double> residual(const AsymptoticModel& mdl,
                                     std::complex<double> lambda, int n) {
    std::complex<double> s = 0.0;
    for (int j = 0; j <= mdl.j_max(); ++j)
        s += mdl.d[j] *
             principal_pow(lambda, 0.5 - static_cast<double>(j - 1) / mdl.spec.m);
    return s - std::complex<double>(0.0, (2.0 * n + 1.0) * std::numbers::pi);
}

/// Termwise derivative of the residual with respect to lambda.
inline std::complex<double> residual_deriv(const AsymptoticModel& mdl,
                                           std::complex<double> lambda) {
    std::complex<double> s = 0.0;
    for (int j = 0; j <= mdl.j_max(); ++j) {
        const double p = 0.5 - static_cast<double>(j - 1) / mdl.spec.m;
        s += mdl.d[j] * p * principal_pow(lambda, p - 1.0);
    }
    return s;
}

/// Newton iteration on the quantization residual, seeded at the explicit
/// expansion. Converged when |residual| <= tol.
inline std::complex<double> refine_eigenvalue(const AsymptoticModel& mdl, int n,
                                              double tol = 1e-10,
                                              int max_iter = 50) {
    std::complex<double> lam = asym_eigenvalue(mdl, n);
    for (int it = 0; it < max_iter; ++it) {
        const auto r = residual(mdl, lam, n);
        if (std::abs(r) <= tol)
            return lam;
        lam -= r / residual_deriv(mdl, lam);
    }
    throw std::runtime_error(
        "refine_eigenvalue: no convergence; last iterate " +
        std::to_string(lam.real()) + "+" + std::to_string(lam.imag()) + "i");
}

struct CountingResult {
    double value = 0.0;       // the real part of the formula
    double imag_part = 0.0;   // deviation of the formula from real
    double re_d_max = 0.0;    // largest |Re d_j|, j >= 1
    bool hypothesis_ok = true;
};

/// Counting-function asymptotics
///   N(t) = (1/(2 pi i)) (sum_j d_j t^{1/2-(j-1)/m} - pi i).
inline CountingResult counting(const AsymptoticModel& mdl, double t,
                               double hypothesis_tol = 1e-10) {
    if (t <= 0.0)
        throw std::domain_error("counting: t must be positive");
    std::complex<double> s = 0.0;
    for (int j = 0; j <= mdl.j_max(); ++j)
        s += mdl.d[j] *
             std::pow(t, 0.5 - static_cast<double>(j - 1) / mdl.spec.m);
    const std::complex<double> val =
        (s - std::complex<double>(0.0, std::numbers::pi)) /
        std::complex<double>(0.0, 2.0 * std::numbers::pi);
    CountingResult out;
    out.value = val.real();
    out.imag_part = val.imag();
    for (int j = 1; j <= mdl.j_max(); ++j)
        out.re_d_max = std::max(out.re_d_max, std::abs(mdl.d[j].real()));
    out.hypothesis_ok = out.re_d_max <= hypothesis_tol;
    return out;
}

/// The explicit closed forms of e_2..e_6 in terms of the ratios
/// c_j = d_j/d_0, for cross-checking the recurrence. Entries outside
/// 2..j_max are left at zero.
inline std::vector<std::complex<double>>
remark_e_closed_forms(const AsymptoticModel& mdl) {
    const double m = mdl.spec.m;
    const int J = mdl.j_max();
    const auto& c = mdl.c;
    std::vector<std::complex<double>> e(J + 1, 0.0);
    const double f = -2.0 * m / (m + 2.0);
    if (J >= 2)
        e[2] = f * c[2];
    if (J >= 3)
        e[3] = f * c[3];
    if (J >= 4)
        e[4] = f * c[4] + 3.0 * m * (m - 2.0) / ((m + 2.0) * (m + 2.0)) * c[2] * c[2];
    if (J >= 5)
        e[5] = f * c[5] +
               2.0 * m * (3.0 * m - 8.0) / std::pow(m + 2.0, 2) * c[2] * c[3];
    if (J >= 6)
        e[6] = f * c[6] +
               m * (3.0 * m - 10.0) / std::pow(m + 2.0, 2) * c[3] * c[3] +
               2.0 * m * (3.0 * m - 10.0) / std::pow(m + 2.0, 2) * c[2] * c[4] -
               4.0 * m * (3.0 * m - 10.0) * (m - 2.0) /
                   (3.0 * std::pow(m + 2.0, 3)) * c[2] * c[2] * c[2];
    return e;
}

} // namespace polyosc
