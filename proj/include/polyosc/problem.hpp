#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace polyosc {

/// The triple (m, ell, a) describing the operator
///   -u'' + [(-1)^ell (iz)^m - P(iz)] u = lambda u
/// with P(w) = a_1 w^{m-1} + a_2 w^{m-2} + ... + a_{m-1} w and decay
/// boundary conditions along the rays arg z = -pi/2 +- (ell+1)pi/(m+2).
struct ProblemSpec {
    int m = 0;
    int ell = 0;
    std::vector<std::complex<double>> a; // a[k-1] multiplies z^{m-k}

    ProblemSpec() = default;
    ProblemSpec(int m_, int ell_, std::vector<std::complex<double>> a_)
        : m(m_), ell(ell_), a(std::move(a_)) {
        validate();
    }

    static ProblemSpec unperturbed(int m_, int ell_) {
        return ProblemSpec(m_, ell_,
                           std::vector<std::complex<double>>(m_ - 1, 0.0));
    }

    void validate() const {
        if (m < 3)
            throw std::invalid_argument("ProblemSpec: m must be >= 3");
        if (ell < 1 || ell > m - 1)
            throw std::invalid_argument("ProblemSpec: need 1 <= ell <= m-1");
        if (static_cast<int>(a.size()) != m - 1)
            throw std::invalid_argument("ProblemSpec: a must have length m-1");
    }

    bool a_is_real(double tol = 0.0) const {
        for (const auto& c : a)
            if (std::abs(c.imag()) > tol)
                return false;
        return true;
    }

    /// Truncation order floor((m+2)/2) of the quantization condition.
    int j_max() const { return (m + 2) / 2; }
};

/// omega^nu with omega = exp(2 pi i/(m+2)), evaluated from the exact
/// rational exponent to avoid accumulated phase error.
inline std::complex<double> omega_pow(int m, double nu) {
    const double phase = nu * 2.0 * std::numbers::pi / (m + 2);
    return std::polar(1.0, phase);
}

/// G^s(a) = (omega^{(m+1)s} a_1, omega^{ms} a_2, ..., omega^{3s} a_{m-1}),
/// s in (1/2)Z.
inline std::vector<std::complex<double>>
g_action(int m, const std::vector<std::complex<double>>& a, double s) {
    const double two_s = 2.0 * s;
    if (std::abs(two_s - std::round(two_s)) > 1e-12)
        throw std::invalid_argument("g_action: s must be a half-integer");
    std::vector<std::complex<double>> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        const int k = static_cast<int>(i) + 1;
        out[i] = omega_pow(m, static_cast<double>(m + 2 - k) * s) * a[i];
    }
    return out;
}

} // namespace polyosc
