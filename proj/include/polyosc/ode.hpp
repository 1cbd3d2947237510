#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace polyosc {

using ode_state = std::array<std::complex<double>, 2>;

namespace detail {

// Dormand-Prince 5(4) tableau.
inline constexpr double dp_c[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5,
                                   8.0 / 9, 1.0, 1.0};
inline constexpr double dp_a[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
inline constexpr double dp_b5[7] = {35.0 / 384,     0.0,  500.0 / 1113,
                                    125.0 / 192,    -2187.0 / 6784,
                                    11.0 / 84,      0.0};
inline constexpr double dp_e[7] = {
    35.0 / 384 - 5179.0 / 57600,   0.0,
    500.0 / 1113 - 7571.0 / 16695, 125.0 / 192 - 393.0 / 640,
    -2187.0 / 6784 + 92097.0 / 339200,
    11.0 / 84 - 187.0 / 2100,      -1.0 / 40};

} // namespace detail

/// Adaptive Dormand-Prince 5(4) integration of y' = f(s, y) from s0 to s1
/// (either direction). Calls post_step(y) after every accepted step; the
/// callback may rescale the state in place (the system must be linear for
/// that to be valid).
template <typename F, typename PostStep>
inline void integrate_dopri5(F&& f, ode_state& y, double s0, double s1,
                             double rtol, double atol, PostStep&& post_step) {
    const double dir = s1 >= s0 ? 1.0 : -1.0;
    double s = s0;
    double span = std::abs(s1 - s0);
    if (span == 0.0)
        return;
    double h = dir * std::min(1e-3 * span + 1e-12, 0.1);
    const double hmin = span * 1e-15;
    ode_state k[7];
    f(s, y, k[0]);
    while (dir * (s1 - s) > 0.0) {
        if (std::abs(h) > std::abs(s1 - s))
            h = s1 - s;
        ode_state yt;
        for (int stage = 1; stage < 7; ++stage) {
            for (int i = 0; i < 2; ++i) {
                std::complex<double> acc = 0.0;
                for (int q = 0; q < stage; ++q)
                    acc += detail::dp_a[stage][q] * k[q][i];
                yt[i] = y[i] + h * acc;
            }
            f(s + detail::dp_c[stage] * h, yt, k[stage]);
        }
        ode_state y5;
        double err = 0.0;
        for (int i = 0; i < 2; ++i) {
            std::complex<double> acc5 = 0.0, acce = 0.0;
            for (int q = 0; q < 7; ++q) {
                acc5 += detail::dp_b5[q] * k[q][i];
                acce += detail::dp_e[q] * k[q][i];
            }
            y5[i] = y[i] + h * acc5;
            const double sc =
                atol + rtol * std::max(std::abs(y[i]), std::abs(y5[i]));
            const double e = std::abs(h * acce) / sc;
            err = std::max(err, e);
        }
        if (err <= 1.0) {
            s += h;
            y = y5;
            post_step(y);
            // post_step may have rescaled y, so refresh the derivative
            // instead of reusing the FSAL stage.
            f(s, y, k[0]);
        }
        const double fac =
            std::clamp(0.9 * std::pow(err > 0.0 ? err : 1e-10, -0.2), 0.2, 5.0);
        h *= fac;
        if (std::abs(h) < hmin)
            throw std::runtime_error("integrate_dopri5: step underflow at s=" +
                                     std::to_string(s));
    }
}

} // namespace polyosc
