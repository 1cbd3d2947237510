#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace polyosc {

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
};

namespace detail {

// Gauss-Kronrod 7-15 nodes and weights on [-1, 1].
inline constexpr double gk15_x[8] = {
    0.99145537112081263921, 0.94910791234275852453, 0.86486442335976907279,
    0.74153118559939443986, 0.58608723546769113029, 0.40584515137739716691,
    0.20778495500789846760, 0.0,
};
inline constexpr double gk15_wk[8] = {
    0.02293532201052922496, 0.06309209262997855329, 0.10479001032225018384,
    0.14065325971552591875, 0.16900472663926790283, 0.19035057806478540991,
    0.20443294007529889241, 0.20948214108472782801,
};
inline constexpr double gk15_wg[4] = {
    0.12948496616886969327, 0.27970539148927666790,
    0.38183005050511894495, 0.41795918367346938776,
};

template <typename F>
inline QuadResult gk15(F&& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double pair_sum[8];
    for (int i = 0; i < 7; ++i)
        pair_sum[i] = f(c - h * gk15_x[i]) + f(c + h * gk15_x[i]);
    pair_sum[7] = f(c);
    double resk = 0.0;
    for (int i = 0; i < 8; ++i)
        resk += gk15_wk[i] * pair_sum[i];
    // The embedded 7-point Gauss rule uses the odd-index nodes plus the center.
    double resg = gk15_wg[3] * pair_sum[7];
    for (int i = 1; i < 7; i += 2)
        resg += gk15_wg[i / 2] * pair_sum[i];
    QuadResult r;
    r.value = resk * h;
    r.error = std::abs((resk - resg) * h);
    return r;
}

} // namespace detail

/// Adaptive Gauss-Kronrod integration of f over [a, b] to absolute
/// tolerance abs_tol. Throws on failure to converge.
template <typename F>
inline QuadResult integrate_adaptive(F&& f, double a, double b,
                                     double abs_tol = 1e-12,
                                     int max_intervals = 4000) {
    struct Interval {
        double a, b, value, error;
    };
    std::vector<Interval> heap;
    auto push = [&heap](Interval iv) {
        heap.push_back(iv);
        std::push_heap(heap.begin(), heap.end(),
                       [](const Interval& x, const Interval& y) {
                           return x.error < y.error;
                       });
    };
    auto r0 = detail::gk15(f, a, b);
    push({a, b, r0.value, r0.error});
    double total_err = r0.error;
    while (total_err > abs_tol &&
           static_cast<int>(heap.size()) < max_intervals) {
        std::pop_heap(heap.begin(), heap.end(),
                      [](const Interval& x, const Interval& y) {
                          return x.error < y.error;
                      });
        Interval worst = heap.back();
        heap.pop_back();
        total_err -= worst.error;
        const double mid = 0.5 * (worst.a + worst.b);
        auto rl = detail::gk15(f, worst.a, mid);
        auto rr = detail::gk15(f, mid, worst.b);
        push({worst.a, mid, rl.value, rl.error});
        push({mid, worst.b, rr.value, rr.error});
        total_err += rl.error + rr.error;
    }
    QuadResult out;
    for (const auto& iv : heap) {
        out.value += iv.value;
    }
    out.error = total_err;
    if (out.error > abs_tol)
        throw std::runtime_error("integrate_adaptive: failed to reach tolerance");
    return out;
}

} // namespace polyosc
