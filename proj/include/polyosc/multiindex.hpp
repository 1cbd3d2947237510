#pragma once

#include <algorithm>
#include <complex>
#include <vector>

namespace polyosc {

/// Nonnegative integer exponent vector alpha over positions 1..dim.
/// weight() is the number of factors |alpha|, degree() the weighted sum
/// against beta = (1, 2, ..., dim).
struct MultiIndex {
    std::vector<int> alpha; // alpha[i] is the exponent at position i+1

    int weight() const {
        int s = 0;
        for (int v : alpha)
            s += v;
        return s;
    }
    int degree() const {
        int s = 0;
        for (std::size_t i = 0; i < alpha.size(); ++i)
            s += static_cast<int>(i + 1) * alpha[i];
        return s;
    }
    bool operator==(const MultiIndex&) const = default;
};

/// Multinomial weight k!/alpha! for |alpha| = k.
inline double multinomial(const MultiIndex& mi) {
    double r = 1.0;
    int placed = 0;
    for (int v : mi.alpha) {
        for (int q = 1; q <= v; ++q) {
            ++placed;
            r *= static_cast<double>(placed) / static_cast<double>(q);
        }
    }
    return r;
}

/// Monomial x^alpha for a vector x indexed from position 1 (x[0] is x_1).
inline std::complex<double> monomial(const std::vector<std::complex<double>>& x,
                                     const MultiIndex& mi) {
    std::complex<double> p = 1.0;
    for (std::size_t i = 0; i < mi.alpha.size(); ++i) {
        for (int q = 0; q < mi.alpha[i]; ++q)
            p *= x[i];
    }
    return p;
}

namespace detail {

inline void multi_indices_rec(int pos, int degree_left, int count_left,
                              MultiIndex& cur, std::vector<MultiIndex>& out) {
    if (count_left == 0) {
        if (degree_left == 0)
            out.push_back(cur);
        return;
    }
    if (pos < 1 || degree_left < count_left || degree_left > pos * count_left)
        return;
    const int cmax = std::min(count_left, degree_left / pos);
    for (int c = 0; c <= cmax; ++c) {
        cur.alpha[pos - 1] = c;
        multi_indices_rec(pos - 1, degree_left - c * pos, count_left - c, cur,
                          out);
        cur.alpha[pos - 1] = 0;
    }
}

} // namespace detail

/// All alpha in N_0^dim with |alpha| = count and alpha . beta = degree.
/// Empty when none exist.
inline std::vector<MultiIndex> multi_indices(int dim, int degree, int count) {
    std::vector<MultiIndex> out;
    if (dim < 1 || degree < 0 || count < 0)
        return out;
    MultiIndex cur;
    cur.alpha.assign(dim, 0);
    detail::multi_indices_rec(dim, degree, count, cur, out);
    return out;
}

} // namespace polyosc
