#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <utility>
#include <stdexcept>
#include <vector>

#include "polyosc/asym.hpp"
#include "polyosc/problem.hpp"

namespace polyosc {

/// Inverse problem input: eigenvalue samples (n, lambda_n), the known
/// coefficients required by the reconstruction hypothesis, and the highest
/// index to recover.
struct InverseProblem {
    int m = 0;
    int ell = 0;
    std::vector<std::pair<int, std::complex<double>>> eigs;
    std::map<int, std::complex<double>> known; // j -> a_j
    int j_max = 2;
    int n_min = 10;
    /// Highest basis index carried by the least-squares fit. Indices
    /// j_max+1..j_fit are nuisance terms: they absorb the higher-order
    /// tail of the eigenvalue expansion (which otherwise biases the
    /// fitted e_2..e_{j_max}) and are never used for recovery. 0 means
    /// j_fit = j_max. For even m the tail also contains log-lambda
    /// terms that this power basis does not represent.
    int j_fit = 0;
    /// Rounds of iterative reweighting (weights 1/sigma^2 with sigma
    /// estimated from the previous round's residuals). Useful when the
    /// eigenvalue noise is strongly index-dependent, e.g. numerical
    /// spectra whose accuracy degrades at large n. 0 = unweighted.
    int reweight_rounds = 0;

    /// Index j is excluded from recovery when (j-1) ell = 0 mod m; those
    /// coefficients must be supplied in `known`.
    bool index_excluded(int j) const { return ((j - 1) * ell) % m == 0; }

    void validate() const {
        if (m < 3 || ell < 1 || ell > m - 1)
            throw std::invalid_argument("InverseProblem: invalid (m, ell)");
        if (2 * j_max > m + 1)
            throw std::invalid_argument(
                "InverseProblem: j_max beyond reconstruction range (m+1)/2");
        for (int j = 1; j <= j_max; ++j)
            if (index_excluded(j) && !known.count(j))
                throw std::invalid_argument(
                    "InverseProblem: a_" + std::to_string(j) +
                    " must be declared known ((j-1) ell = 0 mod m)");
        if (j_fit != 0 && j_fit < j_max)
            throw std::invalid_argument(
                "InverseProblem: j_fit must be 0 or >= j_max");
        if (reweight_rounds < 0 || reweight_rounds > 20)
            throw std::invalid_argument(
                "InverseProblem: reweight_rounds in [0, 20]");
    }
};

struct FitResult {
    std::vector<std::complex<double>> e; // e[j], j = 0..j_max (e[0], e[1] = 0)
    double condition = 0.0;              // design-matrix condition number
};

namespace detail {

/// Eigenvalues of a small Hermitian matrix by cyclic Jacobi rotations.
inline std::vector<double>
hermitian_eigenvalues(std::vector<std::vector<std::complex<double>>> h) {
    const int n = static_cast<int>(h.size());
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q)
                off += std::norm(h[p][q]);
        if (off < 1e-30)
            break;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) {
                if (std::abs(h[p][q]) < 1e-300)
                    continue;
                // Unitary 2x2 diagonalization of [[app, apq], [apq*, aqq]].
                const double app = h[p][p].real(), aqq = h[q][q].real();
                const std::complex<double> apq = h[p][q];
                const double phi = std::arg(apq);
                const double tau = (aqq - app) / (2.0 * std::abs(apq));
                const double t = (tau >= 0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double cth = 1.0 / std::sqrt(1.0 + t * t);
                const double sth = t * cth;
                const std::complex<double> s =
                    sth * std::polar(1.0, phi);
                for (int r = 0; r < n; ++r) {
                    const auto hrp = h[r][p], hrq = h[r][q];
                    h[r][p] = cth * hrp - std::conj(s) * hrq;
                    h[r][q] = s * hrp + cth * hrq;
                }
                for (int r = 0; r < n; ++r) {
                    const auto hpr = h[p][r], hqr = h[q][r];
                    h[p][r] = cth * hpr - s * hqr;
                    h[q][r] = std::conj(s) * hpr + cth * hqr;
                }
            }
    }
    std::vector<double> ev(n);
    for (int i = 0; i < n; ++i)
        ev[i] = h[i][i].real();
    return ev;
}

/// Solve the square complex system M x = b by partial-pivot elimination.
inline std::vector<std::complex<double>>
solve_dense(std::vector<std::vector<std::complex<double>>> M,
            std::vector<std::complex<double>> b) {
    const int n = static_cast<int>(M.size());
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(M[r][col]) > std::abs(M[piv][col]))
                piv = r;
        std::swap(M[col], M[piv]);
        std::swap(b[col], b[piv]);
        if (std::abs(M[col][col]) < 1e-300)
            throw std::runtime_error("solve_dense: singular system");
        for (int r = col + 1; r < n; ++r) {
            const auto f = M[r][col] / M[col][col];
            for (int cc = col; cc < n; ++cc)
                M[r][cc] -= f * M[col][cc];
            b[r] -= f * b[col];
        }
    }
    std::vector<std::complex<double>> x(n);
    for (int r = n - 1; r >= 0; --r) {
        std::complex<double> s = b[r];
        for (int cc = r + 1; cc < n; ++cc)
            s -= M[r][cc] * x[cc];
        x[r] = s / M[r][r];
    }
    return x;
}

} // namespace detail

/// Least-squares fit of lambda_n - lambda_{n,0} against the basis
/// {lambda_{n,0}^{1-j/m}}, j = 2..j_fit, over samples with n >= n_min,
/// optionally iteratively reweighted (see InverseProblem::reweight_rounds).
/// Only e_2..e_{j_max} of the result are meaningful for recovery; the
/// higher entries are nuisance coefficients.
inline FitResult fit_e(const InverseProblem& prob) {
    prob.validate();
    const int jf = prob.j_fit == 0 ? prob.j_max : prob.j_fit;
    const int p = jf - 1; // unknowns e_2..e_{jf}
    if (p < 1)
        throw std::invalid_argument("fit_e: j_max must be >= 2");
    std::vector<std::vector<std::complex<double>>> rows;
    std::vector<std::complex<double>> targets;
    for (const auto& [n, lam] : prob.eigs) {
        if (n < prob.n_min)
            continue;
        const double l0 = lambda_n0(prob.m, prob.ell, n);
        std::vector<std::complex<double>> row(p);
        for (int j = 2; j <= jf; ++j)
            row[j - 2] = std::pow(l0, 1.0 - static_cast<double>(j) / prob.m);
        rows.push_back(std::move(row));
        targets.push_back(lam - l0);
    }
    if (static_cast<int>(rows.size()) < 2 * jf)
        throw std::invalid_argument(
            "fit_e: need at least 2*j_fit samples with n >= n_min");
    // Equilibrate: scale each basis column to unit root-mean-square. The
    // raw columns span several orders of magnitude, and the normal
    // equations square that disparity.
    std::vector<double> colscale(p, 0.0);
    for (int i = 0; i < p; ++i) {
        for (const auto& row : rows)
            colscale[i] += std::norm(row[i]);
        colscale[i] = std::sqrt(colscale[i] / rows.size());
    }
    for (auto& row : rows)
        for (int i = 0; i < p; ++i)
            row[i] /= colscale[i];
    std::vector<double> weights(rows.size(), 1.0);
    FitResult out;
    std::vector<std::complex<double>> x;
    for (int round = 0; round <= prob.reweight_rounds; ++round) {
        // Normal equations A^H W A x = A^H W b.
        std::vector<std::vector<std::complex<double>>> gram(
            p, std::vector<std::complex<double>>(p, 0.0));
        std::vector<std::complex<double>> rhs(p, 0.0);
        for (std::size_t r = 0; r < rows.size(); ++r)
            for (int i = 0; i < p; ++i) {
                for (int j = 0; j < p; ++j)
                    gram[i][j] +=
                        weights[r] * std::conj(rows[r][i]) * rows[r][j];
                rhs[i] += weights[r] * std::conj(rows[r][i]) * targets[r];
            }
        auto ev = detail::hermitian_eigenvalues(gram);
        double evmin = ev[0], evmax = ev[0];
        for (double v : ev) {
            evmin = std::min(evmin, v);
            evmax = std::max(evmax, v);
        }
        out.condition = evmin > 0.0 ? std::sqrt(evmax / evmin)
                                    : std::numeric_limits<double>::infinity();
        if (out.condition > 1e12)
            throw std::runtime_error("fit_e: design matrix rank-deficient "
                                     "(condition " +
                                     std::to_string(out.condition) + ")");
        x = detail::solve_dense(gram, rhs);
        if (round == prob.reweight_rounds)
            break;
        // Per-sample noise estimate from residuals, floored at half the
        // median so that near-interpolated samples cannot dominate.
        std::vector<double> mag(rows.size());
        for (std::size_t r = 0; r < rows.size(); ++r) {
            std::complex<double> s = targets[r];
            for (int i = 0; i < p; ++i)
                s -= rows[r][i] * x[i];
            mag[r] = std::abs(s);
        }
        std::vector<double> med = mag;
        std::nth_element(med.begin(), med.begin() + med.size() / 2, med.end());
        const double floor_sig = 0.5 * med[med.size() / 2] + 1e-14;
        for (std::size_t r = 0; r < rows.size(); ++r) {
            const double s = std::max(mag[r], floor_sig);
            weights[r] = 1.0 / (s * s);
        }
    }
    out.e.assign(jf + 1, 0.0);
    for (int j = 2; j <= jf; ++j)
        out.e[j] = x[j - 2] / colscale[j - 2];
    return out;
}

/// Sequential reconstruction of a_2..a_{j_max} from fitted e_j values,
/// inverting the affine dependence of e_j on a_j with a two-point probe.
inline std::vector<std::complex<double>>
recover_a(const InverseProblem& prob,
          const std::vector<std::complex<double>>& e_est) {
    prob.validate();
    std::vector<std::complex<double>> a(prob.m - 1, 0.0);
    a[0] = prob.known.at(1);
    for (int j = 2; j <= prob.j_max; ++j) {
        if (prob.index_excluded(j)) {
            a[j - 1] = prob.known.at(j);
            continue;
        }
        auto probe = [&](std::complex<double> aj) {
            auto trial = a;
            trial[j - 1] = aj;
            for (int q = j; q < prob.m - 1; ++q)
                trial[q] = 0.0;
            ProblemSpec spec(prob.m, prob.ell, trial);
            return compute_e(spec)[j];
        };
        const auto e0 = probe(0.0);
        const auto e1 = probe(1.0);
        const auto slope = e1 - e0;
        if (std::abs(slope) < 1e-14)
            throw std::runtime_error(
                "recover_a: e_" + std::to_string(j) +
                " does not depend on a_j (degenerate index misdeclared)");
        a[j - 1] = (e_est[j] - e0) / slope;
    }
    return a;
}

} // namespace polyosc
