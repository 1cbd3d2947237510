// End-to-end acceptance suite. Each criterion prints exactly one
// "PASS criterion N: ..." or "FAIL criterion N: ..." line; the process
// exits nonzero if any criterion fails.

#include <lapacke.h>

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "polyosc/coeffs.hpp"
#include "polyosc/inverse.hpp"
#include "polyosc/shoot.hpp"

using namespace polyosc;
using complexd = std::complex<double>;

namespace oracles {

std::vector<double> quartic_fd_eigenvalues(int count, double L, int grid) {
    // Fourth-order stencil for -u'' on the interior grid of [-L, L], plus
    // the diagonal x^4; symmetric pentadiagonal, lower-band LAPACK storage.
    const int n = grid;
    const double h = 2.0 * L / (n + 1);
    const double s0 = 30.0 / (12.0 * h * h);
    const double s1 = -16.0 / (12.0 * h * h);
    const double s2 = 1.0 / (12.0 * h * h);
    const int kd = 2, ldab = kd + 1;
    std::vector<double> ab(static_cast<std::size_t>(ldab) * n, 0.0);
    for (int jcol = 0; jcol < n; ++jcol) {
        const double x = -L + (jcol + 1) * h;
        ab[jcol * ldab + 0] = s0 + x * x * x * x;
        if (jcol + 1 < n)
            ab[jcol * ldab + 1] = s1;
        if (jcol + 2 < n)
            ab[jcol * ldab + 2] = s2;
    }
    std::vector<double> w(n);
    const lapack_int info = LAPACKE_dsbev(LAPACK_COL_MAJOR, 'N', 'L', n, kd,
                                          ab.data(), ldab, w.data(), nullptr, 1);
    if (info != 0)
        throw std::runtime_error("quartic_fd_eigenvalues: dsbev failed");
    w.resize(count);
    return w;
}

} // namespace oracles

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& detail, double secs) {
    std::printf("%s criterion %d: %s (%.1f s)\n", pass ? "PASS" : "FAIL",
                criterion, detail.c_str(), secs);
    if (!pass)
        ++g_failures;
}

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double secs() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                             t0)
            .count();
    }
};

std::vector<complexd> random_complex_a(std::mt19937& rng, int m) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<complexd> a(m - 1);
    for (auto& c : a)
        c = complexd(dist(rng), dist(rng));
    return a;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

void criterion_1() {
    Timer t;
    double worst = 0.0;
    for (int m = 3; m <= 10; ++m) {
        worst = std::max(worst, std::abs(K_m0(m) - K_quad(m, 0, 0)));
        for (int j = 1; 2 * j <= m + 1; ++j)
            for (int k = 1; k <= j; ++k)
                worst = std::max(worst,
                                 std::abs(K_closed(m, j, k) - K_quad(m, j, k)));
        if (m % 2 == 0) {
            const int j = (m + 2) / 2;
            for (int k = 1; k <= j; ++k)
                worst = std::max(worst,
                                 std::abs(K_closed(m, j, k) - K_quad(m, j, k)));
        }
    }
    report(1, worst <= 1e-8,
           "K-constant closed form vs quadrature, m=3..10, worst gap " +
               fmt(worst),
           t.secs());
}

void criterion_2() {
    Timer t;
    std::mt19937 rng(1002);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const int m = 3 + trial % 6;
        ProblemSpec spec(m, 1 + trial % (m - 1), random_complex_a(rng, m));
        const auto series = oracles::sqrt_series(spec.a, m - 1);
        for (int j = 1; j <= m - 1; ++j)
            worst = std::max(worst, std::abs(b_j(spec, j) - series.coeff[j]));
    }
    report(2, worst <= 1e-12,
           "series-expansion oracle for b_j, 20 random draws, worst gap " +
               fmt(worst),
           t.secs());
}

void criterion_3() {
    Timer t;
    std::mt19937 rng(1003);
    double worst = 0.0;
    for (int m : {10, 11, 12})
        for (int trial = 0; trial < 5; ++trial) {
            ProblemSpec spec(m, 1 + trial % (m - 1), random_complex_a(rng, m));
            const auto mdl = make_model(spec);
            const auto closed = remark_e_closed_forms(mdl);
            for (int j = 2; j <= 6; ++j)
                worst = std::max(worst,
                                 std::abs(mdl.e[j] - closed[j]) /
                                     std::max(1.0, std::abs(closed[j])));
        }
    report(3, worst <= 1e-12,
           "recurrence vs closed forms e_2..e_6, m=10..12, worst relative "
           "gap " +
               fmt(worst),
           t.secs());
}

void criterion_4() {
    Timer t;
    auto mdl = make_model(ProblemSpec::unperturbed(5, 2));
    for (int j = 1; j <= mdl.j_max(); ++j)
        mdl.d[j] = 0.0;
    double worst = 0.0;
    for (int n = 0; n <= 10000; ++n) {
        const double scale = (2.0 * n + 1.0) * std::numbers::pi;
        worst = std::max(
            worst, std::abs(residual(mdl, lambda_n0(mdl.spec, n), n)) / scale);
    }
    report(4, worst <= 1e-9,
           "quantization inversion residual, n<=1e4, worst scaled residual " +
               fmt(worst),
           t.secs());
}

void criterion_5() {
    Timer t;
    bool pass = true;
    std::string detail;
    ShootingConfig cfg;
    for (auto [m, ell] : {std::pair{3, 1}, std::pair{4, 2}}) {
        const auto spec = ProblemSpec::unperturbed(m, ell);
        const auto mdl = make_model(spec);
        double prev = 1e300, gap20 = 0.0, lead20 = 0.0;
        for (int n : {5, 10, 15, 20}) {
            const auto rec = find_eigenvalue(spec, asym_eigenvalue(mdl, n), cfg);
            const double gap = std::abs(rec.lambda - asym_eigenvalue(mdl, n)) /
                               std::abs(rec.lambda);
            if (gap > 1.10 * prev)
                pass = false;
            prev = gap;
            if (n == 20) {
                gap20 = gap;
                lead20 = std::abs(rec.lambda - lambda_n0(spec, n)) /
                         std::abs(rec.lambda);
            }
        }
        if (gap20 > 0.01 || lead20 > 0.01)
            pass = false;
        detail += " (m=" + std::to_string(m) + ",ell=" + std::to_string(ell) +
                  "): gap(20)=" + fmt(gap20) + ", leading(20)=" + fmt(lead20);
    }
    report(5, pass, "shooting vs asymptotics converge" + detail, t.secs());
}

void criterion_6() {
    Timer t;
    const auto spec = ProblemSpec::unperturbed(4, 2);
    ShootingConfig cfg;
    const auto scan = scan_spectrum(spec, 0, 10, cfg, 4);
    bool pass = scan.failures.empty() && scan.records.size() == 11;
    double worst = 0.0;
    if (pass) {
        const auto oracle = oracles::quartic_fd_eigenvalues(11);
        for (int n = 0; n <= 10; ++n)
            worst = std::max(worst,
                             std::abs(scan.records[n].lambda - oracle[n]) /
                                 oracle[n]);
        pass = worst <= 1e-6;
    }
    report(6, pass,
           "quartic shooting vs finite-difference oracle, n<=10, worst "
           "relative gap " +
               fmt(worst),
           t.secs());
}

// Spectra from criterion 7 are reused by criterion 8.
std::vector<std::pair<ProblemSpec, std::vector<complexd>>> g_pt_spectra;

void criterion_7() {
    Timer t;
    std::mt19937 rng(1007);
    std::uniform_real_distribution<double> dist(-0.3, 0.3);
    ShootingConfig cfg;
    bool pass = true;
    double worst_im = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
        const int m = (trial % 2 == 0) ? 3 : 4;
        std::vector<complexd> a(m - 1);
        for (auto& c : a)
            c = dist(rng);
        ProblemSpec spec(m, 1, a);
        const auto scan = scan_spectrum(spec, 0, 15, cfg, 4);
        if (!scan.failures.empty() || scan.records.size() != 16) {
            pass = false;
            continue;
        }
        std::vector<complexd> lam;
        for (const auto& rec : scan.records) {
            lam.push_back(rec.lambda);
            worst_im = std::max(worst_im, std::abs(rec.lambda.imag()) /
                                              std::abs(rec.lambda));
        }
        for (std::size_t i = 6; i < lam.size(); ++i)
            if (!(std::abs(lam[i]) > std::abs(lam[i - 1])))
                pass = false;
        g_pt_spectra.emplace_back(spec, lam);
    }
    pass = pass && worst_im <= 1e-8;
    report(7, pass,
           "PT reality for 5 random real potentials, worst |Im|/|lambda| " +
               fmt(worst_im),
           t.secs());
}

void criterion_8() {
    Timer t;
    bool pass = !g_pt_spectra.empty();
    double worst = 0.0;
    for (const auto& [spec, lam] : g_pt_spectra) {
        const auto mdl = make_model(spec);
        for (int i = 5; i <= 14; ++i) {
            const double tmid =
                0.5 * (std::abs(lam[i]) + std::abs(lam[i + 1]));
            const auto c = counting(mdl, tmid);
            worst = std::max(worst, std::abs(c.value - (i + 1.0)));
            if (!c.hypothesis_ok)
                pass = false;
        }
    }
    pass = pass && worst <= 2.0;
    report(8, pass,
           "counting function vs empirical count, worst deviation " +
               fmt(worst),
           t.secs());
}

void criterion_9() {
    Timer t;
    const std::vector<complexd> truth{0.0, 0.3, -0.2, 0.1};
    ProblemSpec spec(5, 1, truth);
    const auto mdl = make_model(spec);
    bool pass = true;
    std::string detail;

    // Noiseless asymptotic data, n in [20, 60].
    {
        InverseProblem p;
        p.m = 5;
        p.ell = 1;
        p.j_max = 3;
        p.n_min = 20;
        p.known[1] = truth[0];
        for (int n = 20; n <= 60; ++n)
            p.eigs.emplace_back(n, asym_eigenvalue(mdl, n));
        const auto a = recover_a(p, fit_e(p).e);
        const double err =
            std::max(std::abs(a[1] - truth[1]), std::abs(a[2] - truth[2]));
        if (err > 1e-6)
            pass = false;
        detail += "asym error " + fmt(err);
    }
    // Shooting data, n in [10, 40], 2% relative tolerance.
    {
        ShootingConfig cfg;
        const auto scan = scan_spectrum(spec, 10, 40, cfg, 4);
        InverseProblem p;
        p.m = 5;
        p.ell = 1;
        p.j_max = 3;
        p.n_min = 10;
        // Numerical spectra carry the true higher-order expansion tail and
        // index-dependent noise; absorb them with nuisance basis terms and
        // iterative reweighting.
        p.j_fit = 7;
        p.reweight_rounds = 4;
        p.known[1] = truth[0];
        for (const auto& rec : scan.records)
            if (rec.n)
                p.eigs.emplace_back(*rec.n, rec.lambda);
        if (!scan.failures.empty() || p.eigs.size() != 31) {
            pass = false;
            detail += ", shooting scan incomplete";
        } else {
            const auto a = recover_a(p, fit_e(p).e);
            const double rel =
                std::max(std::abs(a[1] - truth[1]) / std::abs(truth[1]),
                         std::abs(a[2] - truth[2]) / std::abs(truth[2]));
            if (rel > 0.02)
                pass = false;
            detail += ", shooting relative error " + fmt(rel);
        }
    }
    report(9, pass, "inverse roundtrip (m=5, ell=1): " + detail, t.secs());
}

void criterion_10() {
    Timer t;
    std::mt19937 rng(1010);
    double worst = 0.0;
    for (int m : {3, 4, 5, 6, 8})
        for (int trial = 0; trial < 4; ++trial) {
            const int ell = 1 + trial % (m - 1);
            const auto a = random_complex_a(rng, m);
            ProblemSpec spec(m, ell, a);
            // G-action equivariance of b_{j,k}
            for (double s : {0.5, 1.0, 2.5}) {
                ProblemSpec moved(m, ell, g_action(m, a, s));
                for (int j = 1; j <= spec.j_max(); ++j)
                    for (int k = 1; k <= j; ++k)
                        worst = std::max(
                            worst,
                            std::abs(b_jk(moved, j, k) -
                                     omega_pow(m, ((m + 2) * k - j) * s) *
                                         b_jk(spec, j, k)));
            }
            // reflection identity ell -> m - ell
            auto flipped = a;
            for (int k = 1; k <= m - 1; ++k)
                if ((m - k) % 2 != 0)
                    flipped[k - 1] = -flipped[k - 1];
            ProblemSpec refl(m, m - ell, flipped);
            for (int j = 0; j <= spec.j_max(); ++j)
                worst = std::max(worst,
                                 std::abs(d_lj(refl, j) - d_lj(spec, j)));
        }
    report(10, worst <= 1e-12,
           "symmetry identities (G-equivariance, reflection), worst gap " +
               fmt(worst),
           t.secs());
}

} // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    if (g_failures == 0) {
        std::printf("all criteria passed\n");
        return 0;
    }
    std::printf("%d criteria failed\n", g_failures);
    return 1;
}
