#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <future>
#include <limits>
#include <mutex>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "polyosc/asym.hpp"
#include "polyosc/ode.hpp"
#include "polyosc/problem.hpp"
#include "polyosc/quadrature.hpp"

namespace polyosc {

struct ShootingConfig {
    double radius_factor = 8.0;  // cap multiplier for the dominance search
    double action_target = 30.0; // WKB action accumulated beyond dominance
    double rtol = 1e-10;
    double atol = 1e-12;
    double newton_tol = 1e-9;    // relative lambda-update stop
    int max_iter = 50;
    double renorm_threshold = 1e100;

    void validate() const {
        if (radius_factor < 2.0)
            throw std::invalid_argument("ShootingConfig: radius_factor >= 2");
        if (action_target < 5.0)
            throw std::invalid_argument("ShootingConfig: action_target >= 5");
        if (rtol <= 0.0 || atol <= 0.0 || newton_tol <= 0.0)
            throw std::invalid_argument("ShootingConfig: tolerances positive");
    }
};

enum class Method { shooting, asymptotic, refined };

inline const char* method_name(Method m) {
    switch (m) {
    case Method::shooting: return "shooting";
    case Method::asymptotic: return "asymptotic";
    case Method::refined: return "refined";
    }
    return "?";
}

struct EigenvalueRecord {
    std::optional<int> n;
    std::complex<double> lambda;
    std::complex<double> wronskian_residual = 0.0;
    int iterations = 0;
    Method method = Method::shooting;
};

/// Solution data on one boundary ray: value, derivative with respect to
/// arc length s, and the accumulated renormalization exponent.
struct RayState {
    std::complex<double> u;
    std::complex<double> du;
    double log_scale = 0.0;
};

/// Ray angles of the decay boundary condition,
///   arg z = -pi/2 +- (ell+1) pi/(m+2).
inline std::pair<double, double> boundary_rays(const ProblemSpec& spec) {
    const double half = std::numbers::pi / 2.0;
    const double off = (spec.ell + 1) * std::numbers::pi / (spec.m + 2);
    return {-half - off, -half + off};
}

/// V(z) = (-1)^ell (iz)^m - P(iz).
inline std::complex<double> potential(const ProblemSpec& spec,
                                      std::complex<double> z) {
    const std::complex<double> w = std::complex<double>(0.0, 1.0) * z;
    // Horner over (iz)^m + a_1 (iz)^{m-1} + ... + a_{m-1} (iz), then signs.
    std::complex<double> p = 1.0; // coefficient of the leading power
    for (int k = 1; k <= spec.m - 1; ++k)
        p = p * w + spec.a[k - 1];
    p = p * w; // = (iz)^m + P(iz) ... with leading term included
    const std::complex<double> lead_and_p = p;
    // Separate: (iz)^m alone
    std::complex<double> wm = 1.0;
    for (int k = 0; k < spec.m; ++k)
        wm *= w;
    const double sign = spec.ell % 2 == 0 ? 1.0 : -1.0;
    return sign * wm - (lead_and_p - wm);
}

/// dV/dz.
inline std::complex<double> potential_deriv(const ProblemSpec& spec,
                                            std::complex<double> z) {
    const std::complex<double> i(0.0, 1.0);
    const std::complex<double> w = i * z;
    // d/dw of (iz)^m and P(w), times dw/dz = i
    std::complex<double> dp = 0.0; // P'(w) by Horner
    for (int k = 1; k <= spec.m - 1; ++k)
        dp = dp * w + static_cast<double>(spec.m - k) * spec.a[k - 1];
    std::complex<double> dwm = static_cast<double>(spec.m);
    for (int k = 0; k < spec.m - 1; ++k)
        dwm *= w;
    const double sign = spec.ell % 2 == 0 ? 1.0 : -1.0;
    return i * (sign * dwm - dp);
}

/// Shooting radius. First find the smallest s1 (beyond the classical
/// turning point) with the dominance property
///   s1^m >= 4 (|lambda| + sum_k |a_k| s1^{m-k}),
/// which guarantees |V - lambda| >= s^m / 2 for all s >= s1. The WKB
/// action between s1 and R is then at least (R^p - s1^p) / (sqrt(2) p)
/// with p = (m+2)/2; choosing R so that this bound reaches action_target
/// suppresses dominant-solution contamination of the initial state by
/// exp(-2 action_target) while keeping R (and the integration cost) as
/// small as the accuracy demand allows.
inline double choose_radius(const ProblemSpec& spec, std::complex<double> lambda,
                            const ShootingConfig& cfg) {
    const double t = std::max(std::pow(std::abs(lambda), 1.0 / spec.m), 1.0);
    auto dominated = [&](double r) {
        double rhs = std::abs(lambda);
        for (int k = 1; k <= spec.m - 1; ++k)
            rhs += std::abs(spec.a[k - 1]) * std::pow(r, spec.m - k);
        return std::pow(r, spec.m) >= 4.0 * rhs;
    };
    double s1 = 1.1 * t;
    const double cap = 64.0 * cfg.radius_factor * t;
    while (!dominated(s1)) {
        s1 *= 1.2;
        if (s1 > cap)
            throw std::runtime_error("choose_radius: dominance condition "
                                     "unreachable within radius cap");
    }
    const double p = 0.5 * (spec.m + 2);
    return std::pow(std::pow(s1, p) + std::sqrt(2.0) * p * cfg.action_target,
                    1.0 / p);
}

/// Matching point for the two ray solutions, on the bisector of the
/// boundary rays (the negative imaginary axis). Declared here, defined
/// after wronskian().
inline std::complex<double> match_point(const ProblemSpec& spec,
                                        std::complex<double> lambda,
                                        const ShootingConfig& cfg);

/// First-order WKB state of the recessive solution at z = R e^{i theta}:
/// u = Q^{-1/4}, u' = (-Q^{1/2} - Q'/(4Q)) u, with the square-root branch
/// making the solution decay outward along the ray.
inline RayState wkb_init(const ProblemSpec& spec, std::complex<double> lambda,
                         double theta, double R) {
    const std::complex<double> dir = std::polar(1.0, theta);
    const std::complex<double> z = R * dir;
    const std::complex<double> q = potential(spec, z) - lambda;
    const std::complex<double> qp = potential_deriv(spec, z);
    std::complex<double> root = std::sqrt(q);
    if ((root * dir).real() < 0.0)
        root = -root;
    RayState st;
    st.u = std::pow(q, -0.25);
    const std::complex<double> du_dz = (-root - qp / (4.0 * q)) * st.u;
    st.du = dir * du_dz; // derivative w.r.t. arc length s
    return st;
}

/// Integrate u'' = e^{2 i theta} (V(s e^{i theta}) - lambda) u from s = R
/// down to s = 0, renormalizing whenever the state magnitude exceeds the
/// threshold.
inline RayState integrate_ray(const ProblemSpec& spec,
                              std::complex<double> lambda, double theta,
                              const ShootingConfig& cfg,
                              std::optional<double> radius = std::nullopt) {
    const double R = radius ? *radius : choose_radius(spec, lambda, cfg);
    const std::complex<double> dir = std::polar(1.0, theta);
    const std::complex<double> dir2 = dir * dir;
    RayState st = wkb_init(spec, lambda, theta, R);
    ode_state y{st.u, st.du};
    double log_scale = 0.0;
    auto rhs = [&](double s, const ode_state& v, ode_state& dv) {
        dv[0] = v[1];
        dv[1] = dir2 * (potential(spec, s * dir) - lambda) * v[0];
    };
    auto renorm = [&](ode_state& v) {
        const double mag = std::max(std::abs(v[0]), std::abs(v[1]));
        if (mag > cfg.renorm_threshold) {
            v[0] /= mag;
            v[1] /= mag;
            log_scale += std::log(mag);
        }
    };
    integrate_dopri5(rhs, y, R, 0.0, cfg.rtol, cfg.atol, renorm);
    return RayState{y[0], y[1], log_scale};
}

/// Integrate u'' = (V - lambda) u along the straight segment from za to
/// zb. On entry st holds (u, du/dz, log_scale) at za; on exit, at zb.
inline void integrate_segment(const ProblemSpec& spec,
                              std::complex<double> lambda,
                              std::complex<double> za, std::complex<double> zb,
                              const ShootingConfig& cfg, RayState& st) {
    const std::complex<double> d = zb - za;
    ode_state y{st.u, st.du * d}; // derivative w.r.t. the parameter t
    auto rhs = [&](double t, const ode_state& v, ode_state& dv) {
        dv[0] = v[1];
        dv[1] = d * d * (potential(spec, za + t * d) - lambda) * v[0];
    };
    auto renorm = [&](ode_state& v) {
        const double mag = std::max(std::abs(v[0]), std::abs(v[1]));
        if (mag > cfg.renorm_threshold) {
            v[0] /= mag;
            v[1] /= mag;
            st.log_scale += std::log(mag);
        }
    };
    integrate_dopri5(rhs, y, 0.0, 1.0, cfg.rtol, cfg.atol, renorm);
    st.u = y[0];
    st.du = y[1] / d;
}

/// Normalized Wronskian of the two boundary-ray solutions, matched on the
/// ray bisector. Each solution is started by WKB at radius R on its ray,
/// integrated radially in to the bend point r_t e^{i theta}, then along a
/// straight chord to the matching point. Zero exactly at eigenvalues; the
/// renormalization exponents cancel in the normalized quotient. The
/// matching point and radius can be frozen by the caller so that W is a
/// smooth function of lambda during root iteration.
inline std::complex<double> wronskian(
    const ProblemSpec& spec, std::complex<double> lambda,
    const ShootingConfig& cfg,
    std::optional<std::complex<double>> zm_opt = std::nullopt,
    std::optional<double> radius = std::nullopt) {
    const double R = radius ? *radius : choose_radius(spec, lambda, cfg);
    const std::complex<double> zm =
        zm_opt ? *zm_opt : match_point(spec, lambda, cfg);
    const double rt =
        std::max(std::pow(std::abs(lambda), 1.0 / spec.m), 1.0);
    const double rb = rt; // bend radius; choose_radius guarantees R > rt
    auto [theta_l, theta_r] = boundary_rays(spec);
    auto run = [&](double theta) {
        const std::complex<double> dir = std::polar(1.0, theta);
        RayState st = wkb_init(spec, lambda, theta, R);
        st.du *= std::conj(dir); // arc-length derivative -> d/dz
        integrate_segment(spec, lambda, R * dir, rb * dir, cfg, st);
        integrate_segment(spec, lambda, rb * dir, zm, cfg, st);
        return st;
    };
    const RayState left = run(theta_l);
    const RayState right = run(theta_r);
    const std::complex<double> w =
        left.u * right.du - left.du * right.u;
    const double nl = std::max(std::abs(left.u), std::abs(left.du));
    const double nr = std::max(std::abs(right.u), std::abs(right.du));
    return w / (nl * nr);
}

/// Definition of match_point. Matching at the origin is ill-conditioned
/// whenever both ray solutions grow toward the origin in lockstep: the
/// normalized Wronskian then loses its recessive component to rounding and
/// |dW/dlambda| collapses toward the noise floor, so root iteration stalls
/// at an accuracy far below the integrator tolerance. The well-conditioned
/// matching depth sits inside the classically allowed region between the
/// two turning points adjacent to the bisector, and its location depends
/// on (m, ell, lambda) -- for large lambda the good window can be narrow.
/// Rather than model that geometry, maximize the conditioning signal
/// itself: scan the depth y of z_m = -i y over [0, 0.95 r_t] and pick the
/// y with the largest finite-difference slope |W(lambda+h) - W(lambda)|/h,
/// then refine locally. The scan runs at relaxed integrator tolerance;
/// the slope contrast between good and bad depths is exponentially large,
/// so the relaxed evaluation selects the same winner.
inline std::complex<double> match_point(const ProblemSpec& spec,
                                        std::complex<double> lambda,
                                        const ShootingConfig& cfg) {
    const double rt =
        std::max(std::pow(std::abs(lambda), 1.0 / spec.m), 1.0);
    const double R = choose_radius(spec, lambda, cfg);
    ShootingConfig fast = cfg;
    fast.rtol = std::max(cfg.rtol, 1e-7);
    fast.atol = std::max(cfg.atol, 1e-9);
    const double h = 1e-3 * std::max(1.0, std::abs(lambda));
    auto slope = [&](double y) {
        const std::complex<double> zm(0.0, -y);
        const auto w0 = wronskian(spec, lambda, fast, zm, R);
        const auto w1 = wronskian(spec, lambda + h, fast, zm, R);
        return std::abs(w1 - w0) / h;
    };
    double best_y = 0.0;
    double best_s = -1.0;
    double step = 0.05 * rt;
    for (int i = 0; i <= 19; ++i) {
        const double y = i * step;
        const double s = slope(y);
        if (s > best_s) {
            best_s = s;
            best_y = y;
        }
    }
    for (int round = 0; round < 3; ++round) {
        step *= 0.5;
        for (double y : {best_y - step, best_y + step}) {
            if (y < 0.0)
                continue;
            const double s = slope(y);
            if (s > best_s) {
                best_s = s;
                best_y = y;
            }
        }
    }
    return {0.0, -best_y};
}

/// Secant iteration on the normalized Wronskian, with a Muller step as
/// fallback when the secant update degenerates.
inline EigenvalueRecord find_eigenvalue(const ProblemSpec& spec,
                                        std::complex<double> lambda_guess,
                                        const ShootingConfig& cfg) {
    cfg.validate();
    // Freeze the contour geometry at the seed so that the numerical W is a
    // smooth function of lambda across the iteration.
    const std::complex<double> zm = match_point(spec, lambda_guess, cfg);
    const double R = choose_radius(spec, lambda_guess * 1.05, cfg);
    auto eval = [&](std::complex<double> l) {
        return wronskian(spec, l, cfg, zm, R);
    };
    std::complex<double> l0 = lambda_guess;
    std::complex<double> l1 =
        lambda_guess * (1.0 + 1e-4) + std::complex<double>(1e-6, 0.0);
    std::complex<double> w0 = eval(l0);
    std::complex<double> w1 = eval(l1);
    std::vector<std::complex<double>> trace{l0, l1};
    for (int it = 0; it < cfg.max_iter; ++it) {
        const std::complex<double> denom = w1 - w0;
        std::complex<double> l2;
        if (std::abs(denom) < 1e-300) {
            // Muller fallback: parabola through the last three iterates.
            if (trace.size() < 3)
                throw std::runtime_error("find_eigenvalue: degenerate secant");
            const auto lm = trace[trace.size() - 3];
            const auto wm = eval(lm);
            const auto q = (l1 - l0) / (l0 - lm);
            const auto A = q * w1 - q * (1.0 + q) * w0 + q * q * wm;
            const auto B = (2.0 * q + 1.0) * w1 - (1.0 + q) * (1.0 + q) * w0 +
                           q * q * wm;
            const auto C = (1.0 + q) * w1;
            auto disc = std::sqrt(B * B - 4.0 * A * C);
            auto den1 = B + disc, den2 = B - disc;
            auto den = std::abs(den1) > std::abs(den2) ? den1 : den2;
            l2 = l1 - (l1 - l0) * (2.0 * C / den);
        } else {
            l2 = l1 - w1 * (l1 - l0) / denom;
        }
        const double upd = std::abs(l2 - l1);
        l0 = l1;
        w0 = w1;
        l1 = l2;
        w1 = eval(l1);
        trace.push_back(l1);
        if (upd <= cfg.newton_tol * std::max(1.0, std::abs(l1))) {
            EigenvalueRecord rec;
            rec.lambda = l1;
            rec.wronskian_residual = w1;
            rec.iterations = it + 1;
            rec.method = Method::shooting;
            return rec;
        }
    }
    std::string msg = "find_eigenvalue: no convergence; iterates:";
    for (const auto& l : trace)
        msg += " (" + std::to_string(l.real()) + "," +
               std::to_string(l.imag()) + ")";
    throw std::runtime_error(msg);
}

struct ScanFailure {
    int n = 0;
    std::string message;
};

struct ScanResult {
    std::vector<EigenvalueRecord> records;
    std::vector<ScanFailure> failures;
};

namespace detail {

/// Continuation fallback for seeds outside the convergence basin: walk the
/// coefficient vector in from a = 0, reseeding at each stage.
inline EigenvalueRecord find_by_continuation(const ProblemSpec& spec,
                                             int n,
                                             const ShootingConfig& cfg) {
    std::complex<double> seed =
        asym_eigenvalue(make_model(ProblemSpec::unperturbed(spec.m, spec.ell)),
                        n);
    EigenvalueRecord rec;
    for (double t : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        auto at = spec.a;
        for (auto& c : at)
            c *= t;
        ProblemSpec stage(spec.m, spec.ell, at);
        rec = find_eigenvalue(stage, seed, cfg);
        seed = rec.lambda;
    }
    rec.n = n;
    return rec;
}

} // namespace detail

/// Locate eigenvalues for indices n_min..n_max, seeding at the asymptotic
/// expansion, deduplicating, and sorting by magnitude.
inline ScanResult scan_spectrum(const ProblemSpec& spec, int n_min, int n_max,
                                const ShootingConfig& cfg, int jobs = 1) {
    if (n_min < 0 || n_max < n_min)
        throw std::invalid_argument("scan_spectrum: need n_max >= n_min >= 0");
    const AsymptoticModel mdl = make_model(spec);
    const int count = n_max - n_min + 1;
    std::vector<std::optional<EigenvalueRecord>> found(count);
    std::vector<ScanFailure> failures;
    std::mutex fail_mutex;
    auto solve_one = [&](int idx) {
        const int n = n_min + idx;
        try {
            auto rec = find_eigenvalue(spec, asym_eigenvalue(mdl, n), cfg);
            rec.n = n;
            found[idx] = rec;
        } catch (const std::exception& first_err) {
            try {
                found[idx] = detail::find_by_continuation(spec, n, cfg);
            } catch (const std::exception&) {
                std::lock_guard<std::mutex> lock(fail_mutex);
                failures.push_back({n, first_err.what()});
            }
        }
    };
    if (jobs <= 1) {
        for (int i = 0; i < count; ++i)
            solve_one(i);
    } else {
        std::vector<std::future<void>> futs;
        std::atomic<int> next{0};
        for (int t = 0; t < jobs; ++t)
            futs.push_back(std::async(std::launch::async, [&]() {
                for (int i = next.fetch_add(1); i < count;
                     i = next.fetch_add(1))
                    solve_one(i);
            }));
        for (auto& fu : futs)
            fu.get();
    }
    ScanResult out;
    out.failures = std::move(failures);
    for (auto& r : found)
        if (r)
            out.records.push_back(*r);
    std::sort(out.records.begin(), out.records.end(),
              [](const EigenvalueRecord& x, const EigenvalueRecord& y) {
                  return std::abs(x.lambda) < std::abs(y.lambda);
              });
    // Merge duplicate roots (relative distance below 1e-6).
    std::vector<EigenvalueRecord> dedup;
    for (const auto& r : out.records) {
        bool dup = false;
        for (const auto& kept : dedup)
            if (std::abs(r.lambda - kept.lambda) <=
                1e-6 * std::max(1.0, std::abs(kept.lambda))) {
                dup = true;
                break;
            }
        if (!dup)
            dedup.push_back(r);
    }
    out.records = std::move(dedup);
    return out;
}

} // namespace polyosc
