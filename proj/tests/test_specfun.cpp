#include <catch2/catch_amalgamated.hpp>

#include <complex>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "polyosc/specfun.hpp"

using namespace polyosc;
using Catch::Approx;

TEST_CASE("gamma matches known real values", "[specfun]") {
    CHECK(gamma_fn(0.5) == Approx(std::sqrt(std::numbers::pi)).epsilon(1e-14));
    CHECK(gamma_fn(1.0) == Approx(1.0).epsilon(1e-14));
    CHECK(gamma_fn(5.0) == Approx(24.0).epsilon(1e-14));
    CHECK(gamma_fn(1.5) == Approx(0.5 * std::sqrt(std::numbers::pi)).epsilon(1e-14));
    // Gamma(1/3) from its decimal expansion
    CHECK(gamma_fn(1.0 / 3.0) == Approx(2.678938534707747633).epsilon(1e-13));
}

TEST_CASE("complex log_gamma satisfies the recursion", "[specfun]") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> re(0.2, 5.0), im(-4.0, 4.0);
    for (int trial = 0; trial < 50; ++trial) {
        const std::complex<double> z(re(rng), im(rng));
        const auto lhs = log_gamma(z + 1.0);
        const auto rhs = log_gamma(z) + std::log(z);
        CHECK(std::abs(lhs - rhs) < 1e-12 * std::max(1.0, std::abs(lhs)));
    }
}

TEST_CASE("log_gamma conjugate symmetry", "[specfun]") {
    const std::complex<double> z(1.7, 2.3);
    const auto a = log_gamma(z);
    const auto b = log_gamma(std::conj(z));
    CHECK(std::abs(a - std::conj(b)) < 1e-13 * std::abs(a));
}

TEST_CASE("log_gamma rejects the left half plane", "[specfun]") {
    CHECK_THROWS_AS(log_gamma(std::complex<double>(-1.0, 0.5)),
                    std::domain_error);
}

TEST_CASE("beta agrees with the Euler integral", "[specfun]") {
    const double cases[][2] = {{1.0, 1.0}, {0.5, 0.5},  {2.5, 3.5},
                               {0.3, 1.8}, {1.25, 0.4}, {4.0, 0.75}};
    for (const auto& c : cases) {
        const double closed = beta(c[0], c[1]);
        const double quad = oracles::beta_quadrature(c[0], c[1]);
        CHECK(std::abs(closed - quad) < 1e-12 * std::max(1.0, closed));
    }
}

TEST_CASE("generalized binomial coefficients", "[specfun]") {
    CHECK(gen_binomial(0.5, 0) == Approx(1.0));
    CHECK(gen_binomial(0.5, 1) == Approx(0.5));
    CHECK(gen_binomial(0.5, 2) == Approx(-0.125));
    CHECK(gen_binomial(0.5, 3) == Approx(1.0 / 16.0));
    CHECK(gen_binomial(5.0, 2) == Approx(10.0)); // integer case
    // Pascal identity C(x,k) = C(x-1,k) + C(x-1,k-1)
    const double x = 0.5 + 1.0 / 7.0;
    for (int k = 1; k <= 6; ++k)
        CHECK(gen_binomial(x, k) ==
              Approx(gen_binomial(x - 1.0, k) + gen_binomial(x - 1.0, k - 1))
                  .epsilon(1e-13));
}

TEST_CASE("odd harmonic numbers", "[specfun]") {
    CHECK(odd_harmonic(1) == Approx(0.0));
    CHECK(odd_harmonic(2) == Approx(1.0));
    CHECK(odd_harmonic(4) == Approx(1.0 + 1.0 / 3.0 + 1.0 / 5.0));
}
