#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <complex>
#include <set>
#include <vector>

#include "oracles.hpp"
#include "polyosc/multiindex.hpp"

using namespace polyosc;
using Catch::Approx;

namespace {
std::set<std::vector<int>> as_set(const std::vector<MultiIndex>& v) {
    std::set<std::vector<int>> s;
    for (const auto& mi : v)
        s.insert(mi.alpha);
    return s;
}
} // namespace

TEST_CASE("enumeration matches odometer brute force", "[multiindex]") {
    for (int dim : {1, 2, 3, 5, 7})
        for (int degree = 0; degree <= 8; ++degree)
            for (int weight = 0; weight <= degree; ++weight) {
                const auto fast = multi_indices(dim, degree, weight);
                const auto slow =
                    oracles::brute_force_multi_indices(dim, degree, weight);
                INFO("dim=" << dim << " degree=" << degree
                            << " weight=" << weight);
                CHECK(as_set(fast) == as_set(slow));
                CHECK(fast.size() == slow.size());
            }
}

TEST_CASE("enumerated indices have the requested invariants", "[multiindex]") {
    for (const auto& mi : multi_indices(4, 6, 3)) {
        CHECK(mi.weight() == 3);
        CHECK(mi.degree() == 6);
    }
}

TEST_CASE("multinomial theorem closes the sum", "[multiindex]") {
    // sum over all degrees of sum_{|alpha|=k} (k!/alpha!) x^alpha = (sum x)^k
    const std::vector<std::complex<double>> x{{1.0, 0.5}, {-2.0, 1.0}, {0.3, 0.0}};
    const int dim = 3;
    for (int k = 1; k <= 4; ++k) {
        std::complex<double> total = 0.0;
        for (int degree = k; degree <= k * dim; ++degree)
            for (const auto& mi : multi_indices(dim, degree, k))
                total += multinomial(mi) * monomial(x, mi);
        std::complex<double> expect = 1.0;
        for (int q = 0; q < k; ++q)
            expect *= x[0] + x[1] + x[2];
        CHECK(std::abs(total - expect) < 1e-12 * std::abs(expect));
    }
}

TEST_CASE("multinomial counts permutations", "[multiindex]") {
    CHECK(multinomial(MultiIndex{{3, 0, 0}}) == Approx(1.0));
    CHECK(multinomial(MultiIndex{{1, 1, 1}}) == Approx(6.0));
    CHECK(multinomial(MultiIndex{{2, 1, 0}}) == Approx(3.0));
}
