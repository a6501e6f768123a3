#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fittedrk/errors.hpp"
#include "fittedrk/tableau.hpp"
#include "support.hpp"

#include <cmath>
#include <numeric>

using namespace fittedrk;

namespace {

// The eight order sums, computed here rather than through the analysis module.
std::array<long double, 8> order_sums(const ButcherTableau& t) {
    const std::size_t s = t.stages();
    std::array<long double, 8> r{};
    std::vector<long double> ac(s, 0), ac2(s, 0), aac(s, 0);
    for (std::size_t i = 0; i < s; ++i)
        for (std::size_t j = 0; j < s; ++j) {
            ac[i] += (long double)t.a(i, j) * t.c(j);
            ac2[i] += (long double)t.a(i, j) * t.c(j) * t.c(j);
        }
    for (std::size_t i = 0; i < s; ++i)
        for (std::size_t j = 0; j < s; ++j) aac[i] += (long double)t.a(i, j) * ac[j];
    for (std::size_t i = 0; i < s; ++i) {
        const long double b = t.b(i), c = t.c(i);
        r[0] += b, r[1] += b * c, r[2] += b * c * c, r[3] += b * ac[i];
        r[4] += b * c * c * c, r[5] += b * c * ac[i], r[6] += b * ac2[i], r[7] += b * aac[i];
    }
    const long double target[8] = {1, 0.5L, 1 / 3.0L, 1 / 6.0L, 0.25L, 0.125L, 1 / 12.0L, 1 / 24.0L};
    for (int k = 0; k < 8; ++k) r[k] -= target[k];
    return r;
}

}  // namespace

TEST_CASE("gauss2 coefficients") {
    const auto g = gauss2();
    const long double r3 = std::sqrt(3.0L);
    CHECK(g.stages() == 2);
    CHECK(g.c(0) == doctest::Approx(0.2113248654051871).epsilon(1e-15));
    CHECK(g.c(0) == static_cast<double>(0.5L - r3 / 6));
    CHECK(g.c(1) == static_cast<double>(0.5L + r3 / 6));
    CHECK(g.a(0, 0) == 0.25);
    CHECK(g.a(0, 1) == static_cast<double>(0.25L - r3 / 6));
    CHECK(g.a(1, 0) == static_cast<double>(0.25L + r3 / 6));
    CHECK(g.a(1, 1) == 0.25);
    CHECK(g.b(0) + g.b(1) == 1.0);
    CHECK(g.implicit());
    for (const auto r : order_sums(g)) CHECK(std::fabs((double)r) < 1e-15);
}

TEST_CASE("radau1 is order three exactly") {
    const auto r = radau1();
    CHECK(r.weights() == std::vector<double>{0.25, 0.75});
    CHECK(r.a(1, 0) + r.a(1, 1) == doctest::Approx(2.0 / 3).epsilon(1e-16));
    const auto sums = order_sums(r);
    for (int k = 0; k < 4; ++k) CHECK(std::fabs((double)sums[k]) < 1e-15);
    double worst4 = 0;
    for (int k = 4; k < 8; ++k) worst4 = std::max(worst4, std::fabs((double)sums[k]));
    CHECK(worst4 > 1e-3);
}

TEST_CASE("lobatto3c is order four") {
    const auto l = lobatto3c();
    CHECK(l.nodes() == std::vector<double>{0.0, 0.5, 1.0});
    CHECK(std::accumulate(l.weights().begin(), l.weights().end(), 0.0) == doctest::Approx(1.0).epsilon(1e-16));
    for (const auto r : order_sums(l)) CHECK(std::fabs((double)r) < 1e-15);
}

TEST_CASE("built-in tableaus satisfy row sums") {
    for (const auto& t : {gauss2(), radau1(), lobatto3c()}) CHECK(t.row_sum_defect() <= 1e-15);
}

TEST_CASE("implicit flag") {
    CHECK_FALSE(ButcherTableau({0.0, 1.0}, {0, 0, 1, 0}, {0.5, 0.5}).implicit());
    CHECK(ButcherTableau({0.0, 1.0}, {0, 0, 0.5, 0.5}, {0.5, 0.5}).implicit());
    CHECK(ButcherTableau({0.0, 1.0}, {0, 0.1, 1, 0}, {0.5, 0.5}).implicit());
}

TEST_CASE("constructor rejects inconsistent dimensions") {
    CHECK_THROWS_AS(ButcherTableau({}, {}, {}), DimensionMismatch);
    CHECK_THROWS_AS(ButcherTableau({0.0, 1.0}, {0, 0, 1, 0}, {0.2, 0.3, 0.5}), DimensionMismatch);
    CHECK_THROWS_AS(ButcherTableau({0.0, 1.0}, {0, 0, 1}, {0.5, 0.5}), DimensionMismatch);
}

TEST_CASE("with_weight and with_entry copy") {
    const auto g = gauss2();
    const auto h = g.with_weight(1, 0.7).with_entry(1, 1, 0.3);
    CHECK(h.b(1) == 0.7);
    CHECK(h.a(1, 1) == 0.3);
    CHECK(g.b(1) == 0.5);
    CHECK_THROWS_AS(g.with_entry(2, 0, 1.0), InvalidArgument);
}

TEST_CASE("serialized built-ins round-trip bitwise") {
    for (const auto& t : {gauss2(), radau1(), lobatto3c()}) {
        const auto loaded = load_tableau(serialize_tableau(t));
        CHECK(loaded.tableau == t);
        CHECK(loaded.warnings.empty());
    }
}

TEST_CASE("random tableaus round-trip bitwise") {
    std::mt19937_64 rng(20240611);
    for (int trial = 0; trial < 200; ++trial) {
        const auto t = testsupport::random_tableau(rng, 1 + trial % 5);
        CHECK(load_tableau(serialize_tableau(t)).tableau == t);
    }
}

TEST_CASE("rational tokens and comments") {
    const auto loaded = load_tableau(
        "# two-stage Radau IA\n"
        "2\n"
        "0    1/4 -1/4   # first row\n"
        "2/3  1/4 5/12\n"
        "\n"
        "1/4 3/4\n");
    CHECK(loaded.tableau == radau1());
    CHECK(loaded.warnings.empty());
}

TEST_CASE("weights summing to 0.9 give a warning, not an error") {
    const auto loaded = load_tableau("1\n0.5 0.5\n0.9\n");
    REQUIRE(loaded.warnings.size() == 1);
    CHECK(loaded.warnings[0].find("weights") != std::string::npos);
    CHECK(loaded.tableau.b(0) + 0.0 - 1.0 == doctest::Approx(-0.1));
}

TEST_CASE("row-sum violation is reported") {
    const auto loaded = load_tableau("1\n0.4 0.5\n1\n");
    REQUIRE(loaded.warnings.size() == 1);
    CHECK(loaded.warnings[0].find("row") != std::string::npos);
}

TEST_CASE("malformed input") {
    CHECK_THROWS_AS(load_tableau(""), ParseError);
    CHECK_THROWS_AS(load_tableau("two\n"), ParseError);
    CHECK_THROWS_AS(load_tableau("1\n0 x\n1\n"), ParseError);
    CHECK_THROWS_AS(load_tableau("1\n0 1/0\n1\n"), ParseError);
    CHECK_THROWS_AS(load_tableau("2\n0 1 0\n1 0.5 0.5\n0.25 0.25 0.5\n"), DimensionMismatch);
    CHECK_THROWS_AS(load_tableau("2\n0 1\n1 0.5 0.5\n0.5 0.5\n"), DimensionMismatch);
    try {
        load_tableau("1\n\n0 abc\n1\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }
}

TEST_CASE("missing file reports its path") {
    try {
        load_tableau_file("/nonexistent/dir/tab.txt");
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("/nonexistent/dir/tab.txt") != std::string::npos);
    }
}

TEST_CASE("shipped data files load") {
    const auto g = load_tableau_file(FITTEDRK_DATA_DIR "/gauss2.txt");
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(g.tableau.b(i) == gauss2().b(i));
        CHECK(g.tableau.c(i) == doctest::Approx(gauss2().c(i)).epsilon(1e-16));
        for (std::size_t j = 0; j < 2; ++j) CHECK(g.tableau.a(i, j) == doctest::Approx(gauss2().a(i, j)).epsilon(1e-16));
    }
    CHECK(load_tableau_file(FITTEDRK_DATA_DIR "/lobatto3c.txt").tableau == lobatto3c());
}
