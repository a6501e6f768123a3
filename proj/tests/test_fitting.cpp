#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fittedrk/analysis.hpp"
#include "fittedrk/errors.hpp"
#include "fittedrk/fitting.hpp"
#include "support.hpp"

#include <cmath>
#include <numbers>
#include <optional>

using namespace fittedrk;
using testsupport::logspace;

namespace {

using ld = long double;
const ld r3 = std::sqrt(3.0L);

ButcherTableau with_b2(double b2) { return gauss2().with_weight(1, b2); }

// Zero of phi(b2) at fixed v by a scan for a sign change followed by
// bisection. The scan ignores the jumps where phi wraps through +-pi.
std::optional<double> bisect_b2(double v) {
    auto phi = [v](double b) { return phase_lag(with_b2(b), v); };
    double lo = -3.0, flo = phi(lo);
    for (int k = 1; k <= 6000; ++k) {
        const double hi = -3.0 + 6.0 * k / 6000, fhi = phi(hi);
        if ((flo < 0) != (fhi < 0) && std::fabs(flo) < 1.0 && std::fabs(fhi) < 1.0) {
            double a = lo, b = hi, fa = flo;
            for (int it = 0; it < 200 && b - a > 1e-16 * std::fabs(a); ++it) {
                const double m = 0.5 * (a + b), fm = phi(m);
                if ((fm < 0) == (fa < 0))
                    a = m, fa = fm;
                else
                    b = m;
            }
            return 0.5 * (a + b);
        }
        lo = hi, flo = fhi;
    }
    return std::nullopt;
}

// Two-dimensional Newton on (phi, alpha) with a forward-difference Jacobian.
std::pair<double, double> newton_pld(double v, double b, double a) {
    auto F = [v](double bb, double aa, double f[2]) {
        const auto t = gauss2().with_weight(1, bb).with_entry(1, 1, aa);
        f[0] = phase_lag(t, v);
        f[1] = dissipation(t, v);
    };
    for (int it = 0; it < 60; ++it) {
        double f[2], fb[2], fa[2];
        F(b, a, f);
        if (std::hypot(f[0], f[1]) < 1e-16) break;
        const double hb = 1e-7, ha = 1e-7;
        F(b + hb, a, fb);
        F(b, a + ha, fa);
        const double j00 = (fb[0] - f[0]) / hb, j10 = (fb[1] - f[1]) / hb;
        const double j01 = (fa[0] - f[0]) / ha, j11 = (fa[1] - f[1]) / ha;
        const double det = j00 * j11 - j01 * j10;
        b -= (j11 * f[0] - j01 * f[1]) / det;
        a -= (-j10 * f[0] + j00 * f[1]) / det;
    }
    return {b, a};
}

// Zero phase-lag b2 in the tan closed form.
ld tan_form(ld v) {
    const ld t = std::tan(v), v2 = v * v, v3 = v2 * v, v4 = v2 * v2;
    const ld num = -6 * v3 + 6 * v3 * r3 + 72 * v - t * v4 + 24 * t * v2 + t * v4 * r3 - 12 * t * v2 * r3 - 144 * t;
    const ld den = t * r3 * v4 + 6 * v3 + 6 * v3 * r3 - 36 * v2 * t - 12 * v2 * t * r3 - 72 * v;
    return 0.5L * num / den;
}

// Both sign choices of the square root in the A/B closed form for the
// dissipation-free b2. The quotient as usually written is -b2, so the
// overall sign is flipped here.
std::pair<ld, ld> ab_form(ld v) {
    const ld s = std::sin(v), c = std::cos(v), v2 = v * v, v3 = v2 * v, v4 = v2 * v2;
    const ld x = -4 * v4 + 2 * v4 * r3 + 24 * v2 - 24 * v2 * r3 - 144;
    const ld base = -24 * s * v * r3 + 2 * s * v3 * r3 + 12 * v2 * c - 36 * s * v - 3 * s * v3 - 144 * c;
    const ld root = 12 * std::sqrt(-x);
    const ld B = v * (4 * v * r3 * c + s * v2 - 12 * s);
    return {-(base + root) / (6 * B), -(base - root) / (6 * B)};
}

// Closed forms obtained by solving the two linear conditions symbolically.
std::pair<ld, ld> rederived_pld(ld v) {
    const ld s = std::sin(v), c = std::cos(v), v2 = v * v, v3 = v2 * v;
    const ld bracket = r3 * v2 * s + 6 * v * c + 4 * r3 * v * c - 4 * r3 * v + 6 * v - 24 * s;
    const ld b2 = (-v3 * s + r3 / 2 * v3 * s - 7 * v2 * c + 2 * r3 * v2 * c - 2 * r3 * v2 + v2 + 24 * v * s + 48 * c - 48) /
                  (v * bracket);
    const ld a22 = (-r3 * v3 * s - 12 * r3 * v2 * c - 6 * v2 * c - 36 * r3 * v2 + 42 * v2 + 72 * v * s +
                    48 * r3 * v * s + 288 * c - 288) /
                   (12 * v * bracket);
    return {b2, a22};
}

bool near(double a, double b, double rel) { return std::fabs(a - b) <= rel * std::max(std::fabs(a), std::fabs(b)); }

}  // namespace

TEST_CASE("series constant terms") {
    CHECK(series_b2(0.0, MethodKind::G2_PL) == 0.5);
    CHECK(series_b2(0.0, MethodKind::G2_PL_D) == 0.5);
    CHECK(series_a22(0.0) == 0.25);
    CHECK(b2_phase_fitted(0.0).value == 0.5);
    CHECK(b2_phase_fitted(0.0).branch == EvalBranch::series);
    const auto z = b2_a22_fitted(0.0);
    CHECK(z.b2.value == 0.5);
    CHECK(z.a22.value == 0.25);
}

TEST_CASE("zero phase-lag b2 at v = 0.1 matches the Taylor series") {
    const ld v = 0.1L;
    const ld expected = 0.5L + std::pow(v, 4) / 720 + (1.0L / 6720 - r3 / 8640) * std::pow(v, 6);
    const auto b = b2_phase_fitted(0.1);
    CHECK(b.branch == EvalBranch::closed_form);
    CHECK(std::fabs(b.value - (double)expected) <= 1e-12);
}

TEST_CASE("dissipation-free coefficients at v = 0.1 match the Taylor series") {
    const ld v = 0.1L, v4 = std::pow(v, 4), v6 = std::pow(v, 6);
    const ld b2 = 0.5L + v4 / 720 + (5 * r3 - 8) / (r3 - 3) / 10080 * v6;
    const ld a22 = 0.25L + (5 * r3 - 9) / (r3 - 2) / 2160 * v4 - (220 * r3 - 381) / ((r3 - 2) * (r3 - 2)) / 181440 * v6;
    const auto c = b2_a22_fitted(0.1);
    CHECK(std::fabs(c.b2.value - (double)b2) <= 1e-10);
    CHECK(std::fabs(c.a22.value - (double)a22) <= 1e-10);
}

TEST_CASE("frozen reference values") {
    // High-precision evaluations of the symbolic solution.
    CHECK(b2_phase_fitted(0.1).value == doctest::Approx(0.500000138837).epsilon(1e-11));
    CHECK(b2_phase_fitted(1.0).value == doctest::Approx(0.501342995115).epsilon(1e-11));
    CHECK(b2_phase_fitted(2.0).value == doctest::Approx(0.520332420702).epsilon(1e-11));
    CHECK(b2_phase_fitted(10.0).value == doctest::Approx(0.214761148041).epsilon(1e-10));
    CHECK(b2_phase_fitted(50.0).value == doctest::Approx(0.40351517945).epsilon(1e-10));
    const auto c1 = b2_a22_fitted(1.0), c2 = b2_a22_fitted(2.0), c50 = b2_a22_fitted(50.0);
    CHECK(c1.b2.value == doctest::Approx(0.501342799876).epsilon(1e-11));
    CHECK(c1.a22.value == doctest::Approx(0.25058376489).epsilon(1e-10));
    CHECK(c2.b2.value == doctest::Approx(0.520151866916).epsilon(1e-11));
    CHECK(c2.a22.value == doctest::Approx(0.259338870405).epsilon(1e-11));
    CHECK(c50.b2.value == doctest::Approx(0.38420098205).epsilon(1e-10));
    CHECK(c50.a22.value == doctest::Approx(0.183238075139).epsilon(1e-10));
}

TEST_CASE("zero phase-lag b2 agrees with bisection on phi") {
    int compared = 0;
    for (const double v : logspace(0.02, 30.0, 80)) {
        if (phase_condition_sign(v) < 0) continue;  // phi has no zero in b2 there
        double closed = 0;
        try {
            closed = b2_phase_fitted(v).value;
        } catch (const SingularParameter&) {
            continue;
        }
        const auto root = bisect_b2(v);
        if (std::fabs(closed) > 3.0) continue;  // outside the scan window
        REQUIRE(root.has_value());
        CHECK_MESSAGE(near(*root, closed, 1e-9), "v = " << v);
        ++compared;
    }
    CHECK(compared > 40);
    const auto at2 = bisect_b2(2.0);
    REQUIRE(at2);
    CHECK(near(*at2, b2_phase_fitted(2.0).value, 1e-9));
}

TEST_CASE("zero phase-lag b2 agrees with the tan closed form") {
    int compared = 0;
    for (const double v : logspace(0.05, 40.0, 200)) {
        const ld reference = tan_form(v);
        try {
            const double lib = b2_phase_fitted(v).value;
            if (std::fabs(std::cos(v)) < 1e-3 || std::fabs(lib) > 1e6) continue;
            CHECK_MESSAGE(near(lib, (double)reference, 1e-9), "v = " << v);
            ++compared;
        } catch (const SingularParameter&) {
        }
    }
    CHECK(compared > 180);
}

TEST_CASE("dissipation-free b2 agrees with one branch of the A/B closed form") {
    int compared = 0;
    for (const double v : logspace(0.05, 40.0, 200)) {
        try {
            const double lib = b2_a22_fitted(v).b2.value;
            const auto [p, m] = ab_form(v);
            CHECK_MESSAGE((near(lib, (double)p, 1e-8) || near(lib, (double)m, 1e-8)), "v = " << v);
            ++compared;
        } catch (const SingularParameter&) {
        }
    }
    CHECK(compared > 180);
}

TEST_CASE("dissipation-free coefficients agree with the symbolic solution") {
    for (const double v : logspace(0.05, 50.0, 300)) {
        try {
            const auto lib = b2_a22_fitted(v);
            const auto [b2, a22] = rederived_pld(v);
            CHECK_MESSAGE(near(lib.b2.value, (double)b2, 1e-9), "v = " << v);
            CHECK_MESSAGE(near(lib.a22.value, (double)a22, 1e-9), "v = " << v);
        } catch (const SingularParameter&) {
        }
    }
}

TEST_CASE("dissipation-free coefficients at v = 1.5 agree with 2-D Newton") {
    const auto root = newton_pld(1.5, series_b2(1.5, MethodKind::G2_PL_D), series_a22(1.5));
    const auto lib = b2_a22_fitted(1.5);
    CHECK(near(root.first, lib.b2.value, 1e-9));
    CHECK(near(root.second, lib.a22.value, 1e-9));
}

TEST_CASE("fitted conditions hold where the phase condition can be met") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> logv(std::log(1e-3), std::log(20.0));
    int plus = 0, minus = 0;
    for (int k = 0; k < 400; ++k) {
        const double v = std::exp(logv(rng));
        try {
            const auto pl = fit_tableau({MethodKind::G2_PL, v});
            if (phase_condition_sign(v) > 0) {
                CHECK_MESSAGE(std::fabs(phase_lag(pl, v)) <= 1e-9, "v = " << v);
                ++plus;
            } else {
                // P(iv) = -|P| e^{iv}: the phase is matched modulo pi only.
                CHECK_MESSAGE(std::fabs(std::fabs(phase_lag(pl, v)) - std::numbers::pi) <= 1e-9, "v = " << v);
                ++minus;
            }
        } catch (const SingularParameter&) {
        }
        try {
            const auto pld = fit_tableau({MethodKind::G2_PL_D, v});
            CHECK_MESSAGE(std::fabs(phase_lag(pld, v)) <= 1e-9, "v = " << v);
            CHECK_MESSAGE(std::fabs(dissipation(pld, v)) <= 1e-9, "v = " << v);
        } catch (const SingularParameter&) {
        }
    }
    CHECK(plus > 300);
    CHECK(minus > 10);
}

TEST_CASE("phase condition sign on the first two pole intervals") {
    CHECK(phase_condition_sign(2.0) == 1);
    CHECK(phase_condition_sign(5.0) == -1);
    CHECK(phase_condition_sign(10.0) == 1);
    CHECK(phase_condition_sign(20.0) == -1);
}

TEST_CASE("coefficients are even in v") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(1e-3, 20.0);
    for (int k = 0; k < 200; ++k) {
        const double v = u(rng);
        try {
            CHECK(std::fabs(b2_phase_fitted(v).value - b2_phase_fitted(-v).value) <= 1e-12);
            const auto p = b2_a22_fitted(v), m = b2_a22_fitted(-v);
            CHECK(std::fabs(p.b2.value - m.b2.value) <= 1e-12);
            CHECK(std::fabs(p.a22.value - m.a22.value) <= 1e-12);
        } catch (const SingularParameter&) {
        }
    }
}

TEST_CASE("closed form minus truncated series is O(v^8)") {
    const auto xs = logspace(1e-2, 1e-1, 10);
    std::vector<double> d_pl, d_b, d_a, ratio;
    for (const double v : xs) {
        const ld v4 = std::pow((ld)v, 4), v6 = std::pow((ld)v, 6);
        d_pl.push_back(double(b2_phase_fitted(v).excess - (v4 / 720 + (1.0L / 6720 - r3 / 8640) * v6)));
        const auto c = b2_a22_fitted(v);
        d_b.push_back(double(c.b2.excess - (v4 / 720 + (5 * r3 - 8) / (r3 - 3) / 10080 * v6)));
        d_a.push_back(double(c.a22.excess - ((5 * r3 - 9) / (r3 - 2) / 2160 * v4 -
                                             (220 * r3 - 381) / ((r3 - 2) * (r3 - 2)) / 181440 * v6)));
        ratio.push_back(std::fabs(series_b2(0.2, MethodKind::G2_PL) - b2_phase_fitted(0.2).value) / std::pow(0.2, 8));
    }
    CHECK(testsupport::loglog_slope(xs, d_pl) >= 7.5);
    CHECK(testsupport::loglog_slope(xs, d_b) >= 7.5);
    CHECK(testsupport::loglog_slope(xs, d_a) >= 7.5);
    CHECK(ratio.front() < 1e-3);  // K for series_b2(0.2) - b2(0.2) = K v^8
}

TEST_CASE("series branch below the threshold joins the closed form") {
    const double below = std::nextafter(kSeriesThreshold, 0.0);
    const auto s = b2_phase_fitted(below), c = b2_phase_fitted(kSeriesThreshold);
    CHECK(s.branch == EvalBranch::series);
    CHECK(c.branch == EvalBranch::closed_form);
    CHECK(std::fabs((double)(s.excess - c.excess)) < 1e-20);
    const auto sd = b2_a22_fitted(below), cd = b2_a22_fitted(kSeriesThreshold);
    CHECK(std::fabs((double)(sd.b2.excess - cd.b2.excess)) < 1e-20);
    CHECK(std::fabs((double)(sd.a22.excess - cd.a22.excess)) < 1e-20);
}

TEST_CASE("classical limit and classical kind") {
    const auto t = fit_tableau({MethodKind::G2_PL, 1e-8});
    const auto g = gauss2();
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(std::fabs(t.b(i) - g.b(i)) <= 1e-15);
        for (std::size_t j = 0; j < 2; ++j) CHECK(std::fabs(t.a(i, j) - g.a(i, j)) <= 1e-15);
    }
    CHECK(fit_tableau({MethodKind::G2_CLASSICAL, 17.3}) == gauss2());
}

TEST_CASE("fitted tableaus replace only the designated coefficients") {
    const auto g = gauss2();
    const auto pl = fit_tableau({MethodKind::G2_PL, 1.3});
    CHECK(pl.b(0) == 0.5);
    CHECK(pl.matrix() == g.matrix());
    CHECK(pl.nodes() == g.nodes());
    const auto pld = fit_tableau({MethodKind::G2_PL_D, 1.3});
    CHECK(pld.b(0) == 0.5);
    CHECK(pld.a(0, 0) == g.a(0, 0));
    CHECK(pld.a(0, 1) == g.a(0, 1));
    CHECK(pld.a(1, 0) == g.a(1, 0));
    CHECK(pld.a(1, 1) != g.a(1, 1));
}

TEST_CASE("defining conditions at v = 5 for the dissipation-free method") {
    const auto t = fit_tableau({MethodKind::G2_PL_D, 5.0});
    CHECK(std::fabs(phase_lag(t, 5.0)) <= 1e-10);
    CHECK(std::fabs(dissipation(t, 5.0)) <= 1e-10);
    const auto t7 = fit_tableau({MethodKind::G2_PL_D, 7.0});
    CHECK(std::fabs(dissipation(t7, 7.0)) <= 1e-10);
}

TEST_CASE("poles raise SingularParameter") {
    // b2 changes sign through infinity at the first pole near 4.27; bisect
    // on that sign until the guard band is hit.
    auto locate = [](auto coefficient, double lo, double hi) -> std::optional<double> {
        const bool sign_lo = coefficient(lo) > 0;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            try {
                (coefficient(mid) > 0) == sign_lo ? lo = mid : hi = mid;
            } catch (const SingularParameter& e) {
                CHECK(std::fabs(e.v() - mid) < 1e-12);
                return mid;
            }
        }
        return std::nullopt;
    };
    const auto pl = locate([](double v) { return b2_phase_fitted(v).value; }, 4.2, 4.35);
    REQUIRE(pl);
    CHECK(*pl == doctest::Approx(4.2696).epsilon(1e-4));
    const auto pld = locate([](double v) { return b2_a22_fitted(v).b2.value; }, 5.0, 5.2);
    REQUIRE(pld);
    CHECK(*pld == doctest::Approx(5.0879).epsilon(1e-4));
}

TEST_CASE("non-finite v is rejected") {
    CHECK_THROWS_AS(b2_phase_fitted(std::nan("")), InvalidArgument);
    CHECK_THROWS_AS(b2_a22_fitted(INFINITY), InvalidArgument);
}

TEST_CASE("method kind names") {
    CHECK(to_string(MethodKind::G2_PL) == "G2-PL");
    CHECK(to_string(MethodKind::G2_PL_D) == "G2-PL-D");
    CHECK(to_string(MethodKind::G2_CLASSICAL) == "G2");
    CHECK(parse_method_kind("G2-PL-D") == MethodKind::G2_PL_D);
    CHECK_FALSE(parse_method_kind("RadauI").has_value());
}
