#include "fittedrk/fitting.hpp"

#include "fittedrk/errors.hpp"

#include <cfloat>
#include <cmath>
#include <complex>

namespace fittedrk {

static_assert(LDBL_MANT_DIG > DBL_MANT_DIG,
              "closed-form coefficients are evaluated in long double and rounded once; "
              "this needs long double to be wider than double");

std::string_view to_string(MethodKind kind) noexcept {
    switch (kind) {
        case MethodKind::G2_PL: return "G2-PL";
        case MethodKind::G2_PL_D: return "G2-PL-D";
        case MethodKind::G2_CLASSICAL: return "G2";
    }
    return "?";
}

std::optional<MethodKind> parse_method_kind(std::string_view name) noexcept {
    if (name == "G2-PL") return MethodKind::G2_PL;
    if (name == "G2-PL-D") return MethodKind::G2_PL_D;
    if (name == "G2") return MethodKind::G2_CLASSICAL;
    return std::nullopt;
}

namespace {

using ld = long double;
using cld = std::complex<ld>;

const ld kSqrt3 = std::sqrt(3.0L);

void require_finite(double v) {
    if (!std::isfinite(v)) throw InvalidArgument("fitting parameter v must be finite");
}

ld series_b2_excess(ld v, MethodKind kind) {
    const ld v2 = v * v, v4 = v2 * v2, v6 = v4 * v2;
    switch (kind) {
        case MethodKind::G2_PL: return v4 / 720 + (1.0L / 6720 - kSqrt3 / 8640) * v6;
        case MethodKind::G2_PL_D: return v4 / 720 + (5 * kSqrt3 - 8) / (kSqrt3 - 3) / 10080 * v6;
        case MethodKind::G2_CLASSICAL: return 0.0L;
    }
    return 0.0L;
}

ld series_a22_excess(ld v) {
    const ld v2 = v * v, v4 = v2 * v2, v6 = v4 * v2;
    const ld d = kSqrt3 - 2;
    return (5 * kSqrt3 - 9) / d / 2160 * v4 - (220 * kSqrt3 - 381) / (d * d) / 181440 * v6;
}

// With b1 = 1/2 and a11, a12, a21 at their Gauss values, write
//   N(iv) = N_G(iv) + db * gy + da * dN/da22,   D(iv) = D_G(iv) + da * dD/da22
// where db = b2 - 1/2 and da = a22 - 1/4. Numerator and denominator have no
// db*da cross term, so every fitting condition below is linear in (db, da).
struct LinearizedConditions {
    cld w;   // e^{iv} D_G(iv)
    cld r;   // N_G(iv) - e^{iv} D_G(iv) = O(v^5)
    cld gy;  // dN/db2
    cld gx;  // dN/da22 - e^{iv} dD/da22
};

// N_G(z) - e^z D_G(z) = -sum_{k>=5} gamma_k z^k with
// gamma_k = (1 - k/2 + k(k-1)/12) / k!; the terms through z^4 cancel exactly.
cld gauss_mismatch_series(ld v) {
    cld power = 1.0L;
    ld factorial = 1.0L;
    const cld z(0.0L, v);
    for (int k = 1; k <= 4; ++k) {
        power *= z;
        factorial *= k;
    }
    cld sum = 0.0L;
    for (int k = 5; k < 80; ++k) {
        power *= z;
        factorial *= k;
        const ld gamma = (1.0L - k / 2.0L + k * (k - 1) / 12.0L) / factorial;
        const cld term = gamma * power;
        sum += term;
        if (std::abs(term) <= LDBL_EPSILON * std::abs(sum) * 1e-3L) break;
    }
    return -sum;
}

LinearizedConditions linearize(ld v) {
    const ld s = std::sin(v), c = std::cos(v), sh = std::sin(v / 2);
    const cld eiv(c, s);
    const cld em1(-2 * sh * sh, s);  // e^{iv} - 1 without cancellation
    const ld v2 = v * v;
    const cld dg(1 - v2 / 12, -v / 2);
    const cld ng(1 - v2 / 12, v / 2);
    LinearizedConditions out;
    out.w = eiv * dg;
    out.r = std::fabs(v) < 1 ? gauss_mismatch_series(v) : ng - out.w;
    out.gy = cld(-v2 * kSqrt3 / 6, v);
    out.gx = cld(0, v) * em1 + (v2 / 4) * (2.0L + em1);
    return out;
}

ld phase_fitted_excess(ld v, const LinearizedConditions& lc) {
    // Im((w + r + db gy) conj(w)) = 0
    const ld den = std::imag(lc.gy * std::conj(lc.w));
    if (std::fabs(den) < kGuardBand * std::abs(lc.gy) * std::abs(lc.w))
        throw SingularParameter("zero phase-lag b2 has a pole at v = " + std::to_string(static_cast<double>(v)),
                                static_cast<double>(v));
    return -std::imag(lc.r * std::conj(lc.w)) / den;
}

}  // namespace

double series_b2(double v, MethodKind kind) { return static_cast<double>(0.5L + series_b2_excess(v, kind)); }

double series_a22(double v) { return static_cast<double>(0.25L + series_a22_excess(v)); }

CoefficientValue b2_phase_fitted(double v) {
    require_finite(v);
    if (std::fabs(v) < kSeriesThreshold) {
        const ld e = series_b2_excess(v, MethodKind::G2_PL);
        return {static_cast<double>(0.5L + e), e, EvalBranch::series};
    }
    const auto lc = linearize(v);
    const ld e = phase_fitted_excess(v, lc);
    return {static_cast<double>(0.5L + e), e, EvalBranch::closed_form};
}

int phase_condition_sign(double v) {
    require_finite(v);
    if (std::fabs(v) < kSeriesThreshold) return 1;
    const auto lc = linearize(v);
    const ld e = phase_fitted_excess(v, lc);
    const cld n = lc.w + lc.r + e * lc.gy;
    return std::real(n * std::conj(lc.w)) >= 0 ? 1 : -1;
}

DissipationFreeCoefficients b2_a22_fitted(double v) {
    require_finite(v);
    if (std::fabs(v) < kSeriesThreshold) {
        const ld eb = series_b2_excess(v, MethodKind::G2_PL_D);
        const ld ea = series_a22_excess(v);
        return {{static_cast<double>(0.5L + eb), eb, EvalBranch::series},
                {static_cast<double>(0.25L + ea), ea, EvalBranch::series}};
    }
    // r + db gy + da gx = 0, split into real and imaginary parts.
    const auto lc = linearize(v);
    const ld det = std::real(lc.gy) * std::imag(lc.gx) - std::imag(lc.gy) * std::real(lc.gx);
    if (std::fabs(det) < kGuardBand * std::abs(lc.gy) * std::abs(lc.gx))
        throw SingularParameter("zero dissipation coefficients have a pole at v = " + std::to_string(v), v);
    const ld db = (-std::real(lc.r) * std::imag(lc.gx) + std::imag(lc.r) * std::real(lc.gx)) / det;
    const ld da = (-std::real(lc.gy) * std::imag(lc.r) + std::imag(lc.gy) * std::real(lc.r)) / det;
    if (!std::isfinite(db) || !std::isfinite(da))
        throw BranchFailure("no finite solution of the zero phase-lag, zero dissipation conditions at v = " +
                            std::to_string(v));
    return {{static_cast<double>(0.5L + db), db, EvalBranch::closed_form},
            {static_cast<double>(0.25L + da), da, EvalBranch::closed_form}};
}

ButcherTableau fit_tableau(const FittedMethodSpec& spec) {
    require_finite(spec.v);
    const auto base = gauss2();
    switch (spec.kind) {
        case MethodKind::G2_CLASSICAL: return base;
        case MethodKind::G2_PL: return base.with_weight(1, b2_phase_fitted(spec.v).value);
        case MethodKind::G2_PL_D: {
            const auto coeffs = b2_a22_fitted(spec.v);
            return base.with_weight(1, coeffs.b2.value).with_entry(1, 1, coeffs.a22.value);
        }
    }
    throw InvalidArgument("unknown method kind");
}

}  // namespace fittedrk
