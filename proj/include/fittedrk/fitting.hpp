#pragma once

#include "fittedrk/tableau.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace fittedrk {

/// The three members of the two-stage Gauss family.
enum class MethodKind {
    G2_PL,         ///< b2 fitted so that the phase-lag vanishes at v
    G2_PL_D,       ///< b2 and a22 fitted so that phase-lag and dissipation vanish at v
    G2_CLASSICAL,  ///< unmodified Gauss coefficients
};

std::string_view to_string(MethodKind kind) noexcept;
std::optional<MethodKind> parse_method_kind(std::string_view name) noexcept;

struct FittedMethodSpec {
    MethodKind kind = MethodKind::G2_CLASSICAL;
    /// Fitting parameter v = omega * h.
    double v = 0.0;
};

enum class EvalBranch { closed_form, series };

/// A fitted coefficient together with its offset from the classical Gauss
/// value. `excess` is carried in extended precision; it is O(v^4) and would
/// otherwise be lost to rounding of `value` at small v.
struct CoefficientValue {
    double value;
    long double excess;
    EvalBranch branch;
};

struct DissipationFreeCoefficients {
    CoefficientValue b2;
    CoefficientValue a22;
};

/// Below this |v| the truncated Taylor series is used instead of the closed form.
inline constexpr double kSeriesThreshold = 1e-2;

/// Relative size of the linear-system determinant under which v is treated
/// as a pole of the closed form.
inline constexpr double kGuardBand = 1e-8;

/// b2 for the zero phase-lag method.
///
/// Solves Im(P(iv) e^{-iv}) = 0 for b2, all other Gauss coefficients fixed.
/// The condition is linear in b2, so the root is unique. On alternate
/// intervals between consecutive poles (the first one is roughly
/// 4.27 < v < 8.31) that root gives P(iv) = -|P| e^{iv}, i.e. the phase is
/// matched only modulo pi; the coefficient is still returned, because it is
/// the only b2 that satisfies the condition at all. Use
/// `phase_condition_sign` to detect that case.
///
/// Throws SingularParameter within the guard band of a pole.
CoefficientValue b2_phase_fitted(double v);

/// b2 and a22 for the zero phase-lag, zero dissipation method.
///
/// Both conditions together say P(iv) = e^{iv}. Numerator and denominator
/// of P are affine in (b2, a22) jointly, so this is a 2x2 real linear system
/// with a unique solution away from its poles. Throws SingularParameter in
/// the guard band of a pole.
DissipationFreeCoefficients b2_a22_fitted(double v);

/// +1 when the zero phase-lag b2 at v yields arg P(iv) = v (mod 2 pi),
/// -1 when it only yields arg P(iv) = v + pi.
int phase_condition_sign(double v);

/// Taylor polynomials through v^6.
double series_b2(double v, MethodKind kind);
double series_a22(double v);

/// Gauss tableau with the coefficients designated by `spec.kind` replaced by
/// their fitted values at spec.v. G2_CLASSICAL ignores v.
ButcherTableau fit_tableau(const FittedMethodSpec& spec);

}  // namespace fittedrk
