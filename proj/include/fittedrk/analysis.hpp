#pragma once

#include "fittedrk/fitting.hpp"
#include "fittedrk/tableau.hpp"

#include <array>
#include <complex>
#include <cstddef>
#include <iosfwd>
#include <vector>

namespace fittedrk {

/// P(z) = K + iL for the test equation y' = q y, z = h q.
struct AmplificationFactor {
    std::complex<double> value;
    double re() const noexcept { return value.real(); }
    double im() const noexcept { return value.imag(); }
};

/// P(z) = det(I - zB) / det(I - zA) with B = (a_ij - b_j).
///
/// Determinants are expanded directly for s <= 3 and LU-factorized above
/// that; both are evaluated in long double. Throws SingularMatrix when
/// |det(I - zA)| < 1e-300.
AmplificationFactor amplification(const ButcherTableau& t, std::complex<double> z);

/// R(z) = det(I - zA + z e b^T) / det(I - zA). Algebraically identical to
/// amplification(); computed through its own matrix assembly.
std::complex<double> stability_function(const ButcherTableau& t, std::complex<double> z);

/// Phase-lag phi(v) = v - arg P(iv), reduced to (-pi, pi].
///
/// The reduction is modulo 2 pi: for a fixed 2-stage tableau the continuous
/// argument of P(iy) stays bounded as y grows, so an unwrapped phase-lag
/// would be dominated by the multiple of 2 pi and could never vanish for
/// v > 2 pi. phi is odd in v.
double phase_lag(const ButcherTableau& t, double v);

/// Dissipation alpha(v) = 1 - |P(iv)|. Even in v.
double dissipation(const ButcherTableau& t, double v);

/// Left-hand side minus right-hand side of the eight order conditions up
/// to order 4, in the order
///   sum b_i - 1,                 sum b_i c_i - 1/2,
///   sum b_i c_i^2 - 1/3,         sum b_i a_ij c_j - 1/6,
///   sum b_i c_i^3 - 1/4,         sum b_i c_i a_ij c_j - 1/8,
///   sum b_i a_ij c_j^2 - 1/12,   sum b_i a_ij a_jk c_k - 1/24.
std::array<double, 8> order_residuals(const ButcherTableau& t);

/// b_i a_ij + b_j a_ji - b_i b_j for all stage pairs i <= j: the diagonal
/// pairs (0,0), (1,1), ... first, then the off-diagonal pairs in row-major
/// order. For s = 2 this is (1,1), (2,2), (1,2) in one-based numbering.
std::vector<double> symplecticity_residuals(const ButcherTableau& t);

struct ResidualSet {
    std::array<double, 8> order;
    std::vector<double> symplectic;
};

ResidualSet residuals(const ButcherTableau& t);

// ---------------------------------------------------------------------------
// Stability regions

/// Rectangular window in the complex plane sampled on an inclusive grid.
struct ComplexWindow {
    double re_min = -5.0;
    double re_max = 5.0;
    double im_min = -5.0;
    double im_max = 5.0;
    std::size_t re_points = 800;
    std::size_t im_points = 800;

    double re_at(std::size_t i) const noexcept;
    double im_at(std::size_t j) const noexcept;
};

/// |R(z)| on a ComplexWindow grid, row-major with rows along Im.
/// Poles of R are stored as +infinity.
struct ModulusField {
    ComplexWindow window;
    std::vector<double> values;

    double at(std::size_t re_index, std::size_t im_index) const {
        return values[im_index * window.re_points + re_index];
    }
};

/// OpenMP-parallel sampling over rows; results are identical to the serial
/// reference because each grid value is computed independently.
ModulusField sample_modulus(const ButcherTableau& t, const ComplexWindow& window);
ModulusField sample_modulus_serial(const ButcherTableau& t, const ComplexWindow& window);

struct Polyline {
    std::vector<std::complex<double>> points;
    bool closed = false;
};

/// The |R| = 1 level set of a sampled field, extracted with marching
/// squares (linear interpolation on log|R|, saddles resolved by the cell
/// average). Segments are chained into polylines; a polyline is closed when
/// its chain returns to its starting edge.
std::vector<Polyline> unit_level_contours(const ModulusField& field);

std::vector<Polyline> stability_region_boundary(const ButcherTableau& t, const ComplexWindow& window);
std::vector<Polyline> stability_region_boundary(const FittedMethodSpec& spec, const ComplexWindow& window);

/// CSV with header `curve_id,re,im`, one row per polyline vertex. Closed
/// curves repeat their first vertex at the end.
void write_contours_csv(std::ostream& out, const std::vector<Polyline>& curves);

}  // namespace fittedrk
