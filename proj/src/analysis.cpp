#include "fittedrk/analysis.hpp"

#include "fittedrk/errors.hpp"
#include "linalg_detail.hpp"

#include <cmath>
#include <numbers>

namespace fittedrk {

namespace {

using ld = long double;
using cld = std::complex<ld>;

constexpr double kSingularDeterminant = 1e-300;

// Returns {det(I - zB), det(I - zA)} with B = (a_ij - b_j).
template <typename T>
std::pair<std::complex<T>, std::complex<T>> amplification_parts(const ButcherTableau& t, std::complex<T> z) {
    const std::size_t s = t.stages();
    std::vector<std::complex<T>> num(s * s), den(s * s);
    for (std::size_t i = 0; i < s; ++i) {
        for (std::size_t j = 0; j < s; ++j) {
            const T delta = i == j ? T(1) : T(0);
            const T aij = static_cast<T>(t.a(i, j));
            den[i * s + j] = delta - z * aij;
            num[i * s + j] = delta - z * (aij - static_cast<T>(t.b(j)));
        }
    }
    return {detail::determinant(num, s), detail::determinant(den, s)};
}

// Returns {det(I - zA + z e b^T), det(I - zA)}.
template <typename T>
std::pair<std::complex<T>, std::complex<T>> stability_parts(const ButcherTableau& t, std::complex<T> z) {
    const std::size_t s = t.stages();
    std::vector<std::complex<T>> m(s * s);
    for (std::size_t i = 0; i < s; ++i)
        for (std::size_t j = 0; j < s; ++j) m[i * s + j] = (i == j ? T(1) : T(0)) - z * static_cast<T>(t.a(i, j));
    const auto den = detail::determinant(m, s);
    for (std::size_t i = 0; i < s; ++i)
        for (std::size_t j = 0; j < s; ++j) m[i * s + j] += z * static_cast<T>(t.b(j));
    return {detail::determinant(m, s), den};
}

template <typename T>
void require_nonsingular(const std::complex<T>& den) {
    if (!(std::abs(den) >= static_cast<T>(kSingularDeterminant)))
        throw SingularMatrix("det(I - zA) vanishes at the requested z");
}

}  // namespace

AmplificationFactor amplification(const ButcherTableau& t, std::complex<double> z) {
    const auto [num, den] = amplification_parts<ld>(t, cld(z.real(), z.imag()));
    require_nonsingular(den);
    const cld p = num / den;
    return {std::complex<double>(static_cast<double>(p.real()), static_cast<double>(p.imag()))};
}

std::complex<double> stability_function(const ButcherTableau& t, std::complex<double> z) {
    const auto [num, den] = stability_parts<ld>(t, cld(z.real(), z.imag()));
    require_nonsingular(den);
    const cld r = num / den;
    return {static_cast<double>(r.real()), static_cast<double>(r.imag())};
}

double phase_lag(const ButcherTableau& t, double v) {
    const auto [num, den] = amplification_parts<ld>(t, cld(0.0L, v));
    require_nonsingular(den);
    // P e^{-iv} = N conj(D) e^{-iv} / |D|^2, so phi = -arg(N conj(D) e^{-iv}).
    const cld q = num * std::conj(den) * cld(std::cos(static_cast<ld>(v)), -std::sin(static_cast<ld>(v)));
    ld phi = -std::atan2(q.imag(), q.real());
    if (phi <= -std::numbers::pi_v<ld>) phi += 2 * std::numbers::pi_v<ld>;
    return static_cast<double>(phi);
}

double dissipation(const ButcherTableau& t, double v) {
    const auto [num, den] = amplification_parts<ld>(t, cld(0.0L, v));
    require_nonsingular(den);
    return static_cast<double>(1.0L - std::abs(num) / std::abs(den));
}

std::array<double, 8> order_residuals(const ButcherTableau& t) {
    const std::size_t s = t.stages();
    ld r[8] = {};
    for (std::size_t i = 0; i < s; ++i) {
        const ld bi = t.b(i), ci = t.c(i);
        r[0] += bi;
        r[1] += bi * ci;
        r[2] += bi * ci * ci;
        r[4] += bi * ci * ci * ci;
        for (std::size_t j = 0; j < s; ++j) {
            const ld aij = t.a(i, j), cj = t.c(j);
            r[3] += bi * aij * cj;
            r[5] += bi * ci * aij * cj;
            r[6] += bi * aij * cj * cj;
            for (std::size_t k = 0; k < s; ++k) r[7] += bi * aij * static_cast<ld>(t.a(j, k)) * t.c(k);
        }
    }
    constexpr ld target[8] = {1.0L, 1.0L / 2, 1.0L / 3, 1.0L / 6, 1.0L / 4, 1.0L / 8, 1.0L / 12, 1.0L / 24};
    std::array<double, 8> out{};
    for (int k = 0; k < 8; ++k) out[k] = static_cast<double>(r[k] - target[k]);
    return out;
}

std::vector<double> symplecticity_residuals(const ButcherTableau& t) {
    const std::size_t s = t.stages();
    auto pair = [&](std::size_t i, std::size_t j) {
        const ld bi = t.b(i), bj = t.b(j);
        return static_cast<double>(bi * static_cast<ld>(t.a(i, j)) + bj * static_cast<ld>(t.a(j, i)) - bi * bj);
    };
    std::vector<double> out;
    out.reserve(s * (s + 1) / 2);
    for (std::size_t i = 0; i < s; ++i) out.push_back(pair(i, i));
    for (std::size_t i = 0; i < s; ++i)
        for (std::size_t j = i + 1; j < s; ++j) out.push_back(pair(i, j));
    return out;
}

ResidualSet residuals(const ButcherTableau& t) { return {order_residuals(t), symplecticity_residuals(t)}; }

// ---------------------------------------------------------------------------

double ComplexWindow::re_at(std::size_t i) const noexcept {
    if (re_points < 2) return re_min;
    return re_min + (re_max - re_min) * static_cast<double>(i) / static_cast<double>(re_points - 1);
}

double ComplexWindow::im_at(std::size_t j) const noexcept {
    if (im_points < 2) return im_min;
    return im_min + (im_max - im_min) * static_cast<double>(j) / static_cast<double>(im_points - 1);
}

namespace {

void check_window(const ComplexWindow& w) {
    if (w.re_points == 0 || w.im_points == 0) throw InvalidArgument("stability window grid is empty");
    if (!(w.re_max >= w.re_min) || !(w.im_max >= w.im_min)) throw InvalidArgument("stability window is inverted");
}

double modulus_at(const ButcherTableau& t, std::complex<double> z) {
    const auto [num, den] = stability_parts<double>(t, z);
    if (std::abs(den) < kSingularDeterminant) return std::numeric_limits<double>::infinity();
    return std::abs(num / den);
}

void sample_row(const ButcherTableau& t, const ComplexWindow& w, std::size_t j, double* row) {
    const double im = w.im_at(j);
    for (std::size_t i = 0; i < w.re_points; ++i) row[i] = modulus_at(t, {w.re_at(i), im});
}

}  // namespace

ModulusField sample_modulus_serial(const ButcherTableau& t, const ComplexWindow& window) {
    check_window(window);
    ModulusField field{window, std::vector<double>(window.re_points * window.im_points)};
    for (std::size_t j = 0; j < window.im_points; ++j)
        sample_row(t, window, j, field.values.data() + j * window.re_points);
    return field;
}

ModulusField sample_modulus(const ButcherTableau& t, const ComplexWindow& window) {
    check_window(window);
    ModulusField field{window, std::vector<double>(window.re_points * window.im_points)};
    const auto rows = static_cast<std::ptrdiff_t>(window.im_points);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t j = 0; j < rows; ++j)
        sample_row(t, window, static_cast<std::size_t>(j),
                   field.values.data() + static_cast<std::size_t>(j) * window.re_points);
    return field;
}

std::vector<Polyline> stability_region_boundary(const ButcherTableau& t, const ComplexWindow& window) {
    return unit_level_contours(sample_modulus(t, window));
}

std::vector<Polyline> stability_region_boundary(const FittedMethodSpec& spec, const ComplexWindow& window) {
    return stability_region_boundary(fit_tableau(spec), window);
}

}  // namespace fittedrk
