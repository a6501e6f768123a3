#pragma once

#include "fittedrk/integrator.hpp"

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fittedrk {

/// Woods-Saxon potential with u0 = -50, a = 0.6, x0 = 7, u1 = -u0 / a.
double woods_saxon(double x);

namespace woods_saxon_constants {
inline constexpr double u0 = -50.0;
inline constexpr double a = 0.6;
inline constexpr double x0 = 7.0;
inline constexpr double u1 = -u0 / a;
}  // namespace woods_saxon_constants

enum class ReferenceKind { closed_form, endpoint, phase_shift };

/// Matching data for the scattering phase shift (l = 0 only).
struct PhaseShiftObservable {
    double k = 0.0;  ///< wavenumber sqrt(E)
    int l = 0;
    double x_lo = 0.0;
    double x_hi = 0.0;
    double delta = 0.0;
};

struct BenchmarkProblem {
    std::string name;
    OdeSystem system;
    double t0 = 0.0;
    double t1 = 0.0;
    std::vector<double> y0;
    ReferenceKind reference = ReferenceKind::closed_form;
    /// Closed-form y(t) (first component), for closed_form problems.
    std::function<double(double)> exact;
    /// Closed-form y'(t), when known.
    std::function<double(double)> exact_derivative;
    /// Reference y(t1), for endpoint problems.
    double endpoint_value = 0.0;
    /// Energy of the radial Schroedinger problems.
    std::optional<double> energy;
    /// Frequency the benchmark fits to (documentation; the schedule lives in system.frequency).
    double frequency_doc = 0.0;
};

/// y'' = (V(x) - E) y on [0, 15], y(0) = 0, y'(0) = 1, with
/// omega = sqrt(E + inner_offset) on [0, 6.5] and sqrt(E) on (6.5, 15].
///
/// The default offset gives the schedule sqrt(E - 50) used for the
/// benchmark figures. Inside the well V is close to -50, so the local
/// wavenumber there is sqrt(E + 50); pass +50 to fit to that instead.
/// Throws DomainError unless E > 0 and E + inner_offset > 0.
BenchmarkProblem schrodinger_problem(double energy, double inner_offset = -50.0);

/// y'' = -100 y + 99 sin t, y(0) = 1, y'(0) = 11 on [0, 1000 pi].
BenchmarkProblem inhomogeneous_problem();

/// y'' = -y - y^3 + 0.002 cos(1.01 t), y(0) = 0.200426728067, y'(0) = 0 on [0, 1000 pi].
BenchmarkProblem duffing_problem();

/// y'' = -100 y + sin y, y(0) = 0, y'(0) = 1 on [0, 20 pi].
BenchmarkProblem nonlinear_problem();

inline constexpr double kResonanceEnergyHigh = 989.701916;
inline constexpr double kResonanceEnergyLow = 341.495874;

/// Registry names: resonance-989, resonance-341, inhomogeneous, duffing, nonlinear.
std::vector<std::string> problem_names();
std::optional<BenchmarkProblem> make_problem(std::string_view name);

/// Phase shift from two trajectory samples via
///   tan(delta) = (y_i S_{i+1} - y_{i+1} S_i) / (y_{i+1} C_i - y_i C_{i+1})
/// with S(x) = sin(kx), C(x) = cos(kx), so that y ~ sin(kx + delta) gives
/// delta. The result lies in (-pi/2, pi/2]. Both abscissae must be grid
/// points of `traj`.
double phase_shift(const Trajectory& traj, const PhaseShiftObservable& spec);

/// Matching points for a Schroedinger trajectory: x_hi is the last grid
/// point, x_lo the grid point at or above 14 closest to x_hi - pi / (2k).
PhaseShiftObservable default_matching(const Trajectory& traj, double energy);

struct ErrorMeasurement {
    double error = 0.0;
    /// "max_abs", "endpoint_abs" or "phase_shift_abs".
    std::string kind;
};

/// closed_form: max_k |y_k - y(t_k)|; endpoint: |y(t1) - reference|;
/// phase_shift: distance from delta to pi/2 modulo pi.
ErrorMeasurement error_metric(const BenchmarkProblem& problem, const Trajectory& traj);

/// min(|delta - pi/2|, |delta + pi/2|) for delta in (-pi/2, pi/2].
double resonance_phase_error(double delta);

}  // namespace fittedrk
