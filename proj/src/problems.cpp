#include "fittedrk/problems.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace fittedrk {

using std::numbers::pi;

double woods_saxon(double x) {
    using namespace woods_saxon_constants;
    const double e = (x - x0) / a;
    if (e <= 0.0) {
        const double q = std::exp(e);
        const double d = 1.0 + q;
        return u0 / d + u1 * q / (d * d);
    }
    // q > 1: rewrite in p = 1/q so that large x cannot overflow.
    const double p = std::exp(-e);
    const double d = 1.0 + p;
    return u0 * p / d + u1 * p / (d * d);
}

namespace {

OdeSystem oscillator_system(std::function<double(double, double)> accel,
                            std::function<double(double, double)> daccel_dy, double omega) {
    OdeSystem sys;
    sys.dim = 2;
    sys.rhs = [accel](double t, std::span<const double> y, std::span<double> dy) {
        dy[0] = y[1];
        dy[1] = accel(t, y[0]);
    };
    sys.jacobian = [daccel_dy](double t, std::span<const double> y, std::span<double> j) {
        j[0] = 0.0;
        j[1] = 1.0;
        j[2] = daccel_dy(t, y[0]);
        j[3] = 0.0;
    };
    sys.frequency = [omega](double) { return omega; };
    return sys;
}

}  // namespace

BenchmarkProblem schrodinger_problem(double energy, double inner_offset) {
    if (!(energy > 0.0) || !(energy + inner_offset > 0.0))
        throw DomainError("resonance problem needs E > 0 and E + inner_offset > 0 (inner frequency sqrt(E + offset))");
    BenchmarkProblem p;
    p.name = "resonance";
    p.system = oscillator_system([energy](double x, double y) { return (woods_saxon(x) - energy) * y; },
                                 [energy](double x, double) { return woods_saxon(x) - energy; }, 0.0);
    const double inner = std::sqrt(energy + inner_offset), outer = std::sqrt(energy);
    p.system.frequency = [inner, outer](double x) { return x <= 6.5 ? inner : outer; };
    p.system.breakpoints = {6.5};
    p.t0 = 0.0;
    p.t1 = 15.0;
    p.y0 = {0.0, 1.0};
    p.reference = ReferenceKind::phase_shift;
    p.energy = energy;
    p.frequency_doc = outer;
    return p;
}

BenchmarkProblem inhomogeneous_problem() {
    BenchmarkProblem p;
    p.name = "inhomogeneous";
    p.system = oscillator_system([](double t, double y) { return -100.0 * y + 99.0 * std::sin(t); },
                                 [](double, double) { return -100.0; }, 10.0);
    p.t0 = 0.0;
    p.t1 = 1000.0 * pi;
    p.y0 = {1.0, 11.0};
    p.reference = ReferenceKind::closed_form;
    p.exact = [](double t) { return std::sin(t) + std::sin(10.0 * t) + std::cos(10.0 * t); };
    p.exact_derivative = [](double t) {
        return std::cos(t) + 10.0 * std::cos(10.0 * t) - 10.0 * std::sin(10.0 * t);
    };
    p.frequency_doc = 10.0;
    return p;
}

namespace {
// Truncated cosine series of the periodic Duffing solution.
constexpr double kDuffingAmp[4] = {0.200179477536, 2.46946143e-4, 3.04014e-7, 3.74e-10};
constexpr double kDuffingFreq[4] = {1.01, 3.03, 5.05, 7.07};
}  // namespace

BenchmarkProblem duffing_problem() {
    BenchmarkProblem p;
    p.name = "duffing";
    p.system = oscillator_system([](double t, double y) { return -y - y * y * y + 0.002 * std::cos(1.01 * t); },
                                 [](double, double y) { return -1.0 - 3.0 * y * y; }, 1.0);
    p.t0 = 0.0;
    p.t1 = 1000.0 * pi;
    p.y0 = {0.200426728067, 0.0};
    p.reference = ReferenceKind::closed_form;
    p.exact = [](double t) {
        double y = 0.0;
        for (int k = 3; k >= 0; --k) y += kDuffingAmp[k] * std::cos(kDuffingFreq[k] * t);
        return y;
    };
    p.exact_derivative = [](double t) {
        double dy = 0.0;
        for (int k = 3; k >= 0; --k) dy -= kDuffingAmp[k] * kDuffingFreq[k] * std::sin(kDuffingFreq[k] * t);
        return dy;
    };
    p.frequency_doc = 1.0;
    return p;
}

BenchmarkProblem nonlinear_problem() {
    BenchmarkProblem p;
    p.name = "nonlinear";
    p.system = oscillator_system([](double, double y) { return -100.0 * y + std::sin(y); },
                                 [](double, double y) { return -100.0 + std::cos(y); }, 10.0);
    p.t0 = 0.0;
    p.t1 = 20.0 * pi;
    p.y0 = {0.0, 1.0};
    p.reference = ReferenceKind::endpoint;
    p.endpoint_value = 3.92823991e-4;
    p.frequency_doc = 10.0;
    return p;
}

std::vector<std::string> problem_names() {
    return {"resonance-989", "resonance-341", "inhomogeneous", "duffing", "nonlinear"};
}

std::optional<BenchmarkProblem> make_problem(std::string_view name) {
    auto named = [&](BenchmarkProblem p) {
        p.name = std::string(name);
        return p;
    };
    if (name == "resonance-989") return named(schrodinger_problem(kResonanceEnergyHigh));
    if (name == "resonance-341") return named(schrodinger_problem(kResonanceEnergyLow));
    if (name == "inhomogeneous") return inhomogeneous_problem();
    if (name == "duffing") return duffing_problem();
    if (name == "nonlinear") return nonlinear_problem();
    return std::nullopt;
}

namespace {

std::size_t grid_index(const Trajectory& traj, double x) {
    const auto& ts = traj.times();
    const auto it = std::lower_bound(ts.begin(), ts.end(), x);
    const double tol = 1e-9 * std::max(1.0, std::fabs(x));
    for (auto cand : {it, it == ts.begin() ? it : std::prev(it)}) {
        if (cand != ts.end() && std::fabs(*cand - x) <= tol) return static_cast<std::size_t>(cand - ts.begin());
    }
    throw InvalidArgument("matching point x = " + std::to_string(x) + " is not a trajectory grid point");
}

}  // namespace

double phase_shift(const Trajectory& traj, const PhaseShiftObservable& spec) {
    if (spec.l != 0) throw InvalidArgument("phase shift is implemented for l = 0 only");
    if (!(spec.x_lo < spec.x_hi)) throw InvalidArgument("matching points must satisfy x_lo < x_hi");
    if (!(spec.k > 0.0)) throw InvalidArgument("wavenumber must be positive");
    const std::size_t i = grid_index(traj, spec.x_lo), j = grid_index(traj, spec.x_hi);
    const double xi = traj.t(i), xj = traj.t(j);
    const double yi = traj.y(i)[0], yj = traj.y(j)[0];
    const double si = std::sin(spec.k * xi), sj = std::sin(spec.k * xj);
    const double ci = std::cos(spec.k * xi), cj = std::cos(spec.k * xj);
    const double num = yi * sj - yj * si;
    const double den = yj * ci - yi * cj;
    if (std::fabs(num) < 1e-300 && std::fabs(den) < 1e-300)
        throw DegenerateMatching("phase-shift numerator and denominator both vanish");
    double delta = std::atan2(num, den);
    if (delta > pi / 2) delta -= pi;
    if (delta <= -pi / 2) delta += pi;
    return delta;
}

PhaseShiftObservable default_matching(const Trajectory& traj, double energy) {
    if (traj.size() < 2) throw InvalidArgument("trajectory needs at least two samples for phase matching");
    PhaseShiftObservable spec;
    spec.k = std::sqrt(energy);
    const std::size_t last = traj.size() - 1;
    spec.x_hi = traj.t(last);
    const double target = spec.x_hi - pi / (2.0 * spec.k);
    std::size_t best = last - 1;
    for (std::size_t m = last; m-- > 0;) {
        const double x = traj.t(m);
        if (x < 14.0) break;
        if (std::fabs(x - target) < std::fabs(traj.t(best) - target)) best = m;
    }
    spec.x_lo = traj.t(best);
    return spec;
}

double resonance_phase_error(double delta) {
    return std::min(std::fabs(delta - pi / 2), std::fabs(delta + pi / 2));
}

ErrorMeasurement error_metric(const BenchmarkProblem& problem, const Trajectory& traj) {
    if (traj.empty()) throw InvalidArgument("empty trajectory");
    switch (problem.reference) {
        case ReferenceKind::closed_form: {
            double worst = 0.0;
            for (std::size_t k = 0; k < traj.size(); ++k)
                worst = std::max(worst, std::fabs(traj.y(k)[0] - problem.exact(traj.t(k))));
            return {worst, "max_abs"};
        }
        case ReferenceKind::endpoint:
            return {std::fabs(traj.y(traj.size() - 1)[0] - problem.endpoint_value), "endpoint_abs"};
        case ReferenceKind::phase_shift: {
            if (!problem.energy) throw InvalidArgument("phase-shift problem without an energy");
            auto spec = default_matching(traj, *problem.energy);
            spec.delta = phase_shift(traj, spec);
            return {resonance_phase_error(spec.delta), "phase_shift_abs"};
        }
    }
    throw InvalidArgument("unknown reference kind");
}

}  // namespace fittedrk
