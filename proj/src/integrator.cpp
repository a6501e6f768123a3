#include "fittedrk/integrator.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

namespace fittedrk {

void Trajectory::push(double t, std::span<const double> y) {
    if (y.size() != dim_) throw DimensionMismatch("trajectory state has wrong dimension");
    if (!ts_.empty() && !(t > ts_.back())) throw InvalidArgument("trajectory times must be strictly increasing");
    ts_.push_back(t);
    ys_.insert(ys_.end(), y.begin(), y.end());
}

std::size_t method_stages(const Method& m) {
    if (const auto* t = std::get_if<ButcherTableau>(&m)) return t->stages();
    return 2;
}

namespace {

double inf_norm(std::span<const double> x) {
    double m = 0.0;
    for (const double v : x) m = std::max(m, std::fabs(v));
    return m;
}

Eigen::MatrixXd jacobian_at(const OdeSystem& sys, double time, std::span<const double> y,
                            std::span<const double> f0, const SolverConfig& cfg, long& evaluations) {
    const std::size_t n = sys.dim;
    Eigen::MatrixXd jac(n, n);
    if (cfg.jacobian_mode == JacobianMode::analytic && sys.jacobian) {
        std::vector<double> buf(n * n);
        sys.jacobian(time, y, buf);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) jac(i, j) = buf[i * n + j];
        return jac;
    }
    std::vector<double> yp(y.begin(), y.end()), fp(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double delta = cfg.fd_epsilon * std::max(1.0, std::fabs(y[j]));
        yp[j] = y[j] + delta;
        const double actual = yp[j] - y[j];
        sys.rhs(time, yp, fp);
        ++evaluations;
        for (std::size_t i = 0; i < n; ++i) jac(i, j) = (fp[i] - f0[i]) / actual;
        yp[j] = y[j];
    }
    return jac;
}

}  // namespace

StageSolution solve_stages(const ButcherTableau& t, const OdeSystem& sys, double time, std::span<const double> y,
                           double h, const SolverConfig& cfg) {
    const std::size_t n = sys.dim, s = t.stages(), big = n * s;
    if (y.size() != n) throw DimensionMismatch("state dimension does not match the system");
    if (!(h >= 0.0) || !std::isfinite(h)) throw InvalidArgument("step size must be finite and non-negative");
    if (cfg.newton_max_iters < 1 || !(cfg.newton_tol > 0.0)) throw InvalidArgument("invalid Newton settings");

    StageSolution out;
    std::vector<double> f0(n);
    sys.rhs(time, y, f0);
    out.function_evaluations = 1;

    out.w.resize(big);
    for (std::size_t i = 0; i < s; ++i) std::copy(f0.begin(), f0.end(), out.w.begin() + i * n);

    const Eigen::MatrixXd jac = jacobian_at(sys, time, y, f0, cfg, out.function_evaluations);
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(big, big);
    for (std::size_t i = 0; i < s; ++i)
        for (std::size_t j = 0; j < s; ++j) m.block(i * n, j * n, n, n) -= (h * t.a(i, j)) * jac;
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
    if (!(lu.rcond() > std::numeric_limits<double>::epsilon()))
        throw SingularJacobian("stage iteration matrix I - h (A x J) is singular");

    const double scale = std::max({1.0, inf_norm(y), inf_norm(f0)});
    const double tolerance = cfg.newton_tol * scale;

    std::vector<double> ys(n), fs(n);
    Eigen::VectorXd g(big);
    double previous = std::numeric_limits<double>::infinity();
    for (int iter = 0;; ++iter) {
        for (std::size_t i = 0; i < s; ++i) {
            for (std::size_t k = 0; k < n; ++k) {
                double acc = 0.0;
                for (std::size_t j = 0; j < s; ++j) acc += t.a(i, j) * out.w[j * n + k];
                ys[k] = y[k] + h * acc;
            }
            sys.rhs(time + t.c(i) * h, ys, fs);
            ++out.function_evaluations;
            for (std::size_t k = 0; k < n; ++k) g[i * n + k] = out.w[i * n + k] - fs[k];
        }
        const double residual = g.lpNorm<Eigen::Infinity>();
        out.residual = residual;
        if (!std::isfinite(residual))
            throw NewtonDivergence("stage residual is not finite", residual, iter);
        // Stagnation just above tolerance is round-off, not divergence.
        const bool stalled = iter > 0 && residual > 0.5 * previous && residual <= 100.0 * tolerance;
        if (residual <= tolerance || stalled) {
            out.newton_iterations = iter;
            return out;
        }
        if (iter == cfg.newton_max_iters)
            throw NewtonDivergence("simplified Newton did not converge (residual " + std::to_string(residual) + ")",
                                   residual, iter);
        previous = residual;
        const Eigen::VectorXd delta = lu.solve(-g);
        for (std::size_t k = 0; k < big; ++k) out.w[k] += delta[static_cast<Eigen::Index>(k)];
    }
}

StepResult step(const ButcherTableau& t, const OdeSystem& sys, double time, std::span<const double> y, double h,
                const SolverConfig& cfg) {
    const auto stages = solve_stages(t, sys, time, y, h, cfg);
    const std::size_t n = sys.dim, s = t.stages();
    StepResult out{std::vector<double>(y.begin(), y.end()), stages.newton_iterations, stages.function_evaluations,
                   stages.residual};
    for (std::size_t k = 0; k < n; ++k) {
        double acc = 0.0;
        for (std::size_t i = 0; i < s; ++i) acc += t.b(i) * stages.w[i * n + k];
        out.y[k] += h * acc;
    }
    return out;
}

namespace {

bool on_grid(double t0, double h, double point) {
    const double k = (point - t0) / h;
    return std::fabs(k - std::round(k)) <= 1e-9 * std::max(1.0, std::fabs(k));
}

}  // namespace

std::size_t snap_steps(double t0, double t1, std::size_t n_steps, std::span<const double> breakpoints,
                       std::size_t max_steps) {
    if (n_steps == 0) throw InvalidArgument("step count must be at least 1");
    if (!(t1 > t0)) throw InvalidArgument("integration interval must have t1 > t0");
    for (std::size_t n = n_steps; n <= max_steps; ++n) {
        const double h = (t1 - t0) / static_cast<double>(n);
        if (std::all_of(breakpoints.begin(), breakpoints.end(), [&](double bp) {
                return bp <= t0 || bp >= t1 || on_grid(t0, h, bp);
            }))
            return n;
    }
    throw InvalidArgument("no step count up to " + std::to_string(max_steps) + " puts every breakpoint on the grid");
}

Trajectory integrate(const Method& method, const OdeSystem& sys, double t0, double t1, std::span<const double> y0,
                     std::size_t n_steps, const SolverConfig& cfg) {
    if (n_steps == 0) throw InvalidArgument("step count must be at least 1");
    if (!(t1 > t0)) throw InvalidArgument("integration interval must have t1 > t0");
    if (y0.size() != sys.dim) throw DimensionMismatch("initial state dimension does not match the system");
    const double span = t1 - t0;
    const double h = span / static_cast<double>(n_steps);
    for (const double bp : sys.breakpoints)
        if (bp > t0 && bp < t1 && !on_grid(t0, h, bp))
            throw InvalidArgument("frequency breakpoint " + std::to_string(bp) + " is not a grid point for " +
                                  std::to_string(n_steps) + " steps");

    Trajectory traj(sys.dim);
    traj.stats.stages_per_step = method_stages(method);
    traj.push(t0, y0);

    const auto* fixed = std::get_if<ButcherTableau>(&method);
    std::vector<std::pair<double, ButcherTableau>> cache;
    auto tableau_for = [&](double time) -> const ButcherTableau& {
        if (fixed) return *fixed;
        const double v = sys.frequency(time + 0.5 * h) * h;
        for (const auto& [key, tab] : cache)
            if (key == v) return tab;
        cache.emplace_back(v, fit_tableau({std::get<MethodKind>(method), v}));
        return cache.back().second;
    };

    std::vector<double> y(y0.begin(), y0.end());
    for (std::size_t k = 0; k < n_steps; ++k) {
        const double time = t0 + span * static_cast<double>(k) / static_cast<double>(n_steps);
        const double next = k + 1 == n_steps ? t1 : t0 + span * static_cast<double>(k + 1) / static_cast<double>(n_steps);
        try {
            auto result = step(tableau_for(time), sys, time, y, h, cfg);
            y = std::move(result.y);
            traj.stats.function_evaluations += result.function_evaluations;
            traj.stats.newton_iterations_total += result.newton_iterations;
            traj.stats.max_newton_residual = std::max(traj.stats.max_newton_residual, result.residual);
        } catch (const Error& e) {
            throw IntegrationFailure("step " + std::to_string(k) + " at t = " + std::to_string(time) + ": " + e.what(),
                                     std::move(traj));
        }
        traj.push(next, y);
        ++traj.stats.steps;
    }
    return traj;
}

}  // namespace fittedrk
