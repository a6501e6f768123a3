#pragma once

#include "fittedrk/errors.hpp"
#include "fittedrk/fitting.hpp"
#include "fittedrk/tableau.hpp"

#include <cstddef>
#include <functional>
#include <span>
#include <variant>
#include <vector>

namespace fittedrk {

/// dydt = f(t, y); both spans have length dim.
using RhsFn = std::function<void(double t, std::span<const double> y, std::span<double> dydt)>;
/// Row-major dim*dim Jacobian df/dy.
using JacobianFn = std::function<void(double t, std::span<const double> y, std::span<double> jac)>;

/// First-order system y' = f(t, y) with an optional analytic Jacobian and
/// the fitting frequency schedule omega(t).
struct OdeSystem {
    std::size_t dim = 0;
    RhsFn rhs;
    JacobianFn jacobian;  ///< may be empty
    std::function<double(double)> frequency = [](double) { return 0.0; };
    /// Points where `frequency` jumps. Integration grids must contain them.
    std::vector<double> breakpoints;
};

enum class JacobianMode { analytic, finite_difference };

struct SolverConfig {
    /// Stage residuals are accepted below newton_tol * max(1, |y|, |f(t, y)|).
    double newton_tol = 1e-14;
    int newton_max_iters = 50;
    /// `analytic` falls back to finite differences when the system has no Jacobian.
    JacobianMode jacobian_mode = JacobianMode::analytic;
    /// Relative perturbation for one-sided differences; scaled by max(1, |y_j|).
    double fd_epsilon = 1.4901161193847656e-08;
};

struct StageSolution {
    /// Stage derivatives w_1..w_s, stage-major (w[i*dim + k]).
    std::vector<double> w;
    int newton_iterations = 0;
    long function_evaluations = 0;
    double residual = 0.0;
};

/// Solves w_i = f(t + c_i h, y + h sum_j a_ij w_j) by simplified Newton on
/// the stacked s*dim system, with the Jacobian frozen at (t, y) and the
/// initial guess w_i = f(t, y).
///
/// Throws NewtonDivergence when the residual is still above tolerance after
/// newton_max_iters updates and SingularJacobian when I - h (A x J) cannot
/// be factorized.
StageSolution solve_stages(const ButcherTableau& t, const OdeSystem& sys, double time, std::span<const double> y,
                           double h, const SolverConfig& cfg = {});

struct StepResult {
    std::vector<double> y;
    int newton_iterations = 0;
    long function_evaluations = 0;
    double residual = 0.0;
};

/// y_{n+1} = y_n + h sum_i b_i w_i.
StepResult step(const ButcherTableau& t, const OdeSystem& sys, double time, std::span<const double> y, double h,
                const SolverConfig& cfg = {});

struct TrajectoryStats {
    std::size_t steps = 0;
    std::size_t stages_per_step = 0;
    long function_evaluations = 0;
    long newton_iterations_total = 0;
    double max_newton_residual = 0.0;
};

/// Samples (t_k, y_k), k = 0..steps, with states stored contiguously.
class Trajectory {
public:
    explicit Trajectory(std::size_t dim = 0) : dim_(dim) {}

    std::size_t dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return ts_.size(); }
    bool empty() const noexcept { return ts_.empty(); }

    double t(std::size_t k) const { return ts_[k]; }
    std::span<const double> y(std::size_t k) const { return {ys_.data() + k * dim_, dim_}; }
    const std::vector<double>& times() const noexcept { return ts_; }

    void push(double t, std::span<const double> y);

    TrajectoryStats stats;

private:
    std::size_t dim_;
    std::vector<double> ts_;
    std::vector<double> ys_;
};

/// Either a fixed tableau or a member of the Gauss family refitted each step.
using Method = std::variant<ButcherTableau, MethodKind>;

std::size_t method_stages(const Method& m);

/// Thrown by integrate() when a step fails; carries the samples computed so far.
class IntegrationFailure : public Error {
public:
    IntegrationFailure(const std::string& what, Trajectory partial)
        : Error(what), partial_(std::move(partial)) {}
    const Trajectory& partial() const noexcept { return partial_; }

private:
    Trajectory partial_;
};

/// Fixed-step integration on t_k = t0 + k (t1 - t0) / n_steps.
///
/// Fitted methods use fit_tableau({kind, omega * h}) with omega evaluated at
/// the midpoint of each step; tableaus are cached per distinct omega * h.
/// Every breakpoint of `sys` inside (t0, t1) must be a grid point (see
/// snap_steps); otherwise InvalidArgument is thrown.
Trajectory integrate(const Method& method, const OdeSystem& sys, double t0, double t1, std::span<const double> y0,
                     std::size_t n_steps, const SolverConfig& cfg = {});

/// Smallest n >= n_steps for which every breakpoint in (t0, t1) lands on
/// the uniform grid. Throws InvalidArgument if none exists below max_steps.
std::size_t snap_steps(double t0, double t1, std::size_t n_steps, std::span<const double> breakpoints,
                       std::size_t max_steps = std::size_t{1} << 26);

}  // namespace fittedrk
