#pragma once

#include "fittedrk/analysis.hpp"
#include "fittedrk/integrator.hpp"
#include "fittedrk/problems.hpp"

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace fittedrk {

/// Named methods available to the benchmark harness.
class MethodRegistry {
public:
    /// G2, G2-PL, G2-PL-D, RadauI, LobattoIIIC.
    static MethodRegistry with_defaults();

    void add(const std::string& name, Method method);
    const Method* find(const std::string& name) const;
    std::vector<std::string> names() const;

private:
    std::vector<std::pair<std::string, Method>> entries_;
};

struct RunMatrix {
    std::vector<std::string> methods;
    std::vector<std::string> problems;
    std::vector<std::size_t> steps;
    bool record_timing = false;
    SolverConfig solver;
};

struct BenchRecord {
    std::string method;
    std::string problem;
    std::size_t n_steps = 0;
    std::size_t stages = 0;
    std::size_t work = 0;
    double log10_work = 0.0;
    double error = 0.0;
    double accuracy_digits = 0.0;
    double wall_time_ms = 0.0;
    long newton_iters_total = 0;
    std::size_t requested_steps = 0;
    std::string error_kind;
    std::string reason;

    friend bool operator==(const BenchRecord&, const BenchRecord&) = default;
};

/// Checks that every method and problem name resolves and that step
/// counts are positive and strictly increasing; throws UsageError otherwise.
void validate(const RunMatrix& m, const MethodRegistry& registry);

/// One record per (method, problem, steps) in method-major, then problem,
/// then steps order. Step counts are snapped upward so that frequency
/// breakpoints are grid points; failures become records with error = NaN
/// and a reason. Cells run in parallel with OpenMP.
std::vector<BenchRecord> run_matrix(const RunMatrix& m, const MethodRegistry& registry);

/// Same records, computed one cell at a time.
std::vector<BenchRecord> run_matrix_serial(const RunMatrix& m, const MethodRegistry& registry);

/// Runs a single cell; `trajectory_out`, when non-null, receives the trajectory.
BenchRecord run_cell(const std::string& method_name, const Method& method, const BenchmarkProblem& problem,
                     std::size_t requested_steps, const RunMatrix& m, Trajectory* trajectory_out = nullptr);

/// Column names of the benchmark CSV, in order.
const std::vector<std::string>& bench_csv_columns();

/// Header row followed by one row per record. Reals use %.17g; wall time
/// is written as `nan` unless timing was recorded. Lines in `metadata` are
/// written first, each prefixed with "# ".
void write_bench_csv(std::ostream& out, const std::vector<BenchRecord>& records,
                     const std::vector<std::string>& metadata = {});
void emit_csv(const std::vector<BenchRecord>& records, const std::filesystem::path& path,
              const std::vector<std::string>& metadata = {});

/// Parses what write_bench_csv produced (comment lines skipped).
std::vector<BenchRecord> read_bench_csv(std::istream& in);

/// `t, y_0, ..., y_{dim-1}` rows.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

/// Writes the |R| = 1 contours of `tableau` over `window` as CSV polylines.
void emit_stability(const ButcherTableau& tableau, const ComplexWindow& window, const std::filesystem::path& path);

}  // namespace fittedrk
