#include "fittedrk/bench.hpp"

#include <chrono>
#include <cmath>
#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace fittedrk {

MethodRegistry MethodRegistry::with_defaults() {
    MethodRegistry r;
    r.add("G2", MethodKind::G2_CLASSICAL);
    r.add("G2-PL", MethodKind::G2_PL);
    r.add("G2-PL-D", MethodKind::G2_PL_D);
    r.add("RadauI", radau1());
    r.add("LobattoIIIC", lobatto3c());
    return r;
}

void MethodRegistry::add(const std::string& name, Method method) {
    for (auto& [key, value] : entries_) {
        if (key == name) {
            value = std::move(method);
            return;
        }
    }
    entries_.emplace_back(name, std::move(method));
}

const Method* MethodRegistry::find(const std::string& name) const {
    for (const auto& [key, value] : entries_)
        if (key == name) return &value;
    return nullptr;
}

std::vector<std::string> MethodRegistry::names() const {
    std::vector<std::string> out;
    for (const auto& entry : entries_) out.push_back(entry.first);
    return out;
}

void validate(const RunMatrix& m, const MethodRegistry& registry) {
    if (m.methods.empty() || m.problems.empty() || m.steps.empty())
        throw UsageError("run matrix needs at least one method, problem and step count");
    for (const auto& name : m.methods)
        if (!registry.find(name)) throw UsageError("unknown method '" + name + "'");
    const auto known = problem_names();
    for (const auto& name : m.problems)
        if (std::find(known.begin(), known.end(), name) == known.end())
            throw UsageError("unknown problem '" + name + "'");
    for (std::size_t k = 0; k < m.steps.size(); ++k) {
        if (m.steps[k] == 0) throw UsageError("step counts must be at least 1");
        if (k > 0 && m.steps[k] <= m.steps[k - 1]) throw UsageError("step counts must be strictly increasing");
    }
}

BenchRecord run_cell(const std::string& method_name, const Method& method, const BenchmarkProblem& problem,
                     std::size_t requested_steps, const RunMatrix& m, Trajectory* trajectory_out) {
    BenchRecord rec;
    rec.method = method_name;
    rec.problem = problem.name;
    rec.requested_steps = requested_steps;
    rec.stages = method_stages(method);
    rec.wall_time_ms = std::numeric_limits<double>::quiet_NaN();
    rec.n_steps = requested_steps;
    try {
        rec.n_steps = snap_steps(problem.t0, problem.t1, requested_steps, problem.system.breakpoints);
        const auto start = std::chrono::steady_clock::now();
        auto traj = integrate(method, problem.system, problem.t0, problem.t1, problem.y0, rec.n_steps, m.solver);
        const auto measured = error_metric(problem, traj);
        if (m.record_timing)
            rec.wall_time_ms =
                std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        rec.error = measured.error;
        rec.error_kind = measured.kind;
        rec.newton_iters_total = traj.stats.newton_iterations_total;
        if (trajectory_out) *trajectory_out = std::move(traj);
    } catch (const Error& e) {
        rec.error = std::numeric_limits<double>::quiet_NaN();
        rec.reason = e.what();
    }
    rec.work = rec.n_steps * rec.stages;
    rec.log10_work = std::log10(static_cast<double>(rec.work));
    rec.accuracy_digits = std::isnan(rec.error) ? rec.error : -std::log10(rec.error);
    return rec;
}

namespace {

struct Cell {
    std::size_t method;
    std::size_t problem;
    std::size_t steps;
};

std::vector<Cell> cells_of(const RunMatrix& m) {
    std::vector<Cell> cells;
    for (std::size_t a = 0; a < m.methods.size(); ++a)
        for (std::size_t b = 0; b < m.problems.size(); ++b)
            for (std::size_t c = 0; c < m.steps.size(); ++c) cells.push_back({a, b, c});
    return cells;
}

std::vector<BenchmarkProblem> problems_of(const RunMatrix& m) {
    std::vector<BenchmarkProblem> out;
    for (const auto& name : m.problems) out.push_back(*make_problem(name));
    return out;
}

}  // namespace

std::vector<BenchRecord> run_matrix_serial(const RunMatrix& m, const MethodRegistry& registry) {
    validate(m, registry);
    const auto problems = problems_of(m);
    std::vector<BenchRecord> out;
    for (const auto& cell : cells_of(m)) {
        const auto& name = m.methods[cell.method];
        out.push_back(run_cell(name, *registry.find(name), problems[cell.problem], m.steps[cell.steps], m));
    }
    return out;
}

std::vector<BenchRecord> run_matrix(const RunMatrix& m, const MethodRegistry& registry) {
    validate(m, registry);
    const auto problems = problems_of(m);
    const auto cells = cells_of(m);
    std::vector<BenchRecord> out(cells.size());
    const auto count = static_cast<std::ptrdiff_t>(cells.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t k = 0; k < count; ++k) {
        const auto& cell = cells[static_cast<std::size_t>(k)];
        const auto& name = m.methods[cell.method];
        out[static_cast<std::size_t>(k)] =
            run_cell(name, *registry.find(name), problems[cell.problem], m.steps[cell.steps], m);
    }
    return out;
}

const std::vector<std::string>& bench_csv_columns() {
    static const std::vector<std::string> columns = {
        "method", "problem", "n_steps", "stages", "work", "log10_work", "error", "accuracy_digits",
        "wall_time_ms", "newton_iters_total", "requested_steps", "error_kind", "reason"};
    return columns;
}

namespace {

std::string format_real(double x) {
    if (std::isnan(x)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string quote(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
    std::string out = "\"";
    for (const char ch : field) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

std::vector<std::string> split_csv_row(const std::string& line) {
    std::vector<std::string> fields(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                fields.back() += '"';
                ++i;
            } else if (ch == '"') {
                quoted = false;
            } else {
                fields.back() += ch;
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            fields.emplace_back();
        } else {
            fields.back() += ch;
        }
    }
    return fields;
}

double parse_real(const std::string& s) { return std::strtod(s.c_str(), nullptr); }

}  // namespace

void write_bench_csv(std::ostream& out, const std::vector<BenchRecord>& records,
                     const std::vector<std::string>& metadata) {
    for (const auto& line : metadata) out << "# " << line << '\n';
    const auto& columns = bench_csv_columns();
    for (std::size_t k = 0; k < columns.size(); ++k) out << (k ? "," : "") << columns[k];
    out << '\n';
    for (const auto& r : records) {
        out << quote(r.method) << ',' << quote(r.problem) << ',' << r.n_steps << ',' << r.stages << ',' << r.work
            << ',' << format_real(r.log10_work) << ',' << format_real(r.error) << ','
            << format_real(r.accuracy_digits) << ',' << format_real(r.wall_time_ms) << ',' << r.newton_iters_total
            << ',' << r.requested_steps << ',' << quote(r.error_kind) << ',' << quote(r.reason) << '\n';
    }
}

void emit_csv(const std::vector<BenchRecord>& records, const std::filesystem::path& path,
              const std::vector<std::string>& metadata) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open '" + path.string() + "' for writing");
    write_bench_csv(out, records, metadata);
    if (!out) throw Error("failed writing '" + path.string() + "'");
}

std::vector<BenchRecord> read_bench_csv(std::istream& in) {
    std::vector<BenchRecord> out;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty() || line.front() == '#') continue;
        // A quoted field may span lines; keep reading until the quotes balance.
        std::string more;
        while (std::count(line.begin(), line.end(), '"') % 2 != 0 && std::getline(in, more)) line += '\n' + more;
        const auto f = split_csv_row(line);
        if (!header_seen) {
            if (f != bench_csv_columns()) throw Error("unexpected benchmark CSV header");
            header_seen = true;
            continue;
        }
        if (f.size() != bench_csv_columns().size()) throw Error("benchmark CSV row has wrong field count");
        BenchRecord r;
        r.method = f[0];
        r.problem = f[1];
        r.n_steps = std::stoull(f[2]);
        r.stages = std::stoull(f[3]);
        r.work = std::stoull(f[4]);
        r.log10_work = parse_real(f[5]);
        r.error = parse_real(f[6]);
        r.accuracy_digits = parse_real(f[7]);
        r.wall_time_ms = parse_real(f[8]);
        r.newton_iters_total = std::stol(f[9]);
        r.requested_steps = std::stoull(f[10]);
        r.error_kind = f[11];
        r.reason = f[12];
        out.push_back(std::move(r));
    }
    if (!header_seen) throw Error("benchmark CSV has no header row");
    return out;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
    out << 't';
    for (std::size_t k = 0; k < traj.dim(); ++k) out << ",y_" << k;
    out << '\n';
    for (std::size_t n = 0; n < traj.size(); ++n) {
        out << format_real(traj.t(n));
        for (const double v : traj.y(n)) out << ',' << format_real(v);
        out << '\n';
    }
}

void emit_stability(const ButcherTableau& tableau, const ComplexWindow& window, const std::filesystem::path& path) {
    const auto curves = stability_region_boundary(tableau, window);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open '" + path.string() + "' for writing");
    write_contours_csv(out, curves);
    if (!out) throw Error("failed writing '" + path.string() + "'");
}

}  // namespace fittedrk
