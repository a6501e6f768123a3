// Command-line front end: benchmark matrices, stability contours, fitted
// coefficient tables and tableau diagnostics, all written as CSV.

#include "fittedrk/analysis.hpp"
#include "fittedrk/bench.hpp"
#include "fittedrk/fitting.hpp"
#include "fittedrk/problems.hpp"
#include "fittedrk/tableau.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace fittedrk;

namespace {

// "100,200,400" or "geom:START:RATIO:COUNT".
std::vector<std::size_t> parse_steps(const std::string& text) {
    std::vector<std::size_t> out;
    if (text.rfind("geom:", 0) == 0) {
        std::size_t start = 0, ratio = 0, count = 0;
        char tail = 0;
        if (std::sscanf(text.c_str() + 5, "%zu:%zu:%zu%c", &start, &ratio, &count, &tail) != 3 || start == 0 ||
            ratio < 2 || count == 0)
            throw UsageError("bad geometric step spec '" + text + "' (expected geom:START:RATIO:COUNT)");
        for (std::size_t k = 0, n = start; k < count; ++k, n *= ratio) out.push_back(n);
        return out;
    }
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        unsigned long long n = 0;
        try {
            n = std::stoull(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != item.size()) throw UsageError("bad step count '" + item + "'");
        out.push_back(static_cast<std::size_t>(n));
    }
    return out;
}

std::vector<std::string> split_names(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

bool is_resonance(const std::string& problem) { return problem.rfind("resonance", 0) == 0; }

std::vector<std::size_t> default_steps(bool resonance) {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k <= 6; ++k) out.push_back((resonance ? 60 : 100) << k);
    return out;
}

std::string format(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// Named classical tableau, fitted member at v, or a file.
ButcherTableau resolve_tableau(const std::string& name, double v, const std::string& file) {
    if (!file.empty()) {
        auto loaded = load_tableau_file(file);
        for (const auto& w : loaded.warnings) std::cerr << "warning: " << w << '\n';
        return loaded.tableau;
    }
    if (auto kind = parse_method_kind(name)) return fit_tableau({*kind, v});
    if (name == "RadauI") return radau1();
    if (name == "LobattoIIIC") return lobatto3c();
    throw UsageError("unknown method '" + name + "'");
}

std::ostream& open_out(const std::string& path, std::ofstream& file) {
    if (path.empty() || path == "-") return std::cout;
    file.open(path, std::ios::binary);
    if (!file) throw Error("cannot open '" + path + "' for writing");
    return file;
}

int run_bench(const std::string& methods, const std::string& problems, const std::string& steps,
              const std::string& out, bool timing, const std::string& traj_dir, const std::string& tableau_file) {
    auto registry = MethodRegistry::with_defaults();
    std::vector<std::string> method_names = split_names(methods);
    if (!tableau_file.empty()) {
        auto loaded = load_tableau_file(tableau_file);
        for (const auto& w : loaded.warnings) std::cerr << "warning: " << w << '\n';
        const std::string name = fs::path(tableau_file).stem().string();
        registry.add(name, loaded.tableau);
        if (std::find(method_names.begin(), method_names.end(), name) == method_names.end())
            method_names.push_back(name);
    }

    std::vector<std::string> problem_list = split_names(problems);
    std::vector<std::string> metadata;
    std::vector<BenchRecord> records;
    // Resonance and non-resonance problems get different default grids, so
    // without --steps the matrix is run per problem.
    std::vector<std::pair<std::vector<std::string>, std::vector<std::size_t>>> groups;
    if (!steps.empty()) {
        groups.push_back({problem_list, parse_steps(steps)});
        metadata.push_back("steps: " + steps);
    } else {
        for (const auto& p : problem_list) groups.push_back({{p}, default_steps(is_resonance(p))});
        metadata.push_back("steps: default grid, 60*2^k (resonance) or 100*2^k (other), k = 0..6");
    }

    for (auto& [plist, grid] : groups) {
        RunMatrix m{method_names, plist, grid, timing, {}};
        validate(m, registry);
        auto part = run_matrix(m, registry);
        records.insert(records.end(), part.begin(), part.end());
    }

    for (const auto& r : records)
        if (r.n_steps != r.requested_steps)
            metadata.push_back("snapped " + r.method + "/" + r.problem + ": " + std::to_string(r.requested_steps) +
                               " -> " + std::to_string(r.n_steps));
    // Snap notes repeat per method; keep the first of each.
    std::vector<std::string> unique_meta;
    for (const auto& line : metadata)
        if (std::find(unique_meta.begin(), unique_meta.end(), line) == unique_meta.end()) unique_meta.push_back(line);

    if (out.empty() || out == "-")
        write_bench_csv(std::cout, records, unique_meta);
    else
        emit_csv(records, out, unique_meta);

    if (!traj_dir.empty()) {
        fs::create_directories(traj_dir);
        for (const auto& r : records) {
            const auto problem = *make_problem(r.problem);
            RunMatrix m{{r.method}, {r.problem}, {r.requested_steps}, false, {}};
            Trajectory traj;
            run_cell(r.method, *registry.find(r.method), problem, r.requested_steps, m, &traj);
            const auto path = fs::path(traj_dir) / (r.method + "_" + r.problem + "_" + std::to_string(r.n_steps) + ".csv");
            std::ofstream f(path, std::ios::binary);
            if (!f) throw Error("cannot open '" + path.string() + "' for writing");
            write_trajectory_csv(f, traj);
        }
    }

    bool any_nan = false;
    for (const auto& r : records) {
        if (std::isnan(r.error)) {
            any_nan = true;
            std::cerr << r.method << " / " << r.problem << " / " << r.n_steps << ": " << r.reason << '\n';
        }
    }
    return any_nan ? 2 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fitted two-stage Gauss Runge-Kutta methods: benchmarks and analysis"};
    app.require_subcommand(1);

    std::string methods = "G2,G2-PL,G2-PL-D,RadauI,LobattoIIIC";
    std::string problems = "resonance-989,resonance-341,inhomogeneous,duffing,nonlinear";
    std::string steps, out, traj_dir, tableau_file;
    bool timing = false;

    auto* bench = app.add_subcommand("bench", "Run a method x problem x step-count matrix");
    bench->add_option("--methods", methods, "Comma-separated method names");
    bench->add_option("--problems", problems, "Comma-separated problem names");
    bench->add_option("--steps", steps, "Step counts: 100,200,400 or geom:START:RATIO:COUNT");
    bench->add_option("--out", out, "Output CSV (default stdout)");
    bench->add_option("--tableau-file", tableau_file, "Extra tableau, registered under its file stem");
    bench->add_flag("--timing", timing, "Record wall time (makes the CSV non-reproducible)");
    bench->add_option("--dump-trajectories", traj_dir, "Directory for per-cell trajectory CSVs");

    std::string stab_method = "G2";
    double v = 0.0;
    double re_min = -20, re_max = 20, im_min = -20, im_max = 20;
    std::size_t points = 800;
    auto* stability = app.add_subcommand("stability", "Write |R(z)| = 1 contours as CSV polylines");
    stability->add_option("--methods", stab_method, "One method name");
    stability->add_option("--v", v, "Fitting parameter for fitted methods");
    stability->add_option("--tableau-file", tableau_file, "Tableau file instead of a named method");
    stability->add_option("--out", out, "Output CSV (default stdout)");
    stability->add_option("--re-min", re_min);
    stability->add_option("--re-max", re_max);
    stability->add_option("--im-min", im_min);
    stability->add_option("--im-max", im_max);
    stability->add_option("--points", points, "Grid points per axis")->check(CLI::Range(2, 100000));

    std::string v_grid = "geom-real:0.01:50:200";
    auto* coeffs = app.add_subcommand("coeffs", "Tabulate fitted coefficients over a v grid");
    coeffs->add_option("--v", v_grid, "Comma-separated v values, or geom-real:LO:HI:COUNT");
    coeffs->add_option("--out", out, "Output CSV (default stdout)");

    std::string analyze_method = "G2";
    std::string analyze_v = "0.1,0.5,1,2,5,10,20";
    auto* analyze = app.add_subcommand("analyze", "Order/symplecticity residuals and phase-lag/dissipation");
    analyze->add_option("--methods", analyze_method, "One method name");
    analyze->add_option("--tableau-file", tableau_file, "Tableau file instead of a named method");
    analyze->add_option("--v", analyze_v, "Comma-separated v values (fit and probe)");
    analyze->add_option("--out", out, "Output CSV (default stdout)");

    CLI11_PARSE(app, argc, argv);

    auto parse_reals = [](const std::string& text) {
        std::vector<double> vs;
        if (text.rfind("geom-real:", 0) == 0) {
            double lo = 0, hi = 0;
            int count = 0;
            char tail = 0;
            if (std::sscanf(text.c_str() + 10, "%lf:%lf:%d%c", &lo, &hi, &count, &tail) != 3 || !(lo > 0) ||
                !(hi > lo) || count < 2)
                throw UsageError("bad grid '" + text + "' (expected geom-real:LO:HI:COUNT)");
            for (int k = 0; k < count; ++k) vs.push_back(lo * std::pow(hi / lo, double(k) / (count - 1)));
            return vs;
        }
        for (const auto& item : split_names(text)) {
            char* end = nullptr;
            const double x = std::strtod(item.c_str(), &end);
            if (end == item.c_str() || *end != '\0') throw UsageError("bad real '" + item + "'");
            vs.push_back(x);
        }
        return vs;
    };

    try {
        if (*bench) return run_bench(methods, problems, steps, out, timing, traj_dir, tableau_file);

        if (*stability) {
            const auto t = resolve_tableau(stab_method, v, tableau_file);
            ComplexWindow w{re_min, re_max, im_min, im_max, points, points};
            if (!(re_max > re_min) || !(im_max > im_min)) throw UsageError("empty stability window");
            if (out.empty() || out == "-")
                write_contours_csv(std::cout, stability_region_boundary(t, w));
            else
                emit_stability(t, w, out);
            return 0;
        }

        std::ofstream file;
        if (*coeffs) {
            auto& os = open_out(out, file);
            os << "v,b2_pl,pl_sign,b2_pld,a22_pld\n";
            int failures = 0;
            for (const double x : parse_reals(v_grid)) {
                os << format(x);
                try {
                    os << ',' << format(b2_phase_fitted(x).value) << ',' << phase_condition_sign(x);
                } catch (const SingularParameter&) {
                    os << ",nan,0";
                    ++failures;
                }
                try {
                    const auto c = b2_a22_fitted(x);
                    os << ',' << format(c.b2.value) << ',' << format(c.a22.value);
                } catch (const SingularParameter&) {
                    os << ",nan,nan";
                    ++failures;
                }
                os << '\n';
            }
            return failures ? 2 : 0;
        }

        if (*analyze) {
            auto& os = open_out(out, file);
            os << "method,v,phase_lag,dissipation";
            for (int k = 1; k <= 8; ++k) os << ",order_" << k;
            os << ",sympl_11,sympl_22,sympl_12\n";
            const std::string label = tableau_file.empty() ? analyze_method : fs::path(tableau_file).stem().string();
            for (const double x : parse_reals(analyze_v)) {
                const auto t = resolve_tableau(analyze_method, x, tableau_file);
                const auto r = residuals(t);
                os << label << ',' << format(x) << ',' << format(phase_lag(t, x)) << ',' << format(dissipation(t, x));
                for (const double e : r.order) os << ',' << format(e);
                for (std::size_t k = 0; k < 3; ++k)
                    os << ',' << (k < r.symplectic.size() ? format(r.symplectic[k]) : std::string("nan"));
                os << '\n';
            }
            return 0;
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 1;
}
