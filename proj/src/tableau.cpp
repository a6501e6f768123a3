#include "fittedrk/tableau.hpp"

#include "fittedrk/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <charconv>
#include <cstdlib>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace fittedrk {

ButcherTableau::ButcherTableau(std::vector<double> c, std::vector<double> a, std::vector<double> b)
    : c_(std::move(c)), a_(std::move(a)), b_(std::move(b)) {
    const std::size_t s = c_.size();
    if (s == 0) throw DimensionMismatch("tableau must have at least one stage");
    if (b_.size() != s)
        throw DimensionMismatch("weights have " + std::to_string(b_.size()) + " entries, expected " +
                                std::to_string(s));
    if (a_.size() != s * s)
        throw DimensionMismatch("stage matrix has " + std::to_string(a_.size()) + " entries, expected " +
                                std::to_string(s * s));
}

bool ButcherTableau::implicit() const noexcept {
    const std::size_t s = stages();
    for (std::size_t i = 0; i < s; ++i)
        for (std::size_t j = i; j < s; ++j)
            if (a(i, j) != 0.0) return true;
    return false;
}

double ButcherTableau::row_sum_defect() const noexcept {
    const std::size_t s = stages();
    double worst = 0.0;
    for (std::size_t i = 0; i < s; ++i) {
        long double sum = 0.0L;
        for (std::size_t j = 0; j < s; ++j) sum += a(i, j);
        worst = std::max(worst, static_cast<double>(std::fabs(sum - c(i))));
    }
    return worst;
}

ButcherTableau ButcherTableau::with_weight(std::size_t i, double value) const {
    auto b = b_;
    b.at(i) = value;
    return ButcherTableau(c_, a_, std::move(b));
}

ButcherTableau ButcherTableau::with_entry(std::size_t i, std::size_t j, double value) const {
    if (i >= stages() || j >= stages()) throw InvalidArgument("tableau entry index out of range");
    auto a = a_;
    a[i * stages() + j] = value;
    return ButcherTableau(c_, std::move(a), b_);
}

// Closed forms are evaluated in long double and rounded once.
namespace {
using ld = long double;
double r(ld x) { return static_cast<double>(x); }
}  // namespace

ButcherTableau gauss2() {
    const ld s3 = std::sqrt(3.0L);
    return ButcherTableau({r(0.5L - s3 / 6), r(0.5L + s3 / 6)},
                          {0.25, r(0.25L - s3 / 6), r(0.25L + s3 / 6), 0.25},
                          {0.5, 0.5});
}

ButcherTableau radau1() {
    return ButcherTableau({0.0, r(2.0L / 3)},
                          {0.25, -0.25, 0.25, r(5.0L / 12)},
                          {0.25, 0.75});
}

ButcherTableau lobatto3c() {
    return ButcherTableau({0.0, 0.5, 1.0},
                          {r(1.0L / 6), r(-1.0L / 3), r(1.0L / 6),
                           r(1.0L / 6), r(5.0L / 12), r(-1.0L / 12),
                           r(1.0L / 6), r(2.0L / 3), r(1.0L / 6)},
                          {r(1.0L / 6), r(2.0L / 3), r(1.0L / 6)});
}

namespace {

struct Line {
    std::size_t number;
    std::vector<std::string_view> tokens;
};

std::vector<Line> tokenize(std::string_view source) {
    std::vector<Line> lines;
    std::size_t number = 0;
    while (!source.empty()) {
        ++number;
        const auto eol = source.find('\n');
        std::string_view line = source.substr(0, eol);
        source = eol == std::string_view::npos ? std::string_view{} : source.substr(eol + 1);
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);

        Line parsed{number, {}};
        std::size_t pos = 0;
        while (pos < line.size()) {
            while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
            std::size_t end = pos;
            while (end < line.size() && !std::isspace(static_cast<unsigned char>(line[end]))) ++end;
            if (end > pos) parsed.tokens.push_back(line.substr(pos, end - pos));
            pos = end;
        }
        if (!parsed.tokens.empty()) lines.push_back(std::move(parsed));
    }
    return lines;
}

ld parse_decimal(std::string_view token, std::size_t line) {
    // from_chars has no long double overload in libstdc++; strtold needs a
    // terminated buffer.
    const std::string buf(token);
    char* end = nullptr;
    errno = 0;
    const ld value = std::strtold(buf.c_str(), &end);
    if (end != buf.c_str() + buf.size() || buf.empty() || errno == ERANGE)
        throw ParseError("malformed number '" + buf + "'", line);
    if (!std::isfinite(value)) throw ParseError("non-finite number '" + buf + "'", line);
    return value;
}

double parse_value(std::string_view token, std::size_t line) {
    if (const auto slash = token.find('/'); slash != std::string_view::npos) {
        const ld p = parse_decimal(token.substr(0, slash), line);
        const ld q = parse_decimal(token.substr(slash + 1), line);
        if (q == 0.0L) throw ParseError("zero denominator in '" + std::string(token) + "'", line);
        return static_cast<double>(p / q);
    }
    return static_cast<double>(parse_decimal(token, line));
}

}  // namespace

LoadedTableau load_tableau(std::string_view source) {
    const auto lines = tokenize(source);
    if (lines.empty()) throw ParseError("empty tableau", 1);

    const auto& header = lines.front();
    if (header.tokens.size() != 1) throw ParseError("first line must hold only the stage count", header.number);
    std::size_t s = 0;
    const auto tok = header.tokens.front();
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), s);
    if (ec != std::errc{} || ptr != tok.data() + tok.size() || s == 0)
        throw ParseError("invalid stage count '" + std::string(tok) + "'", header.number);

    if (lines.size() != s + 2)
        throw DimensionMismatch("expected " + std::to_string(s + 2) + " non-empty lines for s=" + std::to_string(s) +
                                ", found " + std::to_string(lines.size()));

    std::vector<double> c(s), a(s * s), b;
    for (std::size_t i = 0; i < s; ++i) {
        const auto& row = lines[1 + i];
        if (row.tokens.size() != s + 1)
            throw DimensionMismatch("line " + std::to_string(row.number) + ": expected " + std::to_string(s + 1) +
                                    " entries (c followed by a row of A), found " +
                                    std::to_string(row.tokens.size()));
        c[i] = parse_value(row.tokens[0], row.number);
        for (std::size_t j = 0; j < s; ++j) a[i * s + j] = parse_value(row.tokens[1 + j], row.number);
    }
    const auto& last = lines.back();
    if (last.tokens.size() != s)
        throw DimensionMismatch("line " + std::to_string(last.number) + ": expected " + std::to_string(s) +
                                " weights, found " + std::to_string(last.tokens.size()));
    for (const auto t : last.tokens) b.push_back(parse_value(t, last.number));

    LoadedTableau out{ButcherTableau(std::move(c), std::move(a), std::move(b)), {}};
    const auto& t = out.tableau;
    constexpr double tolerance = 1e-12;
    for (std::size_t i = 0; i < s; ++i) {
        long double sum = 0.0L;
        for (std::size_t j = 0; j < s; ++j) sum += t.a(i, j);
        const double defect = static_cast<double>(sum - t.c(i));
        if (std::fabs(defect) > tolerance) {
            char msg[128];
            std::snprintf(msg, sizeof msg, "row %zu: sum_j a[i][j] - c[i] = %.3e", i, defect);
            out.warnings.emplace_back(msg);
        }
    }
    long double wsum = 0.0L;
    for (std::size_t i = 0; i < s; ++i) wsum += t.b(i);
    if (std::fabs(static_cast<double>(wsum - 1.0L)) > tolerance) {
        char msg[128];
        std::snprintf(msg, sizeof msg, "weights: sum_i b[i] - 1 = %.3e", static_cast<double>(wsum - 1.0L));
        out.warnings.emplace_back(msg);
    }
    return out;
}

LoadedTableau load_tableau_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open tableau file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return load_tableau(buf.str());
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what(), e.line());
    } catch (const DimensionMismatch& e) {
        throw DimensionMismatch(path + ": " + e.what());
    }
}

std::string serialize_tableau(const ButcherTableau& t) {
    const std::size_t s = t.stages();
    std::string out = std::to_string(s) + "\n";
    char buf[40];
    auto put = [&](double x, char sep) {
        std::snprintf(buf, sizeof buf, "%.17g", x);
        out += buf;
        out += sep;
    };
    for (std::size_t i = 0; i < s; ++i) {
        put(t.c(i), ' ');
        for (std::size_t j = 0; j < s; ++j) put(t.a(i, j), j + 1 == s ? '\n' : ' ');
    }
    for (std::size_t i = 0; i < s; ++i) put(t.b(i), i + 1 == s ? '\n' : ' ');
    return out;
}

}  // namespace fittedrk
