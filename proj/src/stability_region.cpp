#include "fittedrk/analysis.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <unordered_map>

namespace fittedrk {

namespace {

// Edge ids: horizontal edge from node (i, j) to (i+1, j) is 2*(j*nx+i),
// vertical edge from (i, j) to (i, j+1) is 2*(j*nx+i)+1.
struct Segment {
    std::uint64_t a;
    std::uint64_t b;
};

enum Side { kBottom, kRight, kTop, kLeft };

// log|R| rather than |R| - 1: for symmetric methods log|R| is odd across
// the imaginary axis, so interpolated crossings land on it exactly.
double level(double modulus) {
    // NaN and poles count as unstable.
    return std::isnan(modulus) ? std::numeric_limits<double>::infinity() : std::log(modulus);
}

// Zero crossing between nodes with values fp (at p) and fq (at q); t in [0, 1].
double crossing(double fp, double fq) {
    if (std::isinf(fp)) return 1.0;
    if (std::isinf(fq)) return 0.0;
    const double d = fp - fq;
    return d == 0.0 ? 0.5 : fp / d;
}

}  // namespace

std::vector<Polyline> unit_level_contours(const ModulusField& field) {
    const auto& w = field.window;
    const std::size_t nx = w.re_points, ny = w.im_points;
    if (nx < 2 || ny < 2) return {};

    auto f = [&](std::size_t i, std::size_t j) { return level(field.at(i, j)); };
    auto edge_id = [&](std::size_t i, std::size_t j, bool vertical) {
        return 2 * (static_cast<std::uint64_t>(j) * nx + i) + (vertical ? 1 : 0);
    };

    std::unordered_map<std::uint64_t, std::complex<double>> edge_point;
    std::vector<Segment> segments;

    for (std::size_t j = 0; j + 1 < ny; ++j) {
        for (std::size_t i = 0; i + 1 < nx; ++i) {
            const double bl = f(i, j), br = f(i + 1, j), tr = f(i + 1, j + 1), tl = f(i, j + 1);
            const int index = (bl < 0 ? 1 : 0) | (br < 0 ? 2 : 0) | (tr < 0 ? 4 : 0) | (tl < 0 ? 8 : 0);
            if (index == 0 || index == 15) continue;

            auto id = [&](Side side) {
                switch (side) {
                    case kBottom: return edge_id(i, j, false);
                    case kRight: return edge_id(i + 1, j, true);
                    case kTop: return edge_id(i, j + 1, false);
                    case kLeft: return edge_id(i, j, true);
                }
                return std::uint64_t{0};
            };
            auto point = [&](Side side) {
                const auto key = id(side);
                if (edge_point.count(key)) return key;
                const double x0 = w.re_at(i), x1 = w.re_at(i + 1), y0 = w.im_at(j), y1 = w.im_at(j + 1);
                std::complex<double> p;
                switch (side) {
                    case kBottom: p = {x0 + crossing(bl, br) * (x1 - x0), y0}; break;
                    case kRight: p = {x1, y0 + crossing(br, tr) * (y1 - y0)}; break;
                    case kTop: p = {x0 + crossing(tl, tr) * (x1 - x0), y1}; break;
                    case kLeft: p = {x0, y0 + crossing(bl, tl) * (y1 - y0)}; break;
                }
                edge_point.emplace(key, p);
                return key;
            };
            auto add = [&](Side s0, Side s1) { segments.push_back({point(s0), point(s1)}); };

            const bool centre_inside = (bl + br + tr + tl) / 4 < 0;
            switch (index) {
                case 1: case 14: add(kLeft, kBottom); break;
                case 2: case 13: add(kBottom, kRight); break;
                case 3: case 12: add(kLeft, kRight); break;
                case 4: case 11: add(kRight, kTop); break;
                case 6: case 9: add(kBottom, kTop); break;
                case 7: case 8: add(kLeft, kTop); break;
                case 5:
                    if (centre_inside) { add(kBottom, kRight); add(kLeft, kTop); }
                    else { add(kLeft, kBottom); add(kRight, kTop); }
                    break;
                case 10:
                    if (centre_inside) { add(kLeft, kBottom); add(kRight, kTop); }
                    else { add(kBottom, kRight); add(kLeft, kTop); }
                    break;
                default: break;
            }
        }
    }

    // Each edge is touched by at most two segments.
    std::unordered_map<std::uint64_t, std::array<std::int64_t, 2>> incident;
    for (std::size_t k = 0; k < segments.size(); ++k) {
        for (const auto e : {segments[k].a, segments[k].b}) {
            auto [it, fresh] = incident.try_emplace(e, std::array<std::int64_t, 2>{-1, -1});
            (it->second[0] < 0 ? it->second[0] : it->second[1]) = static_cast<std::int64_t>(k);
        }
    }

    std::vector<bool> used(segments.size(), false);
    auto next_segment = [&](std::uint64_t edge, std::int64_t from) -> std::int64_t {
        const auto& pair = incident.at(edge);
        const std::int64_t other = pair[0] == from ? pair[1] : pair[0];
        return other >= 0 && !used[static_cast<std::size_t>(other)] ? other : -1;
    };
    auto walk = [&](std::int64_t seg, std::uint64_t edge, std::vector<std::uint64_t>& chain) {
        // `edge` is the far end of `seg`, already in the chain.
        while (true) {
            const auto next = next_segment(edge, seg);
            if (next < 0) return;
            used[static_cast<std::size_t>(next)] = true;
            const auto& s = segments[static_cast<std::size_t>(next)];
            edge = s.a == edge ? s.b : s.a;
            chain.push_back(edge);
            seg = next;
        }
    };

    std::vector<Polyline> curves;
    for (std::size_t k = 0; k < segments.size(); ++k) {
        if (used[k]) continue;
        used[k] = true;
        const auto sk = static_cast<std::int64_t>(k);
        std::vector<std::uint64_t> forward{segments[k].a, segments[k].b};
        walk(sk, segments[k].b, forward);
        Polyline line;
        if (forward.size() > 2 && forward.back() == forward.front()) {
            forward.pop_back();
            line.closed = true;
        } else {
            std::vector<std::uint64_t> backward{segments[k].a};
            walk(sk, segments[k].a, backward);
            forward.insert(forward.begin(), backward.rbegin(), backward.rend() - 1);
        }
        line.points.reserve(forward.size());
        for (const auto e : forward) line.points.push_back(edge_point.at(e));
        curves.push_back(std::move(line));
    }
    return curves;
}

void write_contours_csv(std::ostream& out, const std::vector<Polyline>& curves) {
    out << "curve_id,re,im\n";
    char buf[96];
    for (std::size_t id = 0; id < curves.size(); ++id) {
        const auto& c = curves[id];
        auto row = [&](std::complex<double> p) {
            std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\n", id, p.real(), p.imag());
            out << buf;
        };
        for (const auto& p : c.points) row(p);
        if (c.closed && !c.points.empty()) row(c.points.front());
    }
}

}  // namespace fittedrk
