#pragma once

#include "fittedrk/tableau.hpp"

#include <cmath>
#include <random>
#include <vector>

namespace testsupport {

inline std::vector<double> logspace(double lo, double hi, int n) {
    std::vector<double> out;
    for (int k = 0; k < n; ++k) out.push_back(lo * std::pow(hi / lo, double(k) / (n - 1)));
    return out;
}

inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double lx = std::log(x[k]), ly = std::log(std::fabs(y[k]));
        sx += lx, sy += ly, sxx += lx * lx, sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// Random s-stage tableau with entries in [-1, 1] and c the row sums.
inline fittedrk::ButcherTableau random_tableau(std::mt19937_64& rng, std::size_t s) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> a(s * s), b(s), c(s, 0.0);
    for (auto& x : a) x = u(rng);
    for (auto& x : b) x = u(rng);
    for (std::size_t i = 0; i < s; ++i)
        for (std::size_t j = 0; j < s; ++j) c[i] += a[i * s + j];
    return {c, a, b};
}

}  // namespace testsupport
