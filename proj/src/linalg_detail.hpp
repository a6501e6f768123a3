#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

namespace fittedrk::detail {

/// Determinant of a row-major n*n matrix: cofactor expansion for n <= 3,
/// LU with partial pivoting otherwise. `m` is taken by value.
template <typename T>
std::complex<T> determinant(std::vector<std::complex<T>> m, std::size_t n) {
    auto at = [&](std::size_t i, std::size_t j) -> std::complex<T>& { return m[i * n + j]; };
    switch (n) {
        case 1: return at(0, 0);
        case 2: return at(0, 0) * at(1, 1) - at(0, 1) * at(1, 0);
        case 3:
            return at(0, 0) * (at(1, 1) * at(2, 2) - at(1, 2) * at(2, 1)) -
                   at(0, 1) * (at(1, 0) * at(2, 2) - at(1, 2) * at(2, 0)) +
                   at(0, 2) * (at(1, 0) * at(2, 1) - at(1, 1) * at(2, 0));
        default: break;
    }
    std::complex<T> det = T(1);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t pivot = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(at(i, k)) > std::abs(at(pivot, k))) pivot = i;
        if (at(pivot, k) == std::complex<T>(0)) return T(0);
        if (pivot != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(at(k, j), at(pivot, j));
            det = -det;
        }
        det *= at(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            const auto f = at(i, k) / at(k, k);
            for (std::size_t j = k + 1; j < n; ++j) at(i, j) -= f * at(k, j);
        }
    }
    return det;
}

}  // namespace fittedrk::detail
