#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace fittedrk {

/// Coefficients (c, A, b) of an s-stage Runge-Kutta method.
///
/// The stage matrix is stored row-major. Instances are immutable once
/// constructed; the constructor checks that all three arrays agree on s.
class ButcherTableau {
public:
    ButcherTableau(std::vector<double> c, std::vector<double> a, std::vector<double> b);

    std::size_t stages() const noexcept { return c_.size(); }

    double c(std::size_t i) const { return c_[i]; }
    double a(std::size_t i, std::size_t j) const { return a_[i * stages() + j]; }
    double b(std::size_t i) const { return b_[i]; }

    const std::vector<double>& nodes() const noexcept { return c_; }
    const std::vector<double>& weights() const noexcept { return b_; }
    /// Row-major s*s stage matrix.
    const std::vector<double>& matrix() const noexcept { return a_; }

    /// True when some a(i, j) != 0 with i <= j.
    bool implicit() const noexcept;

    /// max_i |sum_j a(i, j) - c(i)|
    double row_sum_defect() const noexcept;

    /// Copies with a single coefficient replaced.
    ButcherTableau with_weight(std::size_t i, double value) const;
    ButcherTableau with_entry(std::size_t i, std::size_t j, double value) const;

    friend bool operator==(const ButcherTableau&, const ButcherTableau&) = default;

private:
    std::vector<double> c_;
    std::vector<double> a_;
    std::vector<double> b_;
};

/// Two-stage Gauss-Legendre collocation, order 4.
ButcherTableau gauss2();

/// Two-stage Radau IA, order 3.
ButcherTableau radau1();

/// Three-stage Lobatto IIIC, order 4.
ButcherTableau lobatto3c();

struct LoadedTableau {
    ButcherTableau tableau;
    /// Non-fatal consistency findings (row sums, weight sum).
    std::vector<std::string> warnings;
};

/// Parses the plain-text tableau format:
///
///     s
///     c[0]   a[0][0] ... a[0][s-1]
///     ...
///     c[s-1] a[s-1][0] ... a[s-1][s-1]
///     b[0] ... b[s-1]
///
/// Tokens are whitespace separated decimals or `p/q` rationals; everything
/// after `#` on a line is ignored. Throws ParseError on malformed input and
/// DimensionMismatch when a row has the wrong number of entries.
LoadedTableau load_tableau(std::string_view source);
LoadedTableau load_tableau_file(const std::string& path);

/// Writes `t` in the format accepted by load_tableau; values are printed
/// with 17 significant digits so the round trip is exact.
std::string serialize_tableau(const ButcherTableau& t);

}  // namespace fittedrk
