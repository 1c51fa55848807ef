#include "bpinterp/linalg.hpp"

#include <cassert>
#include <cmath>
#include <limits>

namespace bpinterp {

double dot(std::span<const double> a, std::span<const double> b) {
    assert(a.size() == b.size());
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm_l1(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += std::fabs(x);
    return s;
}

double norm_l2sq(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return s;
}

double norm_l2(std::span<const double> v) { return std::sqrt(norm_l2sq(v)); }

double norm_linf(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s = std::max(s, std::fabs(x));
    return s;
}

Vector matvec(const Matrix& a, std::span<const double> x) {
    assert(x.size() == a.cols());
    Vector y(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) y[i] = dot(a.row(i), x);
    return y;
}

Vector matvec_transposed(const Matrix& a, std::span<const double> x) {
    assert(x.size() == a.rows());
    Vector y(a.cols(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const double xi = x[i];
        if (xi == 0.0) continue;
        auto row = a.row(i);
        for (std::size_t j = 0; j < a.cols(); ++j) y[j] += xi * row[j];
    }
    return y;
}

SpdResult solve_spd(const Matrix& m, std::span<const double> v) {
    assert(m.rows() == m.cols());
    assert(v.size() == m.rows());
    const std::size_t p = m.rows();

    double max_diag = 0.0;
    for (std::size_t i = 0; i < p; ++i) max_diag = std::max(max_diag, std::fabs(m(i, i)));
    const double pivot_floor =
        static_cast<double>(p) * std::numeric_limits<double>::epsilon() * max_diag;

    // Lower-triangular factor, stored dense.
    Matrix l(p, p);
    for (std::size_t j = 0; j < p; ++j) {
        double diag = m(j, j);
        for (std::size_t k = 0; k < j; ++k) diag -= l(j, k) * l(j, k);
        if (!(diag > pivot_floor)) return {SpdStatus::NotPositiveDefinite, {}};
        const double ljj = std::sqrt(diag);
        l(j, j) = ljj;
        for (std::size_t i = j + 1; i < p; ++i) {
            double s = m(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            l(i, j) = s / ljj;
        }
    }

    // Forward then backward substitution.
    Vector y(p);
    for (std::size_t i = 0; i < p; ++i) {
        double s = v[i];
        for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * y[k];
        y[i] = s / l(i, i);
    }
    Vector x(p);
    for (std::size_t ii = p; ii-- > 0;) {
        double s = y[ii];
        for (std::size_t k = ii + 1; k < p; ++k) s -= l(k, ii) * x[k];
        x[ii] = s / l(ii, ii);
    }
    return {SpdStatus::Ok, std::move(x)};
}

} // namespace bpinterp
