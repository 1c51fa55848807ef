#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace bpinterp {

using Vector = std::vector<double>;

// Dense row-major matrix. Kept deliberately small: the solvers in this
// library only need matvec products, column gathers and row sweeps.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
    std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

double dot(std::span<const double> a, std::span<const double> b);
double norm_l1(std::span<const double> v);
double norm_l2sq(std::span<const double> v);
double norm_l2(std::span<const double> v);
double norm_linf(std::span<const double> v);

// y = A x
Vector matvec(const Matrix& a, std::span<const double> x);
// y = A^T x
Vector matvec_transposed(const Matrix& a, std::span<const double> x);

enum class SpdStatus { Ok, NotPositiveDefinite };

struct SpdResult {
    SpdStatus status = SpdStatus::Ok;
    Vector x;
};

// Solves M u = v for symmetric positive definite M via an unpivoted
// Cholesky factorization. Reports NotPositiveDefinite when a pivot drops
// below p * eps * max(diag); callers that expect near-singular inputs
// retry with a small ridge on the diagonal.
SpdResult solve_spd(const Matrix& m, std::span<const double> v);

} // namespace bpinterp
