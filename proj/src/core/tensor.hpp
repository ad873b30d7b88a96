#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "error.hpp"

namespace td {

/// Dense N-dimensional tensor of doubles, row-major (last index fastest).
/// Immutable by convention once constructed and filled; all operations on
/// tensors are pure functions returning new values.
class DenseTensor {
  public:
    /// Order-1 tensor of shape [1] holding 0; the smallest legal tensor.
    DenseTensor() : shape_{1}, data_{0.0} {}

    /// Zero-filled tensor. Rejects empty shapes and zero extents.
    explicit DenseTensor(std::vector<size_t> shape);
    DenseTensor(std::vector<size_t> shape, std::vector<double> data);

    int order() const { return static_cast<int>(shape_.size()); }
    size_t extent(int mode) const { return shape_[static_cast<size_t>(mode)]; }
    const std::vector<size_t>& shape() const { return shape_; }
    size_t size() const { return data_.size(); }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    std::vector<double>& values() { return data_; }
    const std::vector<double>& values() const { return data_; }

    double operator[](size_t flat) const { return data_[flat]; }
    double& operator[](size_t flat) { return data_[flat]; }

    /// Multi-index access; idx.size() must equal order().
    double at(std::span<const size_t> idx) const { return data_[flat_index(idx)]; }
    double& at(std::span<const size_t> idx) { return data_[flat_index(idx)]; }
    double at(std::initializer_list<size_t> idx) const {
        return at(std::span<const size_t>(idx.begin(), idx.size()));
    }

    size_t flat_index(std::span<const size_t> idx) const;

    /// Row-major stride of `mode` (product of extents of later modes).
    size_t stride(int mode) const;

    bool same_shape(const DenseTensor& other) const { return shape_ == other.shape_; }

  private:
    std::vector<size_t> shape_;
    std::vector<double> data_;
};

/// Dense row-major matrix. Factor matrices, unfoldings, model weights.
class Matrix {
  public:
    Matrix() : rows_(0), cols_(0) {}
    Matrix(size_t rows, size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}
    Matrix(size_t rows, size_t cols, std::vector<double> data);

    static Matrix identity(size_t n);

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }
    size_t size() const { return data_.size(); }

    double operator()(size_t r, size_t c) const { return data_[r * cols_ + c]; }
    double& operator()(size_t r, size_t c) { return data_[r * cols_ + c]; }
    const double* row(size_t r) const { return data_.data() + r * cols_; }
    double* row(size_t r) { return data_.data() + r * cols_; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    std::vector<double>& values() { return data_; }
    const std::vector<double>& values() const { return data_; }

  private:
    size_t rows_, cols_;
    std::vector<double> data_;
};

// ---- tensor <-> matrix reshaping -------------------------------------------
//
// Mode-n unfolding convention used throughout: rows are indexed by mode n;
// columns enumerate the remaining modes in increasing mode order, flattened
// row-major (the last remaining mode varies fastest). Equivalently, the
// column index of an element is its row-major flat index with mode n deleted:
//
//   col = (flat / (stride(n) * extent(n))) * stride(n) + flat % stride(n)
//
// fold() inverts this bit-exactly; mode-0 unfolding is a plain reshape.

Matrix unfold(const DenseTensor& t, int mode);
DenseTensor fold(const Matrix& m, int mode, std::span<const size_t> shape);

/// Mode-n product t x_n m: contracts m.cols against extent(mode), the result
/// has extent m.rows along `mode`.
DenseTensor mode_n_product(const DenseTensor& t, const Matrix& m, int mode);

/// Column-wise Kronecker product, (a.rows*b.rows) x a.cols.
/// Row (ia, ib) of the result is ia * b.rows + ib, matching the unfolding
/// convention above when factors are combined in increasing mode order.
Matrix khatri_rao(const Matrix& a, const Matrix& b);

double frobenius_norm(const DenseTensor& t);
double frobenius_norm(const Matrix& m);
double frobenius_norm(std::span<const double> v);

// ---- dense matrix algebra ---------------------------------------------------

Matrix matmul(const Matrix& a, const Matrix& b);
Matrix matmul_transB(const Matrix& a, const Matrix& b);  // a * b^T
Matrix matmul_transA(const Matrix& a, const Matrix& b);  // a^T * b
Matrix transpose(const Matrix& m);
Matrix gram(const Matrix& m);  // m^T * m

/// Solves a * x = b for x by Gaussian elimination with partial pivoting.
/// a is (n x n), b is (n x c). Throws NumericalError on a vanishing pivot.
Matrix solve(Matrix a, Matrix b);

bool all_finite(std::span<const double> v);

std::string shape_to_string(std::span<const size_t> shape);

}  // namespace td
