#include "tensor.hpp"

#include <cmath>
#include <sstream>

namespace td {

namespace {

size_t checked_volume(std::span<const size_t> shape) {
    if (shape.empty()) {
        throw InvalidArgumentError("tensor shape must have at least one mode");
    }
    size_t n = 1;
    for (size_t e : shape) {
        if (e == 0) {
            throw InvalidArgumentError("tensor extents must be >= 1");
        }
        n *= e;
    }
    return n;
}

}  // namespace

DenseTensor::DenseTensor(std::vector<size_t> shape) : shape_(std::move(shape)) {
    data_.assign(checked_volume(shape_), 0.0);
}

DenseTensor::DenseTensor(std::vector<size_t> shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
    size_t n = checked_volume(shape_);
    if (data_.size() != n) {
        throw InvalidArgumentError("tensor data length " + std::to_string(data_.size()) +
                                   " does not match shape volume " + std::to_string(n));
    }
}

size_t DenseTensor::flat_index(std::span<const size_t> idx) const {
    if (idx.size() != shape_.size()) {
        throw InvalidArgumentError("multi-index order mismatch");
    }
    size_t f = 0;
    for (size_t k = 0; k < shape_.size(); ++k) {
        if (idx[k] >= shape_[k]) {
            throw InvalidArgumentError("multi-index out of range");
        }
        f = f * shape_[k] + idx[k];
    }
    return f;
}

size_t DenseTensor::stride(int mode) const {
    size_t s = 1;
    for (size_t k = static_cast<size_t>(mode) + 1; k < shape_.size(); ++k) {
        s *= shape_[k];
    }
    return s;
}

Matrix::Matrix(size_t rows, size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
        throw InvalidArgumentError("matrix data length does not match rows*cols");
    }
}

Matrix Matrix::identity(size_t n) {
    Matrix m(n, n);
    for (size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix unfold(const DenseTensor& t, int mode) {
    if (mode < 0 || mode >= t.order()) {
        throw InvalidArgumentError("unfold: mode " + std::to_string(mode) +
                                   " out of range for order " + std::to_string(t.order()));
    }
    const size_t extent = t.extent(mode);
    const size_t stride = t.stride(mode);
    const size_t block = stride * extent;
    const size_t cols = t.size() / extent;
    Matrix m(extent, cols);
    const double* src = t.data();
    for (size_t f = 0; f < t.size(); ++f) {
        const size_t row = (f / stride) % extent;
        const size_t col = (f / block) * stride + f % stride;
        m(row, col) = src[f];
    }
    return m;
}

DenseTensor fold(const Matrix& m, int mode, std::span<const size_t> shape) {
    const size_t order = shape.size();
    if (mode < 0 || static_cast<size_t>(mode) >= order) {
        throw InvalidArgumentError("fold: mode out of range");
    }
    DenseTensor t(std::vector<size_t>(shape.begin(), shape.end()));
    if (m.rows() != t.extent(mode) || m.cols() != t.size() / t.extent(mode)) {
        throw InvalidArgumentError("fold: matrix " + std::to_string(m.rows()) + "x" +
                                   std::to_string(m.cols()) + " inconsistent with shape " +
                                   shape_to_string(shape) + " at mode " + std::to_string(mode));
    }
    const size_t extent = t.extent(mode);
    const size_t stride = t.stride(mode);
    const size_t block = stride * extent;
    double* dst = t.data();
    for (size_t f = 0; f < t.size(); ++f) {
        const size_t row = (f / stride) % extent;
        const size_t col = (f / block) * stride + f % stride;
        dst[f] = m(row, col);
    }
    return t;
}

DenseTensor mode_n_product(const DenseTensor& t, const Matrix& m, int mode) {
    if (mode < 0 || mode >= t.order()) {
        throw InvalidArgumentError("mode_n_product: mode out of range");
    }
    if (m.cols() != t.extent(mode)) {
        throw InvalidArgumentError("mode_n_product: matrix has " + std::to_string(m.cols()) +
                                   " cols but tensor extent along mode " + std::to_string(mode) +
                                   " is " + std::to_string(t.extent(mode)));
    }
    Matrix prod = matmul(m, unfold(t, mode));
    std::vector<size_t> new_shape = t.shape();
    new_shape[static_cast<size_t>(mode)] = m.rows();
    return fold(prod, mode, new_shape);
}

Matrix khatri_rao(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.cols()) {
        throw InvalidArgumentError("khatri_rao: column counts differ");
    }
    Matrix out(a.rows() * b.rows(), a.cols());
    for (size_t ia = 0; ia < a.rows(); ++ia) {
        for (size_t ib = 0; ib < b.rows(); ++ib) {
            double* orow = out.row(ia * b.rows() + ib);
            const double* arow = a.row(ia);
            const double* brow = b.row(ib);
            for (size_t c = 0; c < a.cols(); ++c) {
                orow[c] = arow[c] * brow[c];
            }
        }
    }
    return out;
}

double frobenius_norm(std::span<const double> v) {
    // Kahan-compensated sum keeps the norm invariant under element reordering
    // (unfoldings of the same tensor must agree to ~1e-12 relative).
    double sum = 0.0, comp = 0.0;
    for (double x : v) {
        double term = x * x - comp;
        double next = sum + term;
        comp = (next - sum) - term;
        sum = next;
    }
    return std::sqrt(sum);
}

double frobenius_norm(const DenseTensor& t) { return frobenius_norm(std::span(t.values())); }
double frobenius_norm(const Matrix& m) { return frobenius_norm(std::span(m.values())); }

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) {
        throw InvalidArgumentError("matmul: inner dimensions differ");
    }
    Matrix out(a.rows(), b.cols());
    const size_t n = b.cols();
    for (size_t i = 0; i < a.rows(); ++i) {
        double* orow = out.row(i);
        const double* arow = a.row(i);
        for (size_t k = 0; k < a.cols(); ++k) {
            const double aik = arow[k];
            const double* brow = b.row(k);
            for (size_t j = 0; j < n; ++j) {
                orow[j] += aik * brow[j];
            }
        }
    }
    return out;
}

Matrix matmul_transB(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.cols()) {
        throw InvalidArgumentError("matmul_transB: inner dimensions differ");
    }
    Matrix out(a.rows(), b.rows());
    for (size_t i = 0; i < a.rows(); ++i) {
        const double* arow = a.row(i);
        double* orow = out.row(i);
        for (size_t j = 0; j < b.rows(); ++j) {
            const double* brow = b.row(j);
            double s = 0.0;
            for (size_t k = 0; k < a.cols(); ++k) {
                s += arow[k] * brow[k];
            }
            orow[j] = s;
        }
    }
    return out;
}

Matrix matmul_transA(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows()) {
        throw InvalidArgumentError("matmul_transA: inner dimensions differ");
    }
    Matrix out(a.cols(), b.cols());
    for (size_t k = 0; k < a.rows(); ++k) {
        const double* arow = a.row(k);
        const double* brow = b.row(k);
        for (size_t i = 0; i < a.cols(); ++i) {
            const double aki = arow[i];
            double* orow = out.row(i);
            for (size_t j = 0; j < b.cols(); ++j) {
                orow[j] += aki * brow[j];
            }
        }
    }
    return out;
}

Matrix transpose(const Matrix& m) {
    Matrix out(m.cols(), m.rows());
    for (size_t i = 0; i < m.rows(); ++i) {
        for (size_t j = 0; j < m.cols(); ++j) {
            out(j, i) = m(i, j);
        }
    }
    return out;
}

Matrix gram(const Matrix& m) { return matmul_transA(m, m); }

Matrix solve(Matrix a, Matrix b) {
    if (a.rows() != a.cols() || a.rows() != b.rows()) {
        throw InvalidArgumentError("solve: dimension mismatch");
    }
    const size_t n = a.rows();
    const size_t c = b.cols();
    for (size_t k = 0; k < n; ++k) {
        size_t piv = k;
        double best = std::abs(a(k, k));
        for (size_t i = k + 1; i < n; ++i) {
            double v = std::abs(a(i, k));
            if (v > best) {
                best = v;
                piv = i;
            }
        }
        if (best == 0.0 || !std::isfinite(best)) {
            throw NumericalError("solve: singular or non-finite pivot at row " + std::to_string(k));
        }
        if (piv != k) {
            for (size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
            for (size_t j = 0; j < c; ++j) std::swap(b(k, j), b(piv, j));
        }
        const double inv = 1.0 / a(k, k);
        for (size_t i = k + 1; i < n; ++i) {
            const double f = a(i, k) * inv;
            if (f == 0.0) continue;
            for (size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
            for (size_t j = 0; j < c; ++j) b(i, j) -= f * b(k, j);
        }
    }
    for (size_t k = n; k-- > 0;) {
        const double inv = 1.0 / a(k, k);
        for (size_t j = 0; j < c; ++j) {
            double s = b(k, j);
            for (size_t i = k + 1; i < n; ++i) {
                s -= a(k, i) * b(i, j);
            }
            b(k, j) = s * inv;
        }
    }
    return b;
}

bool all_finite(std::span<const double> v) {
    for (double x : v) {
        if (!std::isfinite(x)) return false;
    }
    return true;
}

std::string shape_to_string(std::span<const size_t> shape) {
    std::ostringstream os;
    os << "[";
    for (size_t i = 0; i < shape.size(); ++i) {
        if (i) os << ",";
        os << shape[i];
    }
    os << "]";
    return os.str();
}

}  // namespace td
