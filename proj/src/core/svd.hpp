#pragma once

#include <vector>

#include "tensor.hpp"

namespace td {

/// Thin SVD: m == u * diag(s) * v^T with k = min(rows, cols) columns in u and v.
struct SvdResult {
    Matrix u;               // rows x k, orthonormal columns
    std::vector<double> s;  // k singular values, non-increasing, >= 0
    Matrix v;               // cols x k, orthonormal columns
};

/// One-sided Jacobi (Hestenes) SVD. Sweeps rotate column pairs until every
/// pair satisfies |c_i . c_j| <= 1e-12 * |c_i| * |c_j|, capped at 100 sweeps.
/// Throws InvalidArgumentError on non-finite entries and NumericalError if
/// the sweep cap is reached without convergence.
SvdResult svd(const Matrix& m);

/// Number of singular values to keep under a bond/rank cap: counts values
/// above 1e-12 * s[0] so numerically-zero directions never inflate the rank,
/// and never returns less than 1.
size_t truncation_rank(const std::vector<double>& s, size_t cap);

}  // namespace td
