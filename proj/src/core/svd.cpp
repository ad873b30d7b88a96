#include "svd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace td {

namespace {

constexpr int kMaxSweeps = 100;
constexpr double kOrthTol = 1e-12;

// Orthonormal completion for (numerically) zero singular directions: picks
// the coordinate axis least represented by the columns accepted so far and
// projects it against them. `rows` holds column vectors as contiguous rows.
void complete_column(std::vector<std::vector<double>>& rows, size_t target, size_t len,
                     const std::vector<bool>& valid) {
    for (size_t cand = 0; cand < len; ++cand) {
        std::vector<double> v(len, 0.0);
        v[cand] = 1.0;
        for (size_t k = 0; k < rows.size(); ++k) {
            if (k == target || !valid[k]) continue;
            double d = 0.0;
            for (size_t r = 0; r < len; ++r) d += rows[k][r] * v[r];
            for (size_t r = 0; r < len; ++r) v[r] -= d * rows[k][r];
        }
        double n = frobenius_norm(std::span<const double>(v));
        if (n > 0.5) {
            for (size_t r = 0; r < len; ++r) rows[target][r] = v[r] / n;
            return;
        }
    }
    // Unreachable for len >= number of columns; keep the column as zero.
}

SvdResult svd_tall(const Matrix& m) {
    const size_t rows = m.rows();
    const size_t cols = m.cols();

    // Work on the transpose so each original column is a contiguous row.
    std::vector<std::vector<double>> a(cols, std::vector<double>(rows));
    for (size_t i = 0; i < rows; ++i) {
        for (size_t j = 0; j < cols; ++j) {
            a[j][i] = m(i, j);
        }
    }
    std::vector<std::vector<double>> v(cols, std::vector<double>(cols, 0.0));
    for (size_t j = 0; j < cols; ++j) v[j][j] = 1.0;

    bool converged = cols < 2;
    for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
        converged = true;
        for (size_t i = 0; i + 1 < cols; ++i) {
            for (size_t j = i + 1; j < cols; ++j) {
                double alpha = 0.0, beta = 0.0, gamma = 0.0;
                const double* ci = a[i].data();
                const double* cj = a[j].data();
                for (size_t r = 0; r < rows; ++r) {
                    alpha += ci[r] * ci[r];
                    beta += cj[r] * cj[r];
                    gamma += ci[r] * cj[r];
                }
                if (alpha == 0.0 || beta == 0.0) continue;
                if (std::abs(gamma) <= kOrthTol * std::sqrt(alpha * beta)) continue;
                converged = false;
                const double zeta = (beta - alpha) / (2.0 * gamma);
                const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                double* wi = a[i].data();
                double* wj = a[j].data();
                for (size_t r = 0; r < rows; ++r) {
                    const double x = wi[r];
                    const double y = wj[r];
                    wi[r] = c * x - s * y;
                    wj[r] = s * x + c * y;
                }
                double* vi = v[i].data();
                double* vj = v[j].data();
                for (size_t r = 0; r < cols; ++r) {
                    const double x = vi[r];
                    const double y = vj[r];
                    vi[r] = c * x - s * y;
                    vj[r] = s * x + c * y;
                }
            }
        }
    }
    if (!converged) {
        throw NumericalError("svd: Jacobi sweeps did not converge within " +
                             std::to_string(kMaxSweeps) + " sweeps");
    }

    std::vector<double> sigma(cols);
    for (size_t j = 0; j < cols; ++j) {
        sigma[j] = frobenius_norm(std::span<const double>(a[j]));
    }
    std::vector<size_t> order(cols);
    std::iota(order.begin(), order.end(), size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](size_t x, size_t y) { return sigma[x] > sigma[y]; });

    const double smax = sigma.empty() ? 0.0 : sigma[order[0]];
    std::vector<bool> valid(cols, true);
    for (size_t j = 0; j < cols; ++j) {
        if (sigma[j] <= smax * 1e-13) valid[j] = false;
    }
    for (size_t j = 0; j < cols; ++j) {
        if (valid[j]) {
            const double inv = 1.0 / sigma[j];
            for (size_t r = 0; r < rows; ++r) a[j][r] *= inv;
        }
    }
    // Numerically-null directions get a deterministic orthonormal fill-in so
    // u keeps orthonormal columns even for rank-deficient input.
    for (size_t j = 0; j < cols; ++j) {
        if (!valid[j]) {
            complete_column(a, j, rows, valid);
            valid[j] = true;
        }
    }

    SvdResult res{Matrix(rows, cols), std::vector<double>(cols), Matrix(cols, cols)};
    for (size_t k = 0; k < cols; ++k) {
        const size_t src = order[k];
        res.s[k] = sigma[src];
        for (size_t r = 0; r < rows; ++r) res.u(r, k) = a[src][r];
        for (size_t r = 0; r < cols; ++r) res.v(r, k) = v[src][r];
    }
    return res;
}

}  // namespace

SvdResult svd(const Matrix& m) {
    if (m.rows() == 0 || m.cols() == 0) {
        throw InvalidArgumentError("svd: empty matrix");
    }
    if (!all_finite(std::span(m.values()))) {
        throw InvalidArgumentError("svd: non-finite entries in input");
    }
    if (m.rows() >= m.cols()) {
        return svd_tall(m);
    }
    SvdResult r = svd_tall(transpose(m));
    return SvdResult{std::move(r.v), std::move(r.s), std::move(r.u)};
}

size_t truncation_rank(const std::vector<double>& s, size_t cap) {
    if (s.empty()) return 1;
    const double cutoff = s[0] * 1e-12;
    size_t significant = 0;
    for (double x : s) {
        if (x > cutoff) ++significant;
    }
    return std::max<size_t>(1, std::min(cap, significant));
}

}  // namespace td
