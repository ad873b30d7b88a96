#include "decomp.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

#include "rng.hpp"
#include "svd.hpp"

namespace td {

namespace {

constexpr double kCpRegularization = 1e-10;

void check_decomposable(const DenseTensor& t) {
    if (t.order() < 2) {
        throw InvalidArgumentError("decompose: tensor order must be >= 2");
    }
    if (!all_finite(std::span(t.values()))) {
        throw NumericalError("decompose: non-finite entries in input tensor");
    }
}

/// Khatri-Rao product of all factors except `skip`, combined in increasing
/// mode order. Row ordering then matches the unfold column convention.
Matrix kr_excluding(const std::vector<Matrix>& factors, size_t skip) {
    std::optional<Matrix> acc;
    for (size_t m = 0; m < factors.size(); ++m) {
        if (m == skip) continue;
        if (!acc) {
            acc = factors[m];
        } else {
            acc = khatri_rao(*acc, factors[m]);
        }
    }
    return std::move(*acc);
}

/// Normalizes columns in place; returns the column norms. Numerically-zero
/// columns become the first basis vector with weight 0.
std::vector<double> normalize_columns(Matrix& m) {
    std::vector<double> norms(m.cols(), 0.0);
    for (size_t c = 0; c < m.cols(); ++c) {
        double s = 0.0;
        for (size_t r = 0; r < m.rows(); ++r) s += m(r, c) * m(r, c);
        norms[c] = std::sqrt(s);
        if (norms[c] <= 1e-300) {
            norms[c] = 0.0;
            for (size_t r = 0; r < m.rows(); ++r) m(r, c) = 0.0;
            m(0, c) = 1.0;
        } else {
            const double inv = 1.0 / norms[c];
            for (size_t r = 0; r < m.rows(); ++r) m(r, c) *= inv;
        }
    }
    return norms;
}

Matrix truncated_left_vectors(const Matrix& unfolding, size_t rank) {
    SvdResult r = svd(unfolding);
    Matrix u(unfolding.rows(), rank);
    for (size_t i = 0; i < u.rows(); ++i) {
        for (size_t j = 0; j < rank; ++j) {
            u(i, j) = r.u(i, j);
        }
    }
    return u;
}

/// Projects t onto all factor subspaces except `skip` (pass factors.size()
/// to project every mode): Y = t x_k A_k^T for k != skip.
DenseTensor project_tucker(const DenseTensor& t, const std::vector<Matrix>& factors, size_t skip) {
    DenseTensor y = t;
    for (size_t k = 0; k < factors.size(); ++k) {
        if (k == skip) continue;
        y = mode_n_product(y, transpose(factors[k]), static_cast<int>(k));
    }
    return y;
}

double diff_norm(const DenseTensor& a, const DenseTensor& b) {
    std::vector<double> d(a.size());
    for (size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
    return frobenius_norm(std::span<const double>(d));
}

}  // namespace

Method method_from_string(const std::string& name) {
    std::string lower;
    lower.reserve(name.size());
    for (char c : name) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (lower == "cp") return Method::CP;
    if (lower == "tucker") return Method::Tucker;
    if (lower == "tt") return Method::TT;
    throw InvalidArgumentError("unknown decomposition method '" + name + "' (expected cp, tucker or tt)");
}

std::string method_name(Method m) {
    switch (m) {
        case Method::CP: return "cp";
        case Method::Tucker: return "tucker";
        case Method::TT: return "tt";
    }
    return "?";
}

void DecompSettings::validate() const {
    if (rank < 1) throw InvalidArgumentError("decomposition rank must be >= 1");
    if (max_iters < 1) throw InvalidArgumentError("max_iters must be >= 1");
    if (!(tolerance > 0.0)) throw InvalidArgumentError("tolerance must be > 0");
}

void CPFactors::validate() const {
    if (factors.empty()) throw InvalidArgumentError("CPFactors: no factor matrices");
    if (weights.size() != rank) throw InvalidArgumentError("CPFactors: weights length != rank");
    for (const Matrix& f : factors) {
        if (f.cols() != rank) throw InvalidArgumentError("CPFactors: factor column count != rank");
    }
}

std::vector<size_t> CPFactors::shape() const {
    std::vector<size_t> s;
    s.reserve(factors.size());
    for (const Matrix& f : factors) s.push_back(f.rows());
    return s;
}

void TuckerFactors::validate() const {
    if (static_cast<size_t>(core.order()) != factors.size()) {
        throw InvalidArgumentError("TuckerFactors: core order != factor count");
    }
    for (size_t k = 0; k < factors.size(); ++k) {
        if (factors[k].cols() != core.extent(static_cast<int>(k))) {
            throw InvalidArgumentError("TuckerFactors: factor/core rank mismatch at mode " +
                                       std::to_string(k));
        }
    }
}

std::vector<size_t> TuckerFactors::shape() const {
    std::vector<size_t> s;
    s.reserve(factors.size());
    for (const Matrix& f : factors) s.push_back(f.rows());
    return s;
}

void TTCores::validate() const {
    if (cores.empty()) throw InvalidArgumentError("TTCores: no cores");
    if (cores.front().extent(0) != 1 || cores.back().extent(2) != 1) {
        throw InvalidArgumentError("TTCores: boundary ranks must be 1");
    }
    for (const DenseTensor& c : cores) {
        if (c.order() != 3) throw InvalidArgumentError("TTCores: cores must have order 3");
    }
    for (size_t k = 0; k + 1 < cores.size(); ++k) {
        if (cores[k].extent(2) != cores[k + 1].extent(0)) {
            throw InvalidArgumentError("TTCores: bond rank mismatch between cores " +
                                       std::to_string(k) + " and " + std::to_string(k + 1));
        }
    }
}

std::vector<size_t> TTCores::shape() const {
    std::vector<size_t> s;
    s.reserve(cores.size());
    for (const DenseTensor& c : cores) s.push_back(c.extent(1));
    return s;
}

std::vector<size_t> TTCores::bond_ranks() const {
    std::vector<size_t> r;
    r.reserve(cores.size() + 1);
    r.push_back(cores.front().extent(0));
    for (const DenseTensor& c : cores) r.push_back(c.extent(2));
    return r;
}

double relative_error(const DenseTensor& t, const DenseTensor& t_hat) {
    if (!t.same_shape(t_hat)) {
        throw InvalidArgumentError("relative_error: shape mismatch");
    }
    std::vector<double> diff(t.size());
    for (size_t i = 0; i < t.size(); ++i) diff[i] = t[i] - t_hat[i];
    const double num = frobenius_norm(std::span<const double>(diff));
    const double den = frobenius_norm(t);
    if (den == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return num / den;
}

CPFactors cp_decompose(const DenseTensor& t, const DecompSettings& s, DecompStats* stats) {
    check_decomposable(t);
    s.validate();
    const size_t d = static_cast<size_t>(t.order());
    const size_t rank = s.rank;

    Rng rng(s.seed);
    CPFactors f;
    f.rank = rank;
    f.weights.assign(rank, 1.0);
    f.factors.reserve(d);
    for (size_t k = 0; k < d; ++k) {
        Matrix a(t.extent(static_cast<int>(k)), rank);
        for (double& x : a.values()) x = rng.next_uniform(-1.0, 1.0);
        f.factors.push_back(std::move(a));
    }

    std::vector<Matrix> unfoldings;
    unfoldings.reserve(d);
    for (size_t k = 0; k < d; ++k) unfoldings.push_back(unfold(t, static_cast<int>(k)));

    for (Matrix& a : f.factors) normalize_columns(a);
    std::vector<Matrix> grams(d);
    for (size_t k = 0; k < d; ++k) grams[k] = gram(f.factors[k]);

    const double scale = std::max(frobenius_norm(t), 1e-300);
    double prev_err = frobenius_norm(t);  // error of the empty model
    int iters = 0;
    for (int it = 1; it <= s.max_iters; ++it) {
        iters = it;
        for (size_t n = 0; n < d; ++n) {
            Matrix kr = kr_excluding(f.factors, n);
            Matrix mttkrp = matmul(unfoldings[n], kr);
            Matrix h(rank, rank);
            for (size_t i = 0; i < rank; ++i) {
                for (size_t j = 0; j < rank; ++j) {
                    double prod = 1.0;
                    for (size_t m = 0; m < d; ++m) {
                        if (m == n) continue;
                        prod *= grams[m](i, j);
                    }
                    h(i, j) = prod + (i == j ? kCpRegularization : 0.0);
                }
            }
            f.factors[n] = transpose(solve(std::move(h), transpose(mttkrp)));
            f.weights = normalize_columns(f.factors[n]);
            grams[n] = gram(f.factors[n]);
        }
        const double err = diff_norm(t, reconstruct(f));
        if (!std::isfinite(err)) {
            throw NumericalError("cp_decompose: non-finite reconstruction error at iteration " +
                                 std::to_string(it));
        }
        if (stats) stats->error_history.push_back(err);
        if (std::abs(prev_err - err) / scale < s.tolerance) {
            break;
        }
        prev_err = err;
    }
    if (stats) {
        stats->iterations = iters;
        stats->final_error = diff_norm(t, reconstruct(f));
    }
    return f;
}

TuckerFactors tucker_decompose(const DenseTensor& t, const DecompSettings& s, DecompStats* stats) {
    check_decomposable(t);
    s.validate();
    const size_t d = static_cast<size_t>(t.order());

    std::vector<size_t> ranks(d);
    for (size_t k = 0; k < d; ++k) {
        ranks[k] = std::min<size_t>(s.rank, t.extent(static_cast<int>(k)));
    }

    TuckerFactors f;
    f.factors.reserve(d);
    for (size_t k = 0; k < d; ++k) {
        f.factors.push_back(truncated_left_vectors(unfold(t, static_cast<int>(k)), ranks[k]));
    }

    const double norm_sq = frobenius_norm(t) * frobenius_norm(t);
    const double scale = std::max(std::sqrt(norm_sq), 1e-300);
    auto projected_error = [&](const DenseTensor& core) {
        const double core_norm = frobenius_norm(core);
        return std::sqrt(std::max(0.0, norm_sq - core_norm * core_norm));
    };

    DenseTensor core = project_tucker(t, f.factors, d);
    double prev_err = projected_error(core);
    if (stats) stats->error_history.push_back(prev_err);

    int iters = 0;
    for (int it = 1; it <= s.max_iters; ++it) {
        iters = it;
        for (size_t k = 0; k < d; ++k) {
            DenseTensor y = project_tucker(t, f.factors, k);
            f.factors[k] = truncated_left_vectors(unfold(y, static_cast<int>(k)), ranks[k]);
        }
        core = project_tucker(t, f.factors, d);
        const double err = projected_error(core);
        if (!std::isfinite(err)) {
            throw NumericalError("tucker_decompose: non-finite error at sweep " + std::to_string(it));
        }
        if (stats) stats->error_history.push_back(err);
        const double change = std::abs(prev_err - err) / scale;
        prev_err = err;
        if (change < s.tolerance) break;
    }

    f.core = std::move(core);
    if (stats) {
        stats->iterations = iters;
        stats->final_error = diff_norm(t, reconstruct(f));
    }
    return f;
}

TTCores tt_decompose(const DenseTensor& t, const DecompSettings& s, DecompStats* stats) {
    check_decomposable(t);
    s.validate();
    const size_t d = static_cast<size_t>(t.order());

    TTCores f;
    f.cores.reserve(d);
    double discarded_sq = 0.0;

    // Row-major layout makes every reshape below a reinterpretation of the
    // same buffer: (r, n*m) and (r*n, m) share storage.
    std::vector<double> w = t.values();
    size_t r_prev = 1;
    size_t rest = t.size();
    for (size_t k = 0; k + 1 < d; ++k) {
        const size_t n_k = t.extent(static_cast<int>(k));
        const size_t rows = r_prev * n_k;
        const size_t cols = rest / n_k;
        SvdResult sv = svd(Matrix(rows, cols, std::move(w)));
        const size_t r = truncation_rank(sv.s, s.rank);
        for (size_t i = r; i < sv.s.size(); ++i) discarded_sq += sv.s[i] * sv.s[i];

        std::vector<double> core_data(rows * r);
        for (size_t i = 0; i < rows; ++i) {
            for (size_t j = 0; j < r; ++j) core_data[i * r + j] = sv.u(i, j);
        }
        f.cores.emplace_back(std::vector<size_t>{r_prev, n_k, r}, std::move(core_data));

        w.assign(r * cols, 0.0);
        for (size_t i = 0; i < r; ++i) {
            const double si = sv.s[i];
            for (size_t j = 0; j < cols; ++j) w[i * cols + j] = si * sv.v(j, i);
        }
        r_prev = r;
        rest = cols;
    }
    f.cores.emplace_back(std::vector<size_t>{r_prev, t.extent(t.order() - 1), 1}, std::move(w));

    if (stats) {
        stats->iterations = 1;
        stats->tt_truncation_error = std::sqrt(discarded_sq);
        stats->final_error = diff_norm(t, reconstruct(f));
    }
    return f;
}

DenseTensor reconstruct(const CPFactors& f) {
    f.validate();
    const std::vector<size_t> shape = f.shape();
    if (f.factors.size() == 1) {
        Matrix out(f.factors[0].rows(), 1);
        for (size_t i = 0; i < out.rows(); ++i) {
            double s = 0.0;
            for (size_t r = 0; r < f.rank; ++r) s += f.weights[r] * f.factors[0](i, r);
            out(i, 0) = s;
        }
        return fold(out, 0, shape);
    }
    Matrix weighted = f.factors[0];
    for (size_t i = 0; i < weighted.rows(); ++i) {
        for (size_t r = 0; r < f.rank; ++r) weighted(i, r) *= f.weights[r];
    }
    Matrix kr = kr_excluding(f.factors, 0);
    return fold(matmul_transB(weighted, kr), 0, shape);
}

DenseTensor reconstruct(const TuckerFactors& f) {
    f.validate();
    DenseTensor t = f.core;
    for (size_t k = 0; k < f.factors.size(); ++k) {
        t = mode_n_product(t, f.factors[k], static_cast<int>(k));
    }
    return t;
}

DenseTensor reconstruct(const TTCores& f) {
    f.validate();
    const std::vector<size_t> shape = f.shape();
    const DenseTensor& g0 = f.cores[0];
    Matrix m(g0.extent(1), g0.extent(2), g0.values());
    for (size_t k = 1; k < f.cores.size(); ++k) {
        const DenseTensor& g = f.cores[k];
        const size_t r_in = g.extent(0);
        const size_t block = g.extent(1) * g.extent(2);
        m = matmul(m, Matrix(r_in, block, g.values()));
        m = Matrix(m.rows() * g.extent(1), g.extent(2), std::move(m.values()));
    }
    return DenseTensor(shape, std::move(m.values()));
}

AnyFactors decompose(const DenseTensor& t, const DecompSettings& s, DecompStats* stats) {
    switch (s.method) {
        case Method::CP: return cp_decompose(t, s, stats);
        case Method::Tucker: return tucker_decompose(t, s, stats);
        case Method::TT: return tt_decompose(t, s, stats);
    }
    throw InvalidArgumentError("decompose: bad method");
}

DenseTensor reconstruct(const AnyFactors& f) {
    return std::visit([](const auto& x) { return reconstruct(x); }, f);
}

Method factors_method(const AnyFactors& f) {
    if (std::holds_alternative<CPFactors>(f)) return Method::CP;
    if (std::holds_alternative<TuckerFactors>(f)) return Method::Tucker;
    return Method::TT;
}

}  // namespace td
