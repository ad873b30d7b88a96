#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "tensor.hpp"

namespace td {

enum class Method { CP, Tucker, TT };

Method method_from_string(const std::string& name);
std::string method_name(Method m);

struct DecompSettings {
    Method method = Method::TT;
    size_t rank = 32;
    int max_iters = 50;
    double tolerance = 1e-4;
    uint64_t seed = 0;

    void validate() const;
};

/// Sum of `rank` rank-one outer products. Factor columns are unit-norm with
/// the magnitudes absorbed into `weights`.
struct CPFactors {
    size_t rank = 0;
    std::vector<Matrix> factors;  // one per mode, extent_k x rank
    std::vector<double> weights;  // length rank, >= 0

    void validate() const;
    std::vector<size_t> shape() const;
};

/// Core tensor multiplied along each mode by an orthonormal factor.
struct TuckerFactors {
    DenseTensor core;             // shape = multilinear ranks
    std::vector<Matrix> factors;  // extent_k x rank_k

    void validate() const;
    std::vector<size_t> shape() const;
};

/// Chain of order-3 cores (r_{k-1}, n_k, r_k) with boundary ranks 1.
struct TTCores {
    std::vector<DenseTensor> cores;

    void validate() const;
    std::vector<size_t> shape() const;
    std::vector<size_t> bond_ranks() const;  // r_0 .. r_d
};

/// Per-run diagnostics. error_history holds the Frobenius reconstruction
/// error after each CP-ALS / HOOI sweep (HOOI history starts with the HOSVD
/// error); TT fills tt_truncation_error with sqrt(sum of discarded sigma^2).
struct DecompStats {
    std::vector<double> error_history;
    double final_error = 0.0;
    double tt_truncation_error = 0.0;
    int iterations = 0;
};

CPFactors cp_decompose(const DenseTensor& t, const DecompSettings& s, DecompStats* stats = nullptr);
TuckerFactors tucker_decompose(const DenseTensor& t, const DecompSettings& s,
                               DecompStats* stats = nullptr);
TTCores tt_decompose(const DenseTensor& t, const DecompSettings& s, DecompStats* stats = nullptr);

DenseTensor reconstruct(const CPFactors& f);
DenseTensor reconstruct(const TuckerFactors& f);
DenseTensor reconstruct(const TTCores& f);

using AnyFactors = std::variant<CPFactors, TuckerFactors, TTCores>;

/// Runs the decomposition selected by s.method.
AnyFactors decompose(const DenseTensor& t, const DecompSettings& s, DecompStats* stats = nullptr);
DenseTensor reconstruct(const AnyFactors& f);
Method factors_method(const AnyFactors& f);

/// Relative Frobenius reconstruction error ||t - t_hat|| / ||t|| (0 for a
/// zero tensor reconstructed as zero).
double relative_error(const DenseTensor& t, const DenseTensor& t_hat);

}  // namespace td
