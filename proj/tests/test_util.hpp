#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "core/rng.hpp"
#include "core/tensor.hpp"

namespace tdtest {

inline td::DenseTensor random_tensor(std::vector<size_t> shape, td::Rng& rng, double lo = -1.0,
                                     double hi = 1.0) {
    td::DenseTensor t(std::move(shape));
    for (size_t i = 0; i < t.size(); ++i) t[i] = rng.next_uniform(lo, hi);
    return t;
}

inline td::Matrix random_matrix(size_t rows, size_t cols, td::Rng& rng, double lo = -1.0,
                                double hi = 1.0) {
    td::Matrix m(rows, cols);
    for (double& x : m.values()) x = rng.next_uniform(lo, hi);
    return m;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0.0;
    for (size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

inline double max_orthonormality_defect(const td::Matrix& m) {
    td::Matrix g = td::gram(m);
    double defect = 0.0;
    for (size_t i = 0; i < g.rows(); ++i) {
        for (size_t j = 0; j < g.cols(); ++j) {
            defect = std::max(defect, std::abs(g(i, j) - (i == j ? 1.0 : 0.0)));
        }
    }
    return defect;
}

/// Scratch directory removed on destruction.
class TempDir {
  public:
    explicit TempDir(const std::string& stem) {
        path_ = std::filesystem::temp_directory_path() /
                (stem + "-" + std::to_string(::getpid()) + "-" +
                 std::to_string(counter_++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    const std::filesystem::path& path() const { return path_; }
    std::string file(const std::string& name) const { return (path_ / name).string(); }

  private:
    std::filesystem::path path_;
    static inline int counter_ = 0;
};

}  // namespace tdtest
