#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "core/svd.hpp"
#include "test_util.hpp"

using td::Matrix;

namespace {

double reconstruction_rel_error(const Matrix& m, const td::SvdResult& r) {
    Matrix us = r.u;
    for (size_t i = 0; i < us.rows(); ++i) {
        for (size_t j = 0; j < us.cols(); ++j) us(i, j) *= r.s[j];
    }
    Matrix rec = td::matmul_transB(us, r.v);
    double num = 0.0;
    for (size_t i = 0; i < rec.size(); ++i) {
        const double d = rec.values()[i] - m.values()[i];
        num += d * d;
    }
    const double den = td::frobenius_norm(m);
    return den == 0.0 ? std::sqrt(num) : std::sqrt(num) / den;
}

void check_contract(const Matrix& m, double tol = 1e-8) {
    td::SvdResult r = td::svd(m);
    const size_t k = std::min(m.rows(), m.cols());
    REQUIRE(r.s.size() == k);
    REQUIRE(r.u.rows() == m.rows());
    REQUIRE(r.u.cols() == k);
    REQUIRE(r.v.rows() == m.cols());
    REQUIRE(r.v.cols() == k);
    for (size_t i = 0; i + 1 < k; ++i) CHECK(r.s[i] >= r.s[i + 1]);
    for (double s : r.s) CHECK(s >= 0.0);
    CHECK(tdtest::max_orthonormality_defect(r.u) <= tol);
    CHECK(tdtest::max_orthonormality_defect(r.v) <= tol);
    CHECK(reconstruction_rel_error(m, r) <= tol);
}

}  // namespace

TEST_CASE("identity matrix has unit singular values") {
    td::SvdResult r = td::svd(Matrix::identity(3));
    CHECK(r.s == std::vector<double>{1.0, 1.0, 1.0});
}

TEST_CASE("diagonal matrix: values sorted, vectors are signed unit axes") {
    Matrix d(3, 3);
    d(0, 0) = 1.0;
    d(1, 1) = 3.0;
    d(2, 2) = 2.0;
    td::SvdResult r = td::svd(d);
    CHECK(r.s[0] == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(r.s[1] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(r.s[2] == doctest::Approx(1.0).epsilon(1e-12));
    // |U| and |V| must be permutations of the identity
    for (size_t j = 0; j < 3; ++j) {
        int u_ones = 0, v_ones = 0;
        for (size_t i = 0; i < 3; ++i) {
            const double au = std::abs(r.u(i, j));
            const double av = std::abs(r.v(i, j));
            if (au > 0.5) ++u_ones;
            else CHECK(au <= 1e-10);
            if (av > 0.5) ++v_ones;
            else CHECK(av <= 1e-10);
        }
        CHECK(u_ones == 1);
        CHECK(v_ones == 1);
    }
}

TEST_CASE("random 5x7 reconstructs within 1e-8") {
    td::Rng rng(11);
    check_contract(tdtest::random_matrix(5, 7, rng));
}

TEST_CASE("contract holds on random matrices up to 64x64") {
    td::Rng rng(12);
    for (int trial = 0; trial < 25; ++trial) {
        const size_t rows = 1 + rng.next_below(64);
        const size_t cols = 1 + rng.next_below(64);
        check_contract(tdtest::random_matrix(rows, cols, rng));
    }
}

TEST_CASE("rank-deficient and degenerate inputs keep orthonormal factors") {
    td::Rng rng(13);

    SUBCASE("outer product has one dominant singular value") {
        Matrix a(6, 4);
        std::vector<double> x(6), y(4);
        for (auto& v : x) v = rng.next_uniform(-1, 1);
        for (auto& v : y) v = rng.next_uniform(-1, 1);
        for (size_t i = 0; i < 6; ++i) {
            for (size_t j = 0; j < 4; ++j) a(i, j) = x[i] * y[j];
        }
        td::SvdResult r = td::svd(a);
        CHECK(tdtest::max_orthonormality_defect(r.u) <= 1e-8);
        CHECK(tdtest::max_orthonormality_defect(r.v) <= 1e-8);
        CHECK(r.s[1] <= 1e-10 * r.s[0]);
        CHECK(reconstruction_rel_error(a, r) <= 1e-8);
    }

    SUBCASE("zero matrix") {
        td::SvdResult r = td::svd(Matrix(4, 3));
        for (double s : r.s) CHECK(s == 0.0);
        CHECK(tdtest::max_orthonormality_defect(r.u) <= 1e-12);
        CHECK(tdtest::max_orthonormality_defect(r.v) <= 1e-12);
    }

    SUBCASE("single column") {
        Matrix c(5, 1, {3, 0, 4, 0, 0});
        td::SvdResult r = td::svd(c);
        CHECK(r.s[0] == doctest::Approx(5.0).epsilon(1e-14));
    }
}

TEST_CASE("non-finite input is rejected") {
    Matrix m(2, 2, {1.0, 2.0, std::numeric_limits<double>::quiet_NaN(), 0.0});
    CHECK_THROWS_AS(td::svd(m), td::InvalidArgumentError);
    Matrix inf(1, 2, {std::numeric_limits<double>::infinity(), 1.0});
    CHECK_THROWS_AS(td::svd(inf), td::InvalidArgumentError);
}

TEST_CASE("truncation rank caps and ignores numerical zeros") {
    std::vector<double> s = {10.0, 5.0, 1e-13, 0.0};
    CHECK(td::truncation_rank(s, 8) == 2);
    CHECK(td::truncation_rank(s, 1) == 1);
    CHECK(td::truncation_rank({0.0, 0.0}, 4) == 1);
}
