#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>

#include "core/decomp.hpp"
#include "core/tdf_io.hpp"
#include "test_util.hpp"

using td::DenseTensor;
using td::Matrix;

TEST_CASE("TDF1 round trip preserves shape and bits") {
    tdtest::TempDir dir("tdf-roundtrip");
    td::Rng rng(21);
    DenseTensor t = tdtest::random_tensor({3, 1, 4, 2}, rng);
    const std::string path = dir.file("t.tdf");
    td::write_tensor_file(path, t);
    DenseTensor back = td::read_tensor_file(path);
    CHECK(back.shape() == t.shape());
    CHECK(back.values() == t.values());
}

TEST_CASE("TDF1 readers reject malformed files") {
    tdtest::TempDir dir("tdf-reject");
    td::Rng rng(22);
    DenseTensor t = tdtest::random_tensor({2, 3}, rng);
    const std::string good = dir.file("good.tdf");
    td::write_tensor_file(good, t);

    auto corrupt = [&](const std::string& name, auto mutate) {
        std::ifstream in(good, std::ios::binary);
        std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        mutate(bytes);
        const std::string path = dir.file(name);
        std::ofstream out(path, std::ios::binary);
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        out.close();
        return path;
    };

    SUBCASE("wrong magic") {
        auto path = corrupt("magic.tdf", [](std::string& b) { b[0] = 'X'; });
        CHECK_THROWS_AS(td::read_tensor_file(path), td::IoError);
    }
    SUBCASE("wrong dtype tag") {
        auto path = corrupt("dtype.tdf", [](std::string& b) { b[4] = 2; });
        CHECK_THROWS_AS(td::read_tensor_file(path), td::IoError);
    }
    SUBCASE("payload too short") {
        auto path = corrupt("short.tdf", [](std::string& b) { b.resize(b.size() - 8); });
        CHECK_THROWS_AS(td::read_tensor_file(path), td::IoError);
    }
    SUBCASE("payload too long") {
        auto path = corrupt("long.tdf", [](std::string& b) { b += std::string(8, '\0'); });
        CHECK_THROWS_AS(td::read_tensor_file(path), td::IoError);
    }
    SUBCASE("missing file") {
        CHECK_THROWS_AS(td::read_tensor_file(dir.file("nope.tdf")), td::IoError);
    }
}

TEST_CASE("TDFC container round-trips factors of every method") {
    tdtest::TempDir dir("tdfc");
    td::Rng rng(23);

    SUBCASE("cp") {
        td::CPFactors cp;
        cp.rank = 2;
        cp.weights = {1.5, 0.5};
        cp.factors.push_back(tdtest::random_matrix(3, 2, rng));
        cp.factors.push_back(tdtest::random_matrix(4, 2, rng));
        cp.factors.push_back(tdtest::random_matrix(2, 2, rng));
        const std::string path = dir.file("cp.tdfc");
        td::write_factors_file(path, cp);
        td::AnyFactors back = td::read_factors_file(path);
        const auto& got = std::get<td::CPFactors>(back);
        CHECK(got.rank == 2);
        CHECK(got.weights == cp.weights);
        for (size_t k = 0; k < 3; ++k) CHECK(got.factors[k].values() == cp.factors[k].values());
        CHECK(td::reconstruct(back).values() == td::reconstruct(cp).values());
    }

    SUBCASE("tucker") {
        td::TuckerFactors tk;
        tk.core = tdtest::random_tensor({2, 2}, rng);
        tk.factors.push_back(tdtest::random_matrix(4, 2, rng));
        tk.factors.push_back(tdtest::random_matrix(3, 2, rng));
        const std::string path = dir.file("tk.tdfc");
        td::write_factors_file(path, tk);
        const auto& got = std::get<td::TuckerFactors>(td::read_factors_file(path));
        CHECK(got.core.values() == tk.core.values());
        CHECK(got.factors[1].values() == tk.factors[1].values());
    }

    SUBCASE("tt") {
        td::TTCores tt;
        tt.cores.push_back(tdtest::random_tensor({1, 3, 2}, rng));
        tt.cores.push_back(tdtest::random_tensor({2, 4, 2}, rng));
        tt.cores.push_back(tdtest::random_tensor({2, 2, 1}, rng));
        const std::string path = dir.file("tt.tdfc");
        td::write_factors_file(path, tt);
        const auto& got = std::get<td::TTCores>(td::read_factors_file(path));
        REQUIRE(got.cores.size() == 3);
        for (size_t k = 0; k < 3; ++k) CHECK(got.cores[k].values() == tt.cores[k].values());
        CHECK(got.bond_ranks() == std::vector<size_t>{1, 2, 2, 1});
    }

    SUBCASE("bad magic is rejected") {
        const std::string path = dir.file("bad.tdfc");
        std::ofstream out(path, std::ios::binary);
        out << "NOPE" << std::string(16, '\0');
        out.close();
        CHECK_THROWS_AS(td::read_factors_file(path), td::IoError);
    }
}
