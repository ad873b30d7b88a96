#include "tdf_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <vector>

namespace td {

namespace {

constexpr unsigned char kTensorMagic[4] = {0x54, 0x44, 0x46, 0x31};   // "TDF1"
constexpr unsigned char kFactorsMagic[4] = {0x54, 0x44, 0x46, 0x43};  // "TDFC"
constexpr unsigned char kDtypeF64LE = 1;

static_assert(std::endian::native == std::endian::little,
              "TDF readers/writers assume a little-endian host");

void put_u32(std::ostream& os, uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                          static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
    os.write(reinterpret_cast<const char*>(b), 4);
}

uint32_t get_u32(std::istream& is) {
    unsigned char b[4];
    if (!is.read(reinterpret_cast<char*>(b), 4)) {
        throw IoError("unexpected end of file while reading u32");
    }
    return static_cast<uint32_t>(b[0]) | (static_cast<uint32_t>(b[1]) << 8) |
           (static_cast<uint32_t>(b[2]) << 16) | (static_cast<uint32_t>(b[3]) << 24);
}

void put_u16(std::ostream& os, uint16_t v) {
    unsigned char b[2] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8)};
    os.write(reinterpret_cast<const char*>(b), 2);
}

uint16_t get_u16(std::istream& is) {
    unsigned char b[2];
    if (!is.read(reinterpret_cast<char*>(b), 2)) {
        throw IoError("unexpected end of file while reading u16");
    }
    return static_cast<uint16_t>(b[0] | (b[1] << 8));
}

unsigned char method_tag(Method m) {
    switch (m) {
        case Method::CP: return 1;
        case Method::Tucker: return 2;
        case Method::TT: return 3;
    }
    return 0;
}

}  // namespace

void write_tensor(std::ostream& os, const DenseTensor& t) {
    os.write(reinterpret_cast<const char*>(kTensorMagic), 4);
    const unsigned char dtype = kDtypeF64LE;
    const unsigned char order = static_cast<unsigned char>(t.order());
    os.write(reinterpret_cast<const char*>(&dtype), 1);
    os.write(reinterpret_cast<const char*>(&order), 1);
    for (size_t e : t.shape()) {
        if (e > 0xffffffffull) throw IoError("tensor extent exceeds TDF1 u32 range");
        put_u32(os, static_cast<uint32_t>(e));
    }
    os.write(reinterpret_cast<const char*>(t.data()),
             static_cast<std::streamsize>(t.size() * sizeof(double)));
    if (!os) throw IoError("failed writing TDF1 payload");
}

DenseTensor read_tensor(std::istream& is) {
    unsigned char magic[4];
    if (!is.read(reinterpret_cast<char*>(magic), 4)) {
        throw IoError("truncated TDF1 file: missing magic");
    }
    if (std::memcmp(magic, kTensorMagic, 4) != 0) {
        throw IoError("bad TDF1 magic");
    }
    unsigned char dtype = 0, order = 0;
    if (!is.read(reinterpret_cast<char*>(&dtype), 1) || !is.read(reinterpret_cast<char*>(&order), 1)) {
        throw IoError("truncated TDF1 header");
    }
    if (dtype != kDtypeF64LE) {
        throw IoError("unsupported TDF1 dtype tag " + std::to_string(dtype));
    }
    if (order == 0) throw IoError("TDF1 order must be >= 1");
    std::vector<size_t> shape(order);
    size_t volume = 1;
    for (auto& e : shape) {
        e = get_u32(is);
        if (e == 0) throw IoError("TDF1 extent must be >= 1");
        volume *= e;
    }
    std::vector<double> data(volume);
    if (!is.read(reinterpret_cast<char*>(data.data()),
                 static_cast<std::streamsize>(volume * sizeof(double)))) {
        throw IoError("TDF1 payload shorter than shape volume");
    }
    return DenseTensor(std::move(shape), std::move(data));
}

void write_tensor_file(const std::string& path, const DenseTensor& t) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open '" + path + "' for writing");
    write_tensor(os, t);
}

DenseTensor read_tensor_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open '" + path + "' for reading");
    DenseTensor t = read_tensor(is);
    // A trailing-byte check keeps payload-length mismatches from passing.
    char extra;
    if (is.read(&extra, 1)) {
        throw IoError("TDF1 payload longer than shape volume in '" + path + "'");
    }
    return t;
}

Matrix tensor_to_matrix(const DenseTensor& t) {
    if (t.order() != 2) throw InvalidArgumentError("expected an order-2 tensor");
    return Matrix(t.extent(0), t.extent(1), t.values());
}

DenseTensor matrix_to_tensor(const Matrix& m) {
    return DenseTensor({m.rows(), m.cols()}, m.values());
}

void write_factors_file(const std::string& path, const AnyFactors& f) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open '" + path + "' for writing");
    os.write(reinterpret_cast<const char*>(kFactorsMagic), 4);
    const unsigned char tag = method_tag(factors_method(f));
    const unsigned char reserved = 0;
    os.write(reinterpret_cast<const char*>(&tag), 1);
    os.write(reinterpret_cast<const char*>(&reserved), 1);

    std::vector<uint32_t> ranks;
    std::vector<DenseTensor> parts;
    if (const auto* cp = std::get_if<CPFactors>(&f)) {
        ranks.push_back(static_cast<uint32_t>(cp->rank));
        parts.emplace_back(std::vector<size_t>{cp->weights.size()}, cp->weights);
        for (const Matrix& m : cp->factors) parts.push_back(matrix_to_tensor(m));
    } else if (const auto* tk = std::get_if<TuckerFactors>(&f)) {
        for (size_t e : tk->core.shape()) ranks.push_back(static_cast<uint32_t>(e));
        parts.push_back(tk->core);
        for (const Matrix& m : tk->factors) parts.push_back(matrix_to_tensor(m));
    } else {
        const auto& tt = std::get<TTCores>(f);
        for (size_t r : tt.bond_ranks()) ranks.push_back(static_cast<uint32_t>(r));
        for (const DenseTensor& c : tt.cores) parts.push_back(c);
    }

    put_u16(os, static_cast<uint16_t>(ranks.size()));
    for (uint32_t r : ranks) put_u32(os, r);
    put_u32(os, static_cast<uint32_t>(parts.size()));
    for (const DenseTensor& p : parts) write_tensor(os, p);
    if (!os) throw IoError("failed writing TDFC container");
}

AnyFactors read_factors_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open '" + path + "' for reading");
    unsigned char magic[4];
    if (!is.read(reinterpret_cast<char*>(magic), 4) || std::memcmp(magic, kFactorsMagic, 4) != 0) {
        throw IoError("bad TDFC magic");
    }
    unsigned char tag = 0, reserved = 0;
    if (!is.read(reinterpret_cast<char*>(&tag), 1) || !is.read(reinterpret_cast<char*>(&reserved), 1)) {
        throw IoError("truncated TDFC header");
    }
    const uint16_t rank_count = get_u16(is);
    std::vector<uint32_t> ranks(rank_count);
    for (auto& r : ranks) r = get_u32(is);
    const uint32_t part_count = get_u32(is);
    std::vector<DenseTensor> parts;
    parts.reserve(part_count);
    for (uint32_t i = 0; i < part_count; ++i) parts.push_back(read_tensor(is));

    if (tag == 1) {
        if (parts.size() < 2 || parts[0].order() != 1) throw IoError("malformed CP container");
        CPFactors cp;
        cp.rank = ranks.empty() ? 0 : ranks[0];
        cp.weights = parts[0].values();
        for (size_t i = 1; i < parts.size(); ++i) cp.factors.push_back(tensor_to_matrix(parts[i]));
        cp.validate();
        return cp;
    }
    if (tag == 2) {
        if (parts.empty()) throw IoError("malformed Tucker container");
        TuckerFactors tk{std::move(parts[0]), {}};
        for (size_t i = 1; i < parts.size(); ++i) tk.factors.push_back(tensor_to_matrix(parts[i]));
        tk.validate();
        return tk;
    }
    if (tag == 3) {
        TTCores tt{std::move(parts)};
        tt.validate();
        return tt;
    }
    throw IoError("unknown TDFC method tag " + std::to_string(tag));
}

}  // namespace td
