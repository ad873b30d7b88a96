#pragma once

#include <iosfwd>
#include <string>

#include "decomp.hpp"
#include "tensor.hpp"

namespace td {

// TDF1 tensor file: magic "TDF1", u8 dtype tag (1 = float64 little-endian),
// u8 order, then order x u32le extents, then the row-major float64 payload.
// TDFC factor container: magic "TDFC", u8 method tag (1=cp 2=tucker 3=tt),
// u8 reserved, u16le rank count, ranks as u32le, u32le tensor count, then
// the constituent tensors back to back in TDF1 framing.

void write_tensor(std::ostream& os, const DenseTensor& t);
DenseTensor read_tensor(std::istream& is);

void write_tensor_file(const std::string& path, const DenseTensor& t);
DenseTensor read_tensor_file(const std::string& path);

void write_factors_file(const std::string& path, const AnyFactors& f);
AnyFactors read_factors_file(const std::string& path);

Matrix tensor_to_matrix(const DenseTensor& t);
DenseTensor matrix_to_tensor(const Matrix& m);

}  // namespace td
