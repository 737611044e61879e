#pragma once

// Binary tensor container, all integers little-endian:
//
//   offset  size   field
//   0       4      magic "LTRT"
//   4       4      u32 version (1)
//   8       4      u32 order j
//   12      4      u32 element type tag (1 = float64 little-endian)
//   16      8*j    u64 dims m_1..m_j
//   16+8j   8*N    payload, N = prod(dims), first index fastest

#include <cstdint>
#include <filesystem>
#include <string>

#include "logtr/tensor.hpp"

namespace logtr {

inline constexpr char kTensorFileMagic[4] = {'L', 'T', 'R', 'T'};
inline constexpr std::uint32_t kTensorFileVersion = 1;
inline constexpr std::uint32_t kFloat64Tag = 1;

std::uint64_t tensor_file_size(const Dims& dims);

std::string encode_tensor(const DenseTensor& t);
/// Throws IoError on bad magic, unsupported version/type, or truncation.
DenseTensor decode_tensor(const std::string& bytes);

void save_tensor(const std::filesystem::path& path, const DenseTensor& t);
DenseTensor load_tensor(const std::filesystem::path& path);

}  // namespace logtr
