#include "logtr/tensor_file.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "logtr/error.hpp"

namespace logtr {

namespace {

template <class T>
void put_le(std::string& out, T value) {
  static_assert(std::is_unsigned_v<T>);
  for (std::size_t b = 0; b < sizeof(T); ++b) {
    out.push_back(static_cast<char>((value >> (8 * b)) & 0xff));
  }
}

template <class T>
T get_le(const std::string& in, std::size_t& pos) {
  if (pos + sizeof(T) > in.size()) throw IoError("tensor file truncated in header");
  T value = 0;
  for (std::size_t b = 0; b < sizeof(T); ++b) {
    value |= static_cast<T>(static_cast<unsigned char>(in[pos + b])) << (8 * b);
  }
  pos += sizeof(T);
  return value;
}

constexpr std::size_t kFixedHeader = 16;

}  // namespace

std::uint64_t tensor_file_size(const Dims& dims) {
  return kFixedHeader + 8 * dims.size() + 8 * num_elements(dims);
}

std::string encode_tensor(const DenseTensor& t) {
  std::string out;
  out.reserve(tensor_file_size(t.dims()));
  out.append(kTensorFileMagic, 4);
  put_le<std::uint32_t>(out, kTensorFileVersion);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(t.order()));
  put_le<std::uint32_t>(out, kFloat64Tag);
  for (Index d : t.dims()) put_le<std::uint64_t>(out, d);
  for (double v : t.data()) put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(v));
  return out;
}

DenseTensor decode_tensor(const std::string& bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kTensorFileMagic, 4) != 0) {
    throw IoError("not a tensor file (bad magic)");
  }
  std::size_t pos = 4;
  const auto version = get_le<std::uint32_t>(bytes, pos);
  if (version != kTensorFileVersion) {
    throw IoError("unsupported tensor file version " + std::to_string(version));
  }
  const auto order = get_le<std::uint32_t>(bytes, pos);
  const auto tag = get_le<std::uint32_t>(bytes, pos);
  if (tag != kFloat64Tag) throw IoError("unsupported element type tag " + std::to_string(tag));
  if (order == 0) throw IoError("tensor file declares order 0");
  Dims dims;
  for (std::uint32_t k = 0; k < order; ++k) {
    const auto d = get_le<std::uint64_t>(bytes, pos);
    if (d == 0) throw IoError("tensor file declares a zero extent");
    dims.push_back(static_cast<Index>(d));
  }
  const Index n = num_elements(dims);
  if (bytes.size() - pos != 8 * n) {
    throw IoError("tensor payload is " + std::to_string(bytes.size() - pos) + " bytes, expected " +
                  std::to_string(8 * n));
  }
  std::vector<double> data(n);
  for (Index k = 0; k < n; ++k) data[k] = std::bit_cast<double>(get_le<std::uint64_t>(bytes, pos));
  return DenseTensor(std::move(dims), std::move(data));
}

void save_tensor(const std::filesystem::path& path, const DenseTensor& t) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  const std::string bytes = encode_tensor(t);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("failed writing " + path.string());
}

DenseTensor load_tensor(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return decode_tensor(bytes);
  } catch (const IoError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

}  // namespace logtr
