#pragma once

#include <filesystem>

#include "logtr/tensor.hpp"

namespace logtr {

/// 8-bit PNG as an m x n x c tensor with values in [0, 255]; c = 3 for color
/// (alpha is dropped) and 1 for grayscale. Throws IoError on decode failure or
/// 16-bit input.
DenseTensor load_image(const std::filesystem::path& path);

/// Writes an m x n x {1,3} tensor as PNG, rounding and clamping to [0, 255].
void save_image(const std::filesystem::path& path, const DenseTensor& t);

}  // namespace logtr
