#include "logtr/image_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include <png.h>

#include "logtr/error.hpp"

namespace logtr {

namespace {

struct PngImage {
  png_image image{};
  PngImage() {
    image.version = PNG_IMAGE_VERSION;
  }
  ~PngImage() { png_image_free(&image); }
  PngImage(const PngImage&) = delete;
  PngImage& operator=(const PngImage&) = delete;
};

}  // namespace

DenseTensor load_image(const std::filesystem::path& path) {
  PngImage png;
  if (!png_image_begin_read_from_file(&png.image, path.c_str())) {
    throw IoError("cannot decode " + path.string() + ": " + png.image.message);
  }
  if (png.image.format & PNG_FORMAT_FLAG_LINEAR) {
    throw IoError(path.string() + ": unsupported bit depth (only 8-bit images)");
  }
  const bool color = (png.image.format & PNG_FORMAT_FLAG_COLOR) != 0;
  png.image.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  const Index channels = color ? 3 : 1;
  const Index width = png.image.width;
  const Index height = png.image.height;

  std::vector<png_byte> buffer(PNG_IMAGE_SIZE(png.image));
  if (!png_image_finish_read(&png.image, nullptr, buffer.data(), 0, nullptr)) {
    throw IoError("cannot decode " + path.string() + ": " + png.image.message);
  }

  DenseTensor t({height, width, channels});
  for (Index r = 0; r < height; ++r) {
    for (Index c = 0; c < width; ++c) {
      for (Index ch = 0; ch < channels; ++ch) {
        t.at({r, c, ch}) = buffer[(r * width + c) * channels + ch];
      }
    }
  }
  return t;
}

void save_image(const std::filesystem::path& path, const DenseTensor& t) {
  if (t.order() < 2 || t.order() > 3 || (t.order() == 3 && t.dim(2) != 1 && t.dim(2) != 3)) {
    throw ShapeError("save_image expects m x n, m x n x 1 or m x n x 3, got " +
                     format_dims(t.dims()));
  }
  const Index height = t.dim(0);
  const Index width = t.dim(1);
  const Index channels = t.order() == 3 ? t.dim(2) : 1;

  std::vector<png_byte> buffer(height * width * channels);
  const Index plane = height * width;
  for (Index r = 0; r < height; ++r) {
    for (Index c = 0; c < width; ++c) {
      for (Index ch = 0; ch < channels; ++ch) {
        const double v = std::clamp(std::round(t[r + height * c + plane * ch]), 0.0, 255.0);
        buffer[(r * width + c) * channels + ch] = static_cast<png_byte>(v);
      }
    }
  }

  PngImage png;
  png.image.width = static_cast<png_uint_32>(width);
  png.image.height = static_cast<png_uint_32>(height);
  png.image.format = channels == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  if (!png_image_write_to_file(&png.image, path.c_str(), 0, buffer.data(), 0, nullptr)) {
    throw IoError("cannot write " + path.string() + ": " + png.image.message);
  }
}

}  // namespace logtr
