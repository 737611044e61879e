#include "logtr/masks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "logtr/error.hpp"
#include "logtr/image_io.hpp"

namespace logtr {

Mask::Mask(Dims dims, bool value) : dims_(std::move(dims)) {
  const DenseTensor shape_check(dims_);
  bits_.assign(shape_check.size(), value ? 1 : 0);
}

Mask::Mask(Dims dims, std::vector<std::uint8_t> bits) : dims_(std::move(dims)), bits_(std::move(bits)) {
  if (bits_.size() != DenseTensor(dims_).size()) {
    throw ShapeError("mask length does not match dims " + format_dims(dims_));
  }
  for (auto& b : bits_) b = b ? 1 : 0;
}

Index Mask::count() const noexcept {
  return static_cast<Index>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

double Mask::fraction() const noexcept {
  return static_cast<double>(count()) / static_cast<double>(size());
}

Mask Mask::complement() const {
  Mask m(dims_);
  for (Index k = 0; k < bits_.size(); ++k) m.bits_[k] = bits_[k] ? 0 : 1;
  return m;
}

DenseTensor Mask::to_tensor() const {
  DenseTensor t(dims_);
  for (Index k = 0; k < bits_.size(); ++k) t[k] = bits_[k] ? 1.0 : 0.0;
  return t;
}

Mask Mask::from_tensor(const DenseTensor& t) {
  std::vector<std::uint8_t> bits(t.size());
  for (Index k = 0; k < t.size(); ++k) bits[k] = t[k] != 0.0 ? 1 : 0;
  return Mask(t.dims(), std::move(bits));
}

void MaskSpec::validate() const {
  switch (kind) {
    case MaskKind::random:
      if (!(sr > 0.0 && sr <= 1.0)) throw ArgumentError("sampling rate must lie in (0, 1]");
      break;
    case MaskKind::stripes:
      if (stripe_axis > 1) throw ArgumentError("stripe axis must be 0 (rows) or 1 (columns)");
      if (stripe_period == 0 || stripe_width > stripe_period) {
        throw ArgumentError("stripe width must not exceed a positive period");
      }
      break;
    case MaskKind::external:
      if (path.empty()) throw ArgumentError("external mask needs a path");
      break;
  }
}

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  // Rejection keeps the draw unbiased.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t v;
  do {
    v = rng();
  } while (v >= limit);
  return v % bound;
}

namespace {

// Exactly `count` of `total` positions set, by partial Fisher-Yates.
std::vector<std::uint8_t> sample_exact(Index total, Index count, std::uint64_t seed) {
  std::vector<Index> pool(total);
  std::iota(pool.begin(), pool.end(), Index{0});
  std::mt19937_64 rng(seed);
  std::vector<std::uint8_t> bits(total, 0);
  for (Index k = 0; k < count; ++k) {
    const Index pick = k + static_cast<Index>(uniform_below(rng, total - k));
    std::swap(pool[k], pool[pick]);
    bits[pool[k]] = 1;
  }
  return bits;
}

// Spatial (first two modes) pattern repeated over every trailing plane.
Mask broadcast_spatial(const Dims& dims, const std::vector<std::uint8_t>& plane) {
  const Index area = dims[0] * dims[1];
  const Index total = num_elements(dims);
  std::vector<std::uint8_t> bits(total);
  for (Index k = 0; k < total; ++k) bits[k] = plane[k % area];
  return Mask(dims, std::move(bits));
}

}  // namespace

Mask generate_mask(const Dims& dims, const MaskSpec& spec) {
  spec.validate();
  const Index total = num_elements(dims);
  switch (spec.kind) {
    case MaskKind::random: {
      if (spec.shared_spatial) {
        if (dims.size() < 2) throw ArgumentError("shared spatial masks need two spatial modes");
        const Index area = dims[0] * dims[1];
        const auto count = static_cast<Index>(std::llround(spec.sr * static_cast<double>(area)));
        return broadcast_spatial(dims, sample_exact(area, count, spec.seed));
      }
      const auto count = static_cast<Index>(std::llround(spec.sr * static_cast<double>(total)));
      return Mask(dims, sample_exact(total, count, spec.seed));
    }
    case MaskKind::stripes: {
      if (dims.size() < 2) throw ArgumentError("stripe masks need two spatial modes");
      std::vector<std::uint8_t> plane(dims[0] * dims[1]);
      for (Index c = 0; c < dims[1]; ++c) {
        for (Index r = 0; r < dims[0]; ++r) {
          const Index coord = spec.stripe_axis == 0 ? r : c;
          plane[r + dims[0] * c] = (coord % spec.stripe_period) < spec.stripe_width ? 0 : 1;
        }
      }
      return broadcast_spatial(dims, plane);
    }
    case MaskKind::external: {
      if (dims.size() < 2) throw ArgumentError("external masks need two spatial modes");
      const DenseTensor img = load_image(spec.path);
      if (img.dim(0) != dims[0] || img.dim(1) != dims[1]) {
        throw ShapeError("mask image " + format_dims(img.dims()) + " does not match spatial size " +
                         std::to_string(dims[0]) + "x" + std::to_string(dims[1]));
      }
      if (img.dim(2) != 1) throw IoError("external mask must be a grayscale image");
      std::vector<std::uint8_t> plane(dims[0] * dims[1]);
      for (Index k = 0; k < plane.size(); ++k) plane[k] = img[k] != 0.0 ? 1 : 0;
      return broadcast_spatial(dims, plane);
    }
  }
  throw ArgumentError("unknown mask kind");
}

DenseTensor apply_mask(const DenseTensor& t, const Mask& mask) {
  if (t.dims() != mask.dims()) {
    throw ShapeError("mask " + format_dims(mask.dims()) + " does not match tensor " +
                     format_dims(t.dims()));
  }
  DenseTensor out(t.dims());
  for (Index k = 0; k < t.size(); ++k) out[k] = mask[k] ? t[k] : 0.0;
  return out;
}

}  // namespace logtr
