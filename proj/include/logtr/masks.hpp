#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <vector>

#include "logtr/tensor.hpp"

namespace logtr {

/// Observation set Omega as a boolean tensor (true = observed).
class Mask {
 public:
  explicit Mask(Dims dims, bool value = false);
  Mask(Dims dims, std::vector<std::uint8_t> bits);

  const Dims& dims() const noexcept { return dims_; }
  Index size() const noexcept { return bits_.size(); }
  bool operator[](Index flat) const noexcept { return bits_[flat] != 0; }
  void set(Index flat, bool value) { bits_.at(flat) = value ? 1 : 0; }

  Index count() const noexcept;
  double fraction() const noexcept;
  bool full() const noexcept { return count() == size(); }
  Mask complement() const;

  /// 1.0 where observed, 0.0 elsewhere.
  DenseTensor to_tensor() const;
  /// Nonzero entries become observed.
  static Mask from_tensor(const DenseTensor& t);

  friend bool operator==(const Mask&, const Mask&) = default;

 private:
  Dims dims_;
  std::vector<std::uint8_t> bits_;
};

enum class MaskKind { random, stripes, external };

struct MaskSpec {
  MaskKind kind = MaskKind::random;
  double sr = 0.5;
  std::uint64_t seed = 0;
  /// random: draw one spatial mask over the first two modes and broadcast it.
  bool shared_spatial = false;
  /// stripes: axis 1 removes columns (vertical stripes), axis 0 removes rows.
  Index stripe_axis = 1;
  Index stripe_period = 2;
  Index stripe_width = 1;
  /// external: 8-bit grayscale image, 0 = missing.
  std::filesystem::path path;

  void validate() const;
};

/// Random masks sample exactly round(sr * N) entries without replacement.
Mask generate_mask(const Dims& dims, const MaskSpec& spec);

/// P_Omega: keeps observed entries and zeroes the rest.
DenseTensor apply_mask(const DenseTensor& t, const Mask& mask);

/// Uniform integer in [0, bound) from a 64-bit engine, identical on every
/// standard library (unlike std::uniform_int_distribution).
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound);

}  // namespace logtr
