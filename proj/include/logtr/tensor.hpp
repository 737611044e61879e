#pragma once

// Dense N-dimensional tensors and the matricization operators used by the
// tensor-ring completion model.
//
// Conventions:
//   * storage is first-index-fastest (the MATLAB/Fortran order), so the flat
//     position of (i_1, ..., i_j) is i_1 + m_1 * (i_2 + m_2 * (...));
//   * element multi-indices and mode numbers are 0-based;
//   * unfolding "counts" (how many leading modes go to the row side) are
//     counts, i.e. 1..order.

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace logtr {

using Index = std::size_t;
using Dims = std::vector<Index>;
using Matrix = Eigen::MatrixXd;

/// Product of all extents (1 for an empty list).
Index num_elements(std::span<const Index> dims);

/// "4x4x3" style rendering, used in error messages and logs.
std::string format_dims(std::span<const Index> dims);

class DenseTensor {
 public:
  /// Zero-filled tensor. Throws ArgumentError if dims is empty or holds a 0.
  explicit DenseTensor(Dims dims);
  DenseTensor(Dims dims, std::vector<double> data);

  static DenseTensor filled(Dims dims, double value);

  const Dims& dims() const noexcept { return dims_; }
  Index dim(Index mode) const { return dims_.at(mode); }
  Index order() const noexcept { return dims_.size(); }
  Index size() const noexcept { return data_.size(); }

  std::span<const double> data() const noexcept { return data_; }
  std::span<double> data() noexcept { return data_; }
  const std::vector<double>& values() const noexcept { return data_; }

  /// Flat offset of a 0-based multi-index; bounds-checked.
  Index offset(std::span<const Index> index) const;

  double& operator()(std::span<const Index> index) { return data_[offset(index)]; }
  double operator()(std::span<const Index> index) const { return data_[offset(index)]; }
  double& at(std::initializer_list<Index> index) {
    return (*this)({index.begin(), index.size()});
  }
  double at(std::initializer_list<Index> index) const {
    return (*this)({index.begin(), index.size()});
  }

  double& operator[](Index flat) noexcept { return data_[flat]; }
  double operator[](Index flat) const noexcept { return data_[flat]; }

  double frobenius_norm() const noexcept;
  bool all_finite() const noexcept;

  DenseTensor& operator+=(const DenseTensor& other);
  DenseTensor& operator-=(const DenseTensor& other);
  DenseTensor& operator*=(double s) noexcept;

  friend bool operator==(const DenseTensor&, const DenseTensor&) = default;

 private:
  Dims dims_;
  std::vector<double> data_;
};

DenseTensor operator+(DenseTensor a, const DenseTensor& b);
DenseTensor operator-(DenseTensor a, const DenseTensor& b);
DenseTensor operator*(DenseTensor a, double s);

/// Frobenius norm of a - b; shapes must agree.
double distance(const DenseTensor& a, const DenseTensor& b);

/// Reindex modes: output mode k is input mode order[k].
DenseTensor permute(const DenseTensor& t, std::span<const Index> order);

/// Inverse of a permutation given as an order vector.
std::vector<Index> inverse_permutation(std::span<const Index> order);

/// Same flat data, new extents. Throws ShapeError on a product mismatch.
DenseTensor reshape(const DenseTensor& t, Dims new_dims);

enum class UnfoldKind { mode_n, canonical_n, circular_nl };

/// Enough information to invert a matricization.
///
///   mode_n:      n is the 0-based mode placed on the rows.
///   canonical_n: n is the number of leading modes on the rows (1..order-1).
///   circular_nl: modes are cycled to start at 0-based mode l, then the
///                first n (1..order) of them go to the rows.
struct UnfoldSpec {
  UnfoldKind kind = UnfoldKind::mode_n;
  Index n = 0;
  Index l = 0;
  Dims source_dims;

  static UnfoldSpec mode(Dims dims, Index mode);
  static UnfoldSpec canonical(Dims dims, Index split);
  static UnfoldSpec circular(Dims dims, Index count, Index start);

  /// Throws ArgumentError when n/l are out of range for source_dims.
  void validate() const;
  /// Mode order applied before the column-major reshape.
  std::vector<Index> mode_order() const;
  Index rows() const;
  Index cols() const;
};

Matrix unfold(const DenseTensor& t, const UnfoldSpec& spec);
DenseTensor fold(const Matrix& m, const UnfoldSpec& spec);

Matrix unfold_mode_n(const DenseTensor& t, Index mode);
Matrix matricize_canonical(const DenseTensor& t, Index split);
Matrix unfold_circular(const DenseTensor& t, Index count, Index start);

/// Singular values in descending order (thin SVD).
Eigen::VectorXd singular_values(const Matrix& m);

}  // namespace logtr
