#include "logtr/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

#include "logtr/error.hpp"

namespace logtr {

namespace {

void check_dims(const Dims& dims) {
  if (dims.empty()) throw ArgumentError("tensor order must be at least 1");
  for (Index d : dims) {
    if (d == 0) throw ArgumentError("tensor extents must be positive, got " + format_dims(dims));
  }
}

void check_same_shape(const DenseTensor& a, const DenseTensor& b, const char* what) {
  if (a.dims() != b.dims()) {
    throw ShapeError(std::string(what) + ": shape " + format_dims(a.dims()) + " vs " +
                     format_dims(b.dims()));
  }
}

bool is_identity(std::span<const Index> order) {
  for (Index k = 0; k < order.size(); ++k) {
    if (order[k] != k) return false;
  }
  return true;
}

}  // namespace

Index num_elements(std::span<const Index> dims) {
  return std::accumulate(dims.begin(), dims.end(), Index{1}, std::multiplies<>());
}

std::string format_dims(std::span<const Index> dims) {
  std::ostringstream os;
  for (Index k = 0; k < dims.size(); ++k) {
    if (k) os << 'x';
    os << dims[k];
  }
  return os.str();
}

DenseTensor::DenseTensor(Dims dims) : dims_(std::move(dims)) {
  check_dims(dims_);
  data_.assign(num_elements(dims_), 0.0);
}

DenseTensor::DenseTensor(Dims dims, std::vector<double> data)
    : dims_(std::move(dims)), data_(std::move(data)) {
  check_dims(dims_);
  if (data_.size() != num_elements(dims_)) {
    throw ShapeError("data length " + std::to_string(data_.size()) + " does not match dims " +
                     format_dims(dims_));
  }
}

DenseTensor DenseTensor::filled(Dims dims, double value) {
  DenseTensor t(std::move(dims));
  std::fill(t.data_.begin(), t.data_.end(), value);
  return t;
}

Index DenseTensor::offset(std::span<const Index> index) const {
  if (index.size() != dims_.size()) {
    throw ArgumentError("expected " + std::to_string(dims_.size()) + " indices, got " +
                        std::to_string(index.size()));
  }
  Index flat = 0;
  Index stride = 1;
  for (Index k = 0; k < dims_.size(); ++k) {
    if (index[k] >= dims_[k]) {
      throw ArgumentError("index " + std::to_string(index[k]) + " out of range for mode " +
                          std::to_string(k) + " of extent " + std::to_string(dims_[k]));
    }
    flat += index[k] * stride;
    stride *= dims_[k];
  }
  return flat;
}

double DenseTensor::frobenius_norm() const noexcept {
  double s = 0.0;
  for (double v : data_) s += v * v;
  return std::sqrt(s);
}

bool DenseTensor::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

DenseTensor& DenseTensor::operator+=(const DenseTensor& other) {
  check_same_shape(*this, other, "operator+=");
  for (Index k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

DenseTensor& DenseTensor::operator-=(const DenseTensor& other) {
  check_same_shape(*this, other, "operator-=");
  for (Index k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
  return *this;
}

DenseTensor& DenseTensor::operator*=(double s) noexcept {
  for (double& v : data_) v *= s;
  return *this;
}

DenseTensor operator+(DenseTensor a, const DenseTensor& b) { return a += b; }
DenseTensor operator-(DenseTensor a, const DenseTensor& b) { return a -= b; }
DenseTensor operator*(DenseTensor a, double s) { return a *= s; }

double distance(const DenseTensor& a, const DenseTensor& b) {
  check_same_shape(a, b, "distance");
  double s = 0.0;
  for (Index k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    s += d * d;
  }
  return std::sqrt(s);
}

std::vector<Index> inverse_permutation(std::span<const Index> order) {
  std::vector<Index> inv(order.size());
  for (Index k = 0; k < order.size(); ++k) inv[order[k]] = k;
  return inv;
}

DenseTensor permute(const DenseTensor& t, std::span<const Index> order) {
  const Index j = t.order();
  if (order.size() != j) {
    throw ArgumentError("permutation length " + std::to_string(order.size()) +
                        " does not match tensor order " + std::to_string(j));
  }
  std::vector<bool> seen(j, false);
  for (Index k : order) {
    if (k >= j || seen[k]) throw ArgumentError("not a permutation of the tensor modes");
    seen[k] = true;
  }
  if (is_identity(order)) return t;

  std::vector<Index> in_stride(j);
  Index stride = 1;
  for (Index k = 0; k < j; ++k) {
    in_stride[k] = stride;
    stride *= t.dim(k);
  }

  Dims out_dims(j);
  std::vector<Index> step(j);
  for (Index k = 0; k < j; ++k) {
    out_dims[k] = t.dim(order[k]);
    step[k] = in_stride[order[k]];
  }

  DenseTensor out(out_dims);
  std::vector<Index> counter(j, 0);
  Index src = 0;
  const Index total = t.size();
  for (Index flat = 0; flat < total; ++flat) {
    out[flat] = t[src];
    for (Index k = 0; k < j; ++k) {
      if (++counter[k] < out_dims[k]) {
        src += step[k];
        break;
      }
      src -= step[k] * (out_dims[k] - 1);
      counter[k] = 0;
    }
  }
  return out;
}

DenseTensor reshape(const DenseTensor& t, Dims new_dims) {
  if (num_elements(new_dims) != t.size()) {
    throw ShapeError("cannot reshape " + format_dims(t.dims()) + " to " + format_dims(new_dims));
  }
  return DenseTensor(std::move(new_dims), t.values());
}

UnfoldSpec UnfoldSpec::mode(Dims dims, Index mode) {
  UnfoldSpec s{UnfoldKind::mode_n, mode, 0, std::move(dims)};
  s.validate();
  return s;
}

UnfoldSpec UnfoldSpec::canonical(Dims dims, Index split) {
  UnfoldSpec s{UnfoldKind::canonical_n, split, 0, std::move(dims)};
  s.validate();
  return s;
}

UnfoldSpec UnfoldSpec::circular(Dims dims, Index count, Index start) {
  UnfoldSpec s{UnfoldKind::circular_nl, count, start, std::move(dims)};
  s.validate();
  return s;
}

void UnfoldSpec::validate() const {
  check_dims(source_dims);
  const Index j = source_dims.size();
  switch (kind) {
    case UnfoldKind::mode_n:
      if (n >= j) {
        throw ArgumentError("mode " + std::to_string(n) + " out of range for order " +
                            std::to_string(j));
      }
      break;
    case UnfoldKind::canonical_n:
      if (n < 1 || n + 1 > j) {
        throw ArgumentError("canonical split " + std::to_string(n) + " must lie in [1, " +
                            std::to_string(j) + "-1]");
      }
      break;
    case UnfoldKind::circular_nl:
      if (n < 1 || n > j) {
        throw ArgumentError("circular count " + std::to_string(n) + " must lie in [1, " +
                            std::to_string(j) + "]");
      }
      if (l >= j) {
        throw ArgumentError("circular start mode " + std::to_string(l) + " out of range for order " +
                            std::to_string(j));
      }
      break;
  }
}

std::vector<Index> UnfoldSpec::mode_order() const {
  const Index j = source_dims.size();
  std::vector<Index> order;
  order.reserve(j);
  switch (kind) {
    case UnfoldKind::mode_n:
      order.push_back(n);
      for (Index d = 0; d < j; ++d) {
        if (d != n) order.push_back(d);
      }
      break;
    case UnfoldKind::canonical_n:
      for (Index d = 0; d < j; ++d) order.push_back(d);
      break;
    case UnfoldKind::circular_nl:
      for (Index d = 0; d < j; ++d) order.push_back((l + d) % j);
      break;
  }
  return order;
}

Index UnfoldSpec::rows() const {
  const Index j = source_dims.size();
  switch (kind) {
    case UnfoldKind::mode_n:
      return source_dims[n];
    case UnfoldKind::canonical_n:
      return num_elements(std::span(source_dims).first(n));
    case UnfoldKind::circular_nl: {
      Index r = 1;
      for (Index d = 0; d < n; ++d) r *= source_dims[(l + d) % j];
      return r;
    }
  }
  return 0;
}

Index UnfoldSpec::cols() const { return num_elements(source_dims) / rows(); }

Matrix unfold(const DenseTensor& t, const UnfoldSpec& spec) {
  spec.validate();
  if (t.dims() != spec.source_dims) {
    throw ShapeError("tensor " + format_dims(t.dims()) + " does not match unfold spec source " +
                     format_dims(spec.source_dims));
  }
  const auto order = spec.mode_order();
  const DenseTensor p = permute(t, order);
  return Eigen::Map<const Matrix>(p.data().data(), static_cast<Eigen::Index>(spec.rows()),
                                  static_cast<Eigen::Index>(spec.cols()));
}

DenseTensor fold(const Matrix& m, const UnfoldSpec& spec) {
  spec.validate();
  if (static_cast<Index>(m.rows()) != spec.rows() || static_cast<Index>(m.cols()) != spec.cols()) {
    throw ShapeError("matrix " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                     " does not match unfold shape " + std::to_string(spec.rows()) + "x" +
                     std::to_string(spec.cols()));
  }
  const auto order = spec.mode_order();
  Dims permuted_dims(order.size());
  for (Index k = 0; k < order.size(); ++k) permuted_dims[k] = spec.source_dims[order[k]];
  DenseTensor p(std::move(permuted_dims), std::vector<double>(m.data(), m.data() + m.size()));
  return permute(p, inverse_permutation(order));
}

Matrix unfold_mode_n(const DenseTensor& t, Index mode) {
  return unfold(t, UnfoldSpec::mode(t.dims(), mode));
}

Matrix matricize_canonical(const DenseTensor& t, Index split) {
  return unfold(t, UnfoldSpec::canonical(t.dims(), split));
}

Matrix unfold_circular(const DenseTensor& t, Index count, Index start) {
  return unfold(t, UnfoldSpec::circular(t.dims(), count, start));
}

Eigen::VectorXd singular_values(const Matrix& m) {
  if (!m.allFinite()) throw NumericError("singular_values: non-finite matrix entries");
  Eigen::BDCSVD<Matrix> svd(m);
  return svd.singularValues();
}

}  // namespace logtr
