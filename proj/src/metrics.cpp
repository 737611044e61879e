#include "logtr/metrics.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "json.hpp"

#include "logtr/error.hpp"

namespace logtr {

namespace {

void check_pair(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeError("image planes differ in shape");
  }
  if (a.size() == 0) throw ShapeError("empty image plane");
}

}  // namespace

double psnr(const Matrix& reference, const Matrix& estimate, double peak) {
  check_pair(reference, estimate);
  if (!(peak > 0.0)) throw ArgumentError("PSNR peak must be positive");
  const double mse = (reference - estimate).squaredNorm() / static_cast<double>(reference.size());
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(peak * peak / mse);
}

double ssim(const Matrix& reference, const Matrix& estimate, const SsimConstants& c) {
  check_pair(reference, estimate);
  if (!(c.c1 > 0.0) || !(c.c2 > 0.0)) throw ArgumentError("SSIM constants must be positive");
  const double n = static_cast<double>(reference.size());
  const double mu_r = reference.mean();
  const double mu_e = estimate.mean();
  const auto dr = reference.array() - mu_r;
  const auto de = estimate.array() - mu_e;
  const double var_r = dr.square().sum() / n;
  const double var_e = de.square().sum() / n;
  const double cov = (dr * de).sum() / n;
  return ((2.0 * mu_r * mu_e + c.c1) * (2.0 * cov + c.c2)) /
         ((mu_r * mu_r + mu_e * mu_e + c.c1) * (var_r + var_e + c.c2));
}

std::vector<Matrix> split_planes(const DenseTensor& t, const PlaneLayout& layout) {
  const Index j = t.order();
  if (j < 2 || layout.row_mode >= j || layout.col_mode >= j || layout.row_mode == layout.col_mode) {
    throw ArgumentError("plane layout (" + std::to_string(layout.row_mode) + ", " +
                        std::to_string(layout.col_mode) + ") is inconsistent with dims " +
                        format_dims(t.dims()));
  }
  std::vector<Index> order{layout.row_mode, layout.col_mode};
  for (Index d = 0; d < j; ++d) {
    if (d != layout.row_mode && d != layout.col_mode) order.push_back(d);
  }
  const DenseTensor p = permute(t, order);
  const auto rows = static_cast<Eigen::Index>(p.dim(0));
  const auto cols = static_cast<Eigen::Index>(p.dim(1));
  const Index area = p.dim(0) * p.dim(1);
  std::vector<Matrix> planes;
  for (Index off = 0; off < p.size(); off += area) {
    planes.emplace_back(Eigen::Map<const Matrix>(p.data().data() + off, rows, cols));
  }
  return planes;
}

QualityReport quality_report(const DenseTensor& reference, const DenseTensor& estimate,
                             const PlaneLayout& layout, double peak, const SsimConstants& c) {
  if (reference.dims() != estimate.dims()) {
    throw ShapeError("reference " + format_dims(reference.dims()) + " vs estimate " +
                     format_dims(estimate.dims()));
  }
  const auto ref_planes = split_planes(reference, layout);
  const auto est_planes = split_planes(estimate, layout);

  QualityReport r;
  double psnr_sum = 0.0;
  double ssim_sum = 0.0;
  for (Index p = 0; p < ref_planes.size(); ++p) {
    const double ps = psnr(ref_planes[p], est_planes[p], peak);
    const double ss = ssim(ref_planes[p], est_planes[p], c);
    r.plane_psnr.push_back(ps);
    r.plane_ssim.push_back(ss);
    if (std::isinf(ps)) {
      ++r.exact_planes;
    } else {
      psnr_sum += ps;
    }
    ssim_sum += ss;
  }
  const Index finite = ref_planes.size() - r.exact_planes;
  r.psnr_db = finite > 0 ? psnr_sum / static_cast<double>(finite)
                         : std::numeric_limits<double>::infinity();
  r.ssim = ssim_sum / static_cast<double>(ref_planes.size());
  return r;
}

namespace {

nlohmann::json number_or_inf(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  return v;
}

}  // namespace

std::string QualityReport::to_json() const {
  nlohmann::json j;
  j["psnr_db"] = number_or_inf(psnr_db);
  j["ssim"] = ssim;
  j["iters"] = iterations;
  j["final_residual"] = final_residual;
  j["elapsed_ms"] = elapsed_ms;
  j["exact_planes"] = exact_planes;
  auto& pp = j["plane_psnr_db"] = nlohmann::json::array();
  for (double v : plane_psnr) pp.push_back(number_or_inf(v));
  j["plane_ssim"] = plane_ssim;
  return j.dump(2);
}

std::string QualityReport::csv_header() {
  return "psnr_db,ssim,iters,final_residual,elapsed_ms";
}

std::string QualityReport::to_csv_row() const {
  std::ostringstream os;
  os << std::setprecision(10);
  if (std::isinf(psnr_db)) {
    os << "inf";
  } else {
    os << psnr_db;
  }
  os << ',' << ssim << ',' << iterations << ',' << final_residual << ',' << elapsed_ms;
  return os.str();
}

}  // namespace logtr
