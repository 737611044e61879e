#pragma once

#include <string>
#include <vector>

#include "logtr/tensor.hpp"

namespace logtr {

struct SsimConstants {
  double c1 = (0.01 * 255.0) * (0.01 * 255.0);
  double c2 = (0.03 * 255.0) * (0.03 * 255.0);
};

/// 10 log10(peak^2 / MSE). +inf when the planes are identical.
double psnr(const Matrix& reference, const Matrix& estimate, double peak = 255.0);

/// Single-window SSIM from whole-plane statistics:
/// (2 mu_r mu_e + c1)(2 cov + c2) / ((mu_r^2 + mu_e^2 + c1)(var_r + var_e + c2)).
/// Population (1/N) moments.
double ssim(const Matrix& reference, const Matrix& estimate, const SsimConstants& c = {});

/// Which two modes are spatial; every combination of the other modes is a plane.
struct PlaneLayout {
  Index row_mode = 0;
  Index col_mode = 1;
};

/// Plane `p` of t in the layout, planes enumerated first-index-fastest over
/// the non-spatial modes.
std::vector<Matrix> split_planes(const DenseTensor& t, const PlaneLayout& layout = {});

struct QualityReport {
  /// Mean over planes with finite PSNR; +inf when every plane is exact.
  double psnr_db = 0.0;
  double ssim = 0.0;
  std::vector<double> plane_psnr;
  std::vector<double> plane_ssim;
  /// Planes reconstructed exactly (PSNR = inf), left out of psnr_db.
  Index exact_planes = 0;

  int iterations = 0;
  double final_residual = 0.0;
  double elapsed_ms = 0.0;

  std::string to_json() const;
  static std::string csv_header();
  std::string to_csv_row() const;
};

/// Averages PSNR/SSIM over channels, bands or frames.
QualityReport quality_report(const DenseTensor& reference, const DenseTensor& estimate,
                             const PlaneLayout& layout = {}, double peak = 255.0,
                             const SsimConstants& c = {});

}  // namespace logtr
