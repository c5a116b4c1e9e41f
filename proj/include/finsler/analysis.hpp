#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "finsler/geometry.hpp"

namespace finsler {

enum class CurvatureVerdict { ScalarCurvature, NotScalar };
const char* to_string(CurvatureVerdict v);

struct ScalarCurvatureFit {
  std::vector<double> K;          // per sample
  std::vector<double> residuals;  // per sample, relative to F^2
  double K_min = 0.0;
  double K_max = 0.0;
  double max_residual = 0.0;
  double tolerance = 1e-6;
  CurvatureVerdict verdict = CurvatureVerdict::NotScalar;
};

// K = tr(Phi) / ((n - 1) F^2) and max_{h,i} |Phi^h_i - K (F^2 delta^h_i - y_i y^h)| / F^2
// with y_i = g_ij y^j.
ScalarCurvatureFit scalar_curvature_fit(const MetricModel& m, const std::vector<TangentSample>& samples,
                                        double tol = 1e-6, int threads = 1);

struct RankReport {
  int max_rank = 0;
  std::vector<int> ranks;
  std::vector<std::vector<double>> singular_values;
};

// Rank counts singular values above max(threshold * sigma_max, absolute_floor).
RankReport mean_berwald_rank(const MetricModel& m, const std::vector<TangentSample>& samples, double threshold = 1e-7,
                             double absolute_floor = 1e-9);

struct ScanOptions {
  double threshold = 1e-7;
  double absolute_floor = 1e-9;
  bool berwald_rows = true;
  bool curvature_rows = true;
  std::uint64_t seed = 0;
  // Base points are drawn from the ball of this radius; <= 0 uses the metric's sampling radius.
  double radius = 0.0;
  int threads = 1;  // workers over x-points
};

struct ScanPoint {
  std::vector<double> x;
  int rows = 0;
  int cols = 0;
  std::vector<double> matrix;  // row-major constraint rows b -> (row . b)
  std::vector<double> singular_values;
  int kernel_dim = 0;

  // max |row . b| / max(1, max |row| max |b|).
  double residual(std::span<const double> b) const;
};

enum class ScanBranch { PointwiseZero, IntersectionZero, Inconclusive };
const char* to_string(ScanBranch b);

struct KernelScanReport {
  std::vector<ScanPoint> points;
  int max_kernel_dim = 0;
  int min_kernel_dim = 0;
  int intersection_kernel_dim = 0;  // kernel of all rows stacked across x
  ScanBranch branch = ScanBranch::Inconclusive;
};

// Stacks b -> G^h_ijk b_h and b -> R^h_jk b_h over y-samples at each x.
// Needs at least n + 2 y-samples per point.
KernelScanReport parallel_obstruction_scan(const MetricModel& m, int x_points, int y_samples,
                                           const ScanOptions& options = {});
KernelScanReport parallel_obstruction_scan(const MetricModel& m, const std::vector<std::vector<double>>& x_points,
                                           int y_samples, const ScanOptions& options = {});

struct LandsbergReport {
  double max_landsberg = 0.0;
  double max_berwald = 0.0;
};
LandsbergReport landsberg_residual(const MetricModel& m, const std::vector<TangentSample>& samples, int threads = 1);

}  // namespace finsler
