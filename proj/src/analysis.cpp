#include "finsler/analysis.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "finsler/parallel.hpp"

namespace finsler {

namespace {

std::vector<double> singular_values(const Eigen::MatrixXd& a) {
  if (a.rows() == 0) return {};
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  const auto& s = svd.singularValues();
  return {s.data(), s.data() + s.size()};
}

int numerical_rank(const std::vector<double>& sv, double threshold, double floor) {
  if (sv.empty()) return 0;
  const double cut = std::max(threshold * sv.front(), floor);
  return static_cast<int>(std::count_if(sv.begin(), sv.end(), [cut](double s) { return s > cut; }));
}

}  // namespace

const char* to_string(CurvatureVerdict v) {
  return v == CurvatureVerdict::ScalarCurvature ? "ScalarCurvature" : "NotScalar";
}

const char* to_string(ScanBranch b) {
  switch (b) {
    case ScanBranch::PointwiseZero: return "pointwise";
    case ScanBranch::IntersectionZero: return "intersection";
    case ScanBranch::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

ScalarCurvatureFit scalar_curvature_fit(const MetricModel& m, const std::vector<TangentSample>& samples, double tol,
                                        int threads) {
  if (!m.finsler) fail(ErrorKind::MissingFinslerFunction, "scalar curvature fit needs a Finsler function");
  if (samples.empty()) fail(ErrorKind::InsufficientSamples, "scalar curvature fit needs samples");
  ScalarCurvatureFit fit;
  fit.tolerance = tol;
  const int n = m.dim;
  const auto rows = parallel_map(samples.size(), threads, [&](std::size_t s) {
    const auto geo = evaluate_geometry(m, samples[s]);
    const double F2 = geo.finsler_value * geo.finsler_value;
    const auto y_low = geo.lower_metric(geo.y);
    double trace = 0.0;
    for (int i = 0; i < n; ++i) trace += geo.jacobi(i, i);
    const double K = trace / ((n - 1) * F2);
    double res = 0.0;
    for (int h = 0; h < n; ++h)
      for (int i = 0; i < n; ++i) {
        const double model = K * ((h == i ? F2 : 0.0) - y_low[i] * geo.y[h]);
        res = std::max(res, std::abs(geo.jacobi(h, i) - model) / F2);
      }
    return std::pair{K, res};
  });
  for (const auto& [K, res] : rows) {
    fit.K.push_back(K);
    fit.residuals.push_back(res);
  }
  fit.K_min = *std::min_element(fit.K.begin(), fit.K.end());
  fit.K_max = *std::max_element(fit.K.begin(), fit.K.end());
  fit.max_residual = *std::max_element(fit.residuals.begin(), fit.residuals.end());
  fit.verdict = fit.max_residual <= tol ? CurvatureVerdict::ScalarCurvature : CurvatureVerdict::NotScalar;
  return fit;
}

RankReport mean_berwald_rank(const MetricModel& m, const std::vector<TangentSample>& samples, double threshold,
                             double absolute_floor) {
  RankReport rep;
  const int n = m.dim;
  for (const auto& at : samples) {
    const auto geo = evaluate_geometry(m, at);
    Eigen::MatrixXd e(n, n);
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) e(j, k) = geo.mean_berwald(j, k);
    auto sv = singular_values(e);
    const int rank = numerical_rank(sv, threshold, absolute_floor);
    rep.ranks.push_back(rank);
    rep.singular_values.push_back(std::move(sv));
    rep.max_rank = std::max(rep.max_rank, rank);
  }
  return rep;
}

double ScanPoint::residual(std::span<const double> b) const {
  double worst = 0.0, scale = 0.0, bmax = 0.0;
  for (int c = 0; c < cols; ++c) bmax = std::max(bmax, std::abs(b[c]));
  for (int r = 0; r < rows; ++r) {
    double dot = 0.0;
    for (int c = 0; c < cols; ++c) {
      dot += matrix[r * cols + c] * b[c];
      scale = std::max(scale, std::abs(matrix[r * cols + c]));
    }
    worst = std::max(worst, std::abs(dot));
  }
  return worst / std::max(1.0, scale * bmax);
}

KernelScanReport parallel_obstruction_scan(const MetricModel& m, int x_points, int y_samples,
                                           const ScanOptions& options) {
  const double radius = options.radius > 0.0 ? options.radius : m.domain.sample_radius;
  std::vector<std::vector<double>> xs;
  for (const auto& s : draw_samples(m.dim, x_points, options.seed, radius)) xs.push_back(s.x());
  return parallel_obstruction_scan(m, xs, y_samples, options);
}

KernelScanReport parallel_obstruction_scan(const MetricModel& m, const std::vector<std::vector<double>>& x_points,
                                           int y_samples, const ScanOptions& options) {
  const int n = m.dim;
  if (y_samples < n + 2) fail(ErrorKind::InsufficientSamples, "kernel scan needs at least n + 2 y-samples per point");
  if (x_points.empty()) fail(ErrorKind::InsufficientSamples, "kernel scan needs base points");
  KernelScanReport rep;
  std::vector<double> all_rows;
  rep.points = parallel_map(x_points.size(), options.threads, [&](std::size_t p) {
    ScanPoint pt;
    pt.x = x_points[p];
    pt.cols = n;
    const auto ys = draw_samples(n, y_samples, options.seed + 1 + p, 1.0);
    for (const auto& ysample : ys) {
      const auto geo = evaluate_geometry(m, TangentSample(pt.x, ysample.y()));
      if (options.berwald_rows)
        for (int i = 0; i < n; ++i)
          for (int j = i; j < n; ++j)
            for (int k = j; k < n; ++k) {
              for (int h = 0; h < n; ++h) pt.matrix.push_back(geo.berwald_curvature(h, i, j, k));
              ++pt.rows;
            }
      if (options.curvature_rows)
        for (int j = 0; j < n; ++j)
          for (int k = j + 1; k < n; ++k) {
            for (int h = 0; h < n; ++h) pt.matrix.push_back(geo.curvature(h, j, k));
            ++pt.rows;
          }
    }
    Eigen::MatrixXd a = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        pt.matrix.data(), pt.rows, pt.cols);
    pt.singular_values = singular_values(a);
    pt.kernel_dim = n - numerical_rank(pt.singular_values, options.threshold, options.absolute_floor);
    return pt;
  });
  for (const auto& pt : rep.points) all_rows.insert(all_rows.end(), pt.matrix.begin(), pt.matrix.end());
  rep.max_kernel_dim = 0;
  rep.min_kernel_dim = n;
  for (const auto& pt : rep.points) {
    rep.max_kernel_dim = std::max(rep.max_kernel_dim, pt.kernel_dim);
    rep.min_kernel_dim = std::min(rep.min_kernel_dim, pt.kernel_dim);
  }
  const Eigen::MatrixXd all = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      all_rows.data(), static_cast<Eigen::Index>(all_rows.size() / n), n);
  rep.intersection_kernel_dim = n - numerical_rank(singular_values(all), options.threshold, options.absolute_floor);
  if (rep.max_kernel_dim == 0)
    rep.branch = ScanBranch::PointwiseZero;
  else if (rep.intersection_kernel_dim == 0)
    rep.branch = ScanBranch::IntersectionZero;
  else
    rep.branch = ScanBranch::Inconclusive;
  return rep;
}

LandsbergReport landsberg_residual(const MetricModel& m, const std::vector<TangentSample>& samples, int threads) {
  if (!m.finsler) fail(ErrorKind::MissingFinslerFunction, "Landsberg tensor needs a Finsler function");
  LandsbergReport rep;
  const auto rows = parallel_map(samples.size(), threads, [&](std::size_t s) {
    const auto geo = evaluate_geometry(m, samples[s]);
    return std::pair{geo.landsberg.max_abs(), geo.berwald_curvature.max_abs()};
  });
  for (const auto& [l, b] : rows) {
    rep.max_landsberg = std::max(rep.max_landsberg, l);
    rep.max_berwald = std::max(rep.max_berwald, b);
  }
  return rep;
}

}  // namespace finsler
