#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "finsler/calculus.hpp"
#include "finsler/tensor.hpp"

namespace finsler {

struct Domain {
  enum class Kind { Everywhere, Ball };
  Kind kind = Kind::Everywhere;
  // Open ball radius for Kind::Ball.
  double radius = std::numeric_limits<double>::infinity();
  // Default radius of the sampling ball for base points.
  double sample_radius = 0.6;

  bool contains(std::span<const double> x) const;
};

// Input of the tensor pipeline: a Finsler function, a spray, or both. When both
// are present the spray is derived from F and the given spray is only compared.
struct MetricModel {
  std::string name;
  int dim = 0;
  Domain domain;
  std::optional<ScalarField> finsler;
  std::optional<VectorField> spray_override;

  bool has_finsler() const { return finsler.has_value(); }
};

// Thresholds applied while building the pipeline at one sample.
struct PipelineTolerances {
  // |det g| <= degeneracy * (mean |g_ii|)^n declares a degenerate metric.
  double degeneracy = 1e-10;
  // Relative tolerance for matching R^h_{ij} y^j against the Jacobi endomorphism.
  double convention = 1e-6;
};

// Every tensor of the pipeline at one sample. Tensors that need F are empty for
// spray-only models.
struct PointGeometry {
  int dim = 0;
  std::vector<double> x, y;
  bool has_finsler = false;

  double finsler_value = 0.0;
  double energy = 0.0;
  TensorValue metric;          // g_ij
  TensorValue inverse_metric;  // g^ij
  TensorValue hilbert_form;    // l_i = d_{y^i} F
  TensorValue angular_metric;  // h_ij = g_ij - l_i l_j
  double angular_identity_defect = 0.0;  // max |h_ij - F d_{y^i} d_{y^j} F|

  TensorValue spray;                // G^i
  TensorValue connection;           // N^i_j
  TensorValue berwald_connection;   // G^h_ij
  TensorValue berwald_curvature;    // G^h_ijk
  TensorValue mean_berwald;         // E_jk
  TensorValue landsberg;            // L_ijk
  TensorValue jacobi;               // Phi^i_j
  TensorValue curvature;            // R^h_jk, sign-normalized
  TensorValue spray_x_derivative;   // d_j G^i, stored (i, j)
  TensorValue connection_x_derivative;  // d_k N^i_j, stored (i, j, k)

  // Sign s applied to delta_k N^h_j - delta_j N^h_k so that R^h_{ij} y^j = Phi^h_i.
  int curvature_sign = -1;
  double curvature_contraction_defect = 0.0;
  std::optional<double> spray_override_deviation;

  std::vector<double> lower_metric(std::span<const double> v) const;
};

PointGeometry evaluate_geometry(const MetricModel& m, const TangentSample& at, Scheme scheme = Scheme::Taylor,
                                const PipelineTolerances& tol = {});

// Spray coefficients as jets with x-order 1 and y-order 3 around `at`.
std::vector<Jet> spray_jet(const MetricModel& m, const TangentSample& at, Scheme scheme = Scheme::Taylor);

double energy(const MetricModel& m, const TangentSample& at);
TensorValue metric_tensor(const MetricModel& m, const TangentSample& at);
TensorValue hilbert_form(const MetricModel& m, const TangentSample& at);
TensorValue angular_metric(const MetricModel& m, const TangentSample& at);
TensorValue spray_coefficients(const MetricModel& m, const TangentSample& at);
TensorValue nonlinear_connection(const MetricModel& m, const TangentSample& at);
TensorValue berwald_connection(const MetricModel& m, const TangentSample& at);
TensorValue berwald_curvature(const MetricModel& m, const TangentSample& at);
TensorValue mean_berwald(const MetricModel& m, const TangentSample& at);
TensorValue landsberg_tensor(const MetricModel& m, const TangentSample& at);
TensorValue jacobi_endomorphism(const MetricModel& m, const TangentSample& at);
TensorValue curvature_R(const MetricModel& m, const TangentSample& at);

// delta_i f = d_i f - N^j_i d_{y^j} f.
TensorValue delta_derivative(const PointGeometry& geo, const ScalarField& f, Scheme scheme = Scheme::Taylor);
TensorValue delta_derivative(const MetricModel& m, const ScalarField& f, const TangentSample& at);

// Deterministic samples: x uniform in the ball of `radius`, y uniform on the
// unit sphere.
std::vector<TangentSample> draw_samples(int dim, int count, std::uint64_t seed, double radius);

}  // namespace finsler
