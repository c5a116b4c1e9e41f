#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "finsler/geometry.hpp"
#include "finsler/one_form.hpp"

namespace finsler {

struct ParallelTolerances {
  double covariant = 1e-7;
  double delta = 1e-7;
  double curvature = 1e-7;
  // |d_C beta - beta|; homogeneity of beta is structural.
  double euler = 1e-14;

  static ParallelTolerances for_scheme(Scheme scheme);
};

enum class ParallelVerdict { ParallelWithinTol, NotParallel };
const char* to_string(ParallelVerdict v);

struct SampleResidual {
  double covariant = 0.0;  // max |b_{i|j}|
  double delta = 0.0;      // max |delta_j beta|
  double curvature = 0.0;  // max |R^h_jk b_h|
};

struct ParallelReport {
  int sample_count = 0;
  double max_covariant = 0.0;
  double max_delta = 0.0;
  double max_curvature = 0.0;
  double max_euler = 0.0;
  // Index of the sample that attains each maximum.
  int worst_covariant = -1;
  int worst_delta = -1;
  int worst_curvature = -1;
  std::vector<SampleResidual> per_sample;
  ParallelTolerances tolerances;
  ParallelVerdict verdict = ParallelVerdict::NotParallel;
};

// b_{i|j} = d_j b_i - G^k_ji b_k, stored (i, j). Throws ConventionMismatch if
// y^i b_{i|j} disagrees with delta_j beta.
TensorValue covariant_derivative(const PointGeometry& geo, const OneForm& form, Scheme scheme = Scheme::Taylor);
TensorValue covariant_derivative(const MetricModel& m, const OneForm& form, const TangentSample& at);

struct CurvatureForm {
  TensorValue two_form;    // R^h_jk b_h
  TensorValue contracted;  // R^h_jk b_h y^k
};
CurvatureForm d_R_beta(const PointGeometry& geo, const OneForm& form);
CurvatureForm d_R_beta(const MetricModel& m, const OneForm& form, const TangentSample& at);

struct MCovector {
  TensorValue components;  // m_j = b_j - (beta / F) l_j
  double norm = 0.0;       // Euclidean norm of the components
};
MCovector m_covector(const PointGeometry& geo, const OneForm& form);
MCovector m_covector(const MetricModel& m, const OneForm& form, const TangentSample& at);

// Needs at least 10 samples.
ParallelReport is_parallel(const MetricModel& m, const OneForm& form, const std::vector<TangentSample>& samples,
                           const ParallelTolerances& tol = {}, Scheme scheme = Scheme::Taylor, int threads = 1);

// F + beta. Positivity is probed at `probe_points` base points from the
// sampling ball, in the directions -b, +-e_i and random unit vectors.
MetricModel randers_lift(const MetricModel& m, const OneForm& form, int probe_points = 200, std::uint64_t seed = 0);

using DeformationFunction = std::function<Jet(const Jet&)>;
DeformationFunction randers_deformation();      // 1 + s
DeformationFunction exponential_deformation();  // e^s

struct IndependenceReport {
  int max_rank = 0;
  std::vector<int> ranks;
};
// Rank of the 2 x 2n Jacobian of (F, F phi(beta / F)); sigma_2 > 1e-8 sigma_1 counts as rank 2.
IndependenceReport functional_independence(const MetricModel& m, const OneForm& form, const DeformationFunction& phi,
                                           const std::vector<TangentSample>& samples);

// (max |l_h G^h_ijk|, max |b_h G^h_ijk|)
std::pair<double, double> annihilation_check(const PointGeometry& geo, const OneForm& form);
std::pair<double, double> annihilation_check(const MetricModel& m, const OneForm& form, const TangentSample& at);

}  // namespace finsler
