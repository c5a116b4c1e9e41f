#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "finsler/geometry.hpp"
#include "finsler/one_form.hpp"

namespace finsler {

struct CatalogueParams {
  int dim = 3;
  std::vector<double> a;  // zero vector when empty
  // Parallel-form family constants for `example1`.
  double c = 1.0;
  std::vector<double> c_mu;
};

using ClosedTensor = std::function<TensorValue(const TangentSample&)>;

struct CatalogueEntry {
  std::string name;
  MetricModel model;
  std::vector<double> a;
  std::optional<VectorField> closed_spray;
  std::optional<ClosedTensor> closed_connection;
  std::optional<ClosedTensor> closed_berwald_curvature;
  std::optional<OneForm> parallel_form;
  std::optional<double> flag_curvature;
  bool riemannian = false;
  bool berwald = false;
  bool landsberg = false;
};

const std::vector<std::string>& catalogue_names();

// Names: euclidean, klein, example1, berwald_classic, general_berwald.
CatalogueEntry entry(const std::string& name, const CatalogueParams& params = {});

// Closed-form Berwald curvature of the general Berwald metric, term by term,
// with Euclidean lowering of x_i and y_i. Independent of a.
TensorValue closed_berwald_curvature(const TangentSample& at);

// Projective factor P = L + <x,y>/(1-|x|^2) of the general Berwald metric and
// its fiber derivatives in closed form.
struct ProjectiveFactorJets {
  double value = 0.0;
  TensorValue first;   // P_i
  TensorValue second;  // P_ij
  TensorValue third;   // P_ijk
};

ProjectiveFactorJets projective_factor_jets(const TangentSample& at);

// G^h_ijk = P_ijk y^h + P_ij delta^h_k + P_jk delta^h_i + P_ki delta^h_j
TensorValue assemble_berwald_curvature(const ProjectiveFactorJets& p, std::span<const double> y);

// The projective factor as a scalar field, for jet cross-checks.
ScalarField projective_factor_field();

}  // namespace finsler
