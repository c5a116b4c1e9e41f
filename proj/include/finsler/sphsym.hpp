#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "finsler/forms.hpp"
#include "finsler/geometry.hpp"

namespace finsler {

// Functions of (r, s) and of r. Arguments are jets in a common layout, so
// derivatives with respect to r and s come from the jet engine.
using RsFunction = std::function<Jet(const Jet& r, const Jet& s)>;
using RadialFunction = std::function<Jet(const Jet& r)>;

// F = |y| phi(|x|, <x,y>/|y|) on the ball of radius r0.
struct SphSymProfile {
  std::string name;
  RsFunction phi;
  double r0 = 1.0;

  double value(double r, double s) const;
};

SphSymProfile euclidean_profile();
// (sqrt(1 - r^2 + s^2) + s)^2 / ((1 - r^2)^2 sqrt(1 - r^2 + s^2))
SphSymProfile berwald_classic_profile();

// G^i = u P y^i + u^2 Q x^i
struct PQPair {
  RsFunction P;
  RsFunction Q;
};

struct PQValues {
  double P = 0.0;
  double Q = 0.0;
};

// b_i = f(r) x_i
struct RadialFactor {
  std::string name;
  RadialFunction f;
};

RadialFactor constant_factor(double c);

// The derivative d^vars g evaluated along jet arguments: g is expanded around
// the argument values in a local layout and the Taylor polynomial of the
// derivative is composed with the arguments.
Jet composed_partial(const std::function<Jet(std::span<const Jet>)>& g, std::span<const Jet> args,
                     std::span<const int> vars);

PQPair constant_pq(double P, double Q);
// P and Q of the spray of u phi. Throws SingularDenominator when
// phi - s phi_s + (r^2 - s^2) phi_ss vanishes within 1e-12. At r = 0 the
// values are the limits along s = 0.
PQPair pq_from_profile(const SphSymProfile& p);
PQValues pq_values(const PQPair& pq, double r, double s);

VectorField spray_field(const PQPair& pq);
TensorValue spray_from_pq(const PQPair& pq, const TangentSample& at);
// G^i_j = uP delta^i_j + P_s x_j y^i + (P - s P_s) y_j y^i / u + u Q_s x^i x_j + (2Q - s Q_s) x^i y_j
TensorValue connection_from_pq(const PQPair& pq, const TangentSample& at);

// Absolute values of the two metrizability PDE left-hand sides.
std::pair<double, double> metrizability_residuals(const SphSymProfile& p, const PQPair& pq, double r, double s);

// Q = s^2 f'(r) / (2 r^3 f(r)) - s P / r^2 + 1 / (2 r^2). DivisionByZero if
// r = 0 or f(r) = 0.
double parallel_q(const RadialFactor& f, const RsFunction& P, double r, double s);
RsFunction parallel_q_function(const RadialFactor& f, const RsFunction& P);
PQPair parallel_pq(const RadialFactor& f, const RsFunction& P);

// Signed left-hand sides of the three equations of the parallel-form system.
struct SssResiduals {
  double sss1 = 0.0;
  double sss2 = 0.0;
  double sss3 = 0.0;
};
SssResiduals sss_residuals(const RadialFactor& f, const RsFunction& P, const RsFunction& Q, double r, double s);

struct SphSymParallelReport {
  int sample_count = 0;
  double max_expansion = 0.0;  // max |delta_i beta| from the x_i / y_i coefficient expansion
  double max_pipeline = 0.0;   // max |delta_i beta| from the geometry pipeline on the spray
  double max_route_gap = 0.0;  // max difference between the two routes
  double max_x_coefficient = 0.0;
  double max_y_coefficient = 0.0;
  double tolerance = 1e-7;
  ParallelVerdict verdict = ParallelVerdict::NotParallel;
};

// beta = f(r) <x, y> against the spray of `pq`.
SphSymParallelReport parallel_form_check(const PQPair& pq, const RadialFactor& f, const std::vector<TangentSample>& samples,
                                         double tol = 1e-7);

MetricModel sphsym_metric(const SphSymProfile& p, int dim);
MetricModel spray_only_model(const PQPair& pq, int dim, double radius = 1.0);
OneForm radial_form(const RadialFactor& f, int dim);

// Grid over r in [r_min, r_max] and s in [-s_frac r, s_frac r].
std::vector<std::pair<double, double>> rs_grid(int nr = 20, int ns = 20, double r_min = 0.05, double r_max = 0.6,
                                               double s_frac = 0.95);

// Samples with r uniform in [r_min, r_max] and y on the unit sphere.
std::vector<TangentSample> draw_shell_samples(int dim, int count, std::uint64_t seed, double r_min, double r_max);

enum class ProfileClass { Riemannian, DegenerateLinear, NonRiemannian };
const char* to_string(ProfileClass c);
// Riemannian if max |phi_s| <= tol; DegenerateLinear if max |s phi_s / phi - 1| <= tol.
ProfileClass classify_profile(const SphSymProfile& p, const std::vector<std::pair<double, double>>& grid,
                              double tol = 1e-9);

}  // namespace finsler
