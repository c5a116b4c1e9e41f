#pragma once

#include <optional>
#include <string>
#include <vector>

#include "finsler/catalogue.hpp"
#include "finsler/config.hpp"
#include "finsler/expression.hpp"
#include "finsler/forms.hpp"
#include "finsler/report.hpp"
#include "finsler/sphsym.hpp"

namespace finsler {

// Expression adapters. Variable names: r, s for profiles and P; r for f;
// x1..xn for form coefficients; x1..xn, y1..yn for a Finsler function.
RsFunction rs_expression(const std::string& src);
RadialFunction radial_expression(const std::string& src);
OneForm expression_form(const std::vector<std::string>& coefficients, int dim);
ScalarField finsler_expression(const std::string& src, int dim);

// Parameters used by the invariant battery and as CLI defaults when `a` or
// `c_mu` is not given: example1 a = (0.5, 0.1, 0, ...), c_mu = (0, 0.2, 0, ...);
// general_berwald a = (0.1, 0.05, 0, ...); zeros otherwise.
CatalogueParams reference_params(const std::string& name, int dim);

struct BuiltMetric {
  MetricModel model;
  std::optional<CatalogueEntry> entry;
  std::optional<SphSymProfile> profile;
  std::string source;  // catalogue, phi, finsler or spray
};

// Precedence: finsler expression, phi profile, catalogue name, then P (a
// spray-only model from P and f). ConfigError when nothing selects a metric.
BuiltMetric build_metric(const RunConfig& cfg);

// Expressions from `form`, else the catalogue parallel form, else b_i = f(r) x_i.
std::optional<OneForm> build_form(const RunConfig& cfg, const BuiltMetric& metric);

// A nonconstant form for identities that hold for every one-form.
OneForm probe_form(int dim);

struct BatteryOptions {
  double tol = 1e-8;
  Scheme scheme = Scheme::Taylor;
  int threads = 1;
  std::uint64_t seed = 0;
};

// Euler-chain contractions, symmetry tags, trace and angular identities,
// homogeneity, closed-form agreement, d_C beta = beta and y^i b_{i|j} = delta_j beta.
// Residuals are relative to 1 + the scale of the compared quantities.
std::vector<CheckRecord> invariant_battery(const BuiltMetric& metric, const OneForm& form,
                                           const std::vector<TangentSample>& samples, const BatteryOptions& options);

// Dispatches cfg.command. Module errors propagate as finsler::Error.
Report run(const RunConfig& cfg);

// 0 all checks pass, 1 a check failed, 2 config or parse error, 3 numeric domain error.
int exit_code(const Report& r);
int exit_code(ErrorKind kind);

}  // namespace finsler
