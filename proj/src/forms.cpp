#include "finsler/forms.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "finsler/parallel.hpp"

namespace finsler {

namespace {

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double c : v) m = std::max(m, std::abs(c));
  return m;
}

}  // namespace

ParallelTolerances ParallelTolerances::for_scheme(Scheme scheme) {
  ParallelTolerances t;
  if (scheme == Scheme::FiniteDifference) t.covariant = t.delta = t.curvature = 1e-4;
  return t;
}

const char* to_string(ParallelVerdict v) {
  return v == ParallelVerdict::ParallelWithinTol ? "ParallelWithinTol" : "NotParallel";
}

TensorValue covariant_derivative(const PointGeometry& geo, const OneForm& form, Scheme scheme) {
  const int n = geo.dim;
  if (form.dim() != n) fail(ErrorKind::BadParameter, "one-form dimension does not match metric");
  const auto b = form.coefficients(geo.x);
  const auto db = form.coefficient_derivative(geo.x);
  TensorValue out(n, {kDown, kDown});
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double v = db(i, j);
      for (int k = 0; k < n; ++k) v -= geo.berwald_connection(k, j, i) * b[k];
      out(i, j) = v;
    }

  const auto delta = delta_derivative(geo, form.beta(), scheme);
  const auto contracted = out.contract(0, geo.y);
  const double scale = std::max(out.max_abs(), delta.max_abs());
  const double allowed = (scheme == Scheme::Taylor ? 1e-8 : 1e-3) * (1.0 + scale);
  if (max_abs_difference(contracted, delta) > allowed)
    fail(ErrorKind::ConventionMismatch, "y^i b_{i|j} differs from delta_j beta");
  return out;
}

TensorValue covariant_derivative(const MetricModel& m, const OneForm& form, const TangentSample& at) {
  return covariant_derivative(evaluate_geometry(m, at), form);
}

CurvatureForm d_R_beta(const PointGeometry& geo, const OneForm& form) {
  const int n = geo.dim;
  const auto b = form.coefficients(geo.x);
  CurvatureForm out{TensorValue(n, {kDown, kDown}, {antisymmetric(0, 1)}), TensorValue(n, {kDown})};
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      double v = 0.0;
      for (int h = 0; h < n; ++h) v += geo.curvature(h, j, k) * b[h];
      out.two_form(j, k) = v;
    }
  out.contracted = out.two_form.contract(1, geo.y);
  return out;
}

CurvatureForm d_R_beta(const MetricModel& m, const OneForm& form, const TangentSample& at) {
  return d_R_beta(evaluate_geometry(m, at), form);
}

MCovector m_covector(const PointGeometry& geo, const OneForm& form) {
  if (!geo.has_finsler) fail(ErrorKind::MissingFinslerFunction, "m_j needs a Finsler function");
  const int n = geo.dim;
  const auto b = form.coefficients(geo.x);
  double beta = 0.0;
  for (int i = 0; i < n; ++i) beta += b[i] * geo.y[i];
  MCovector out{TensorValue(n, {kFiberDown}), 0.0};
  double norm2 = 0.0;
  for (int j = 0; j < n; ++j) {
    out.components(j) = b[j] - beta / geo.finsler_value * geo.hilbert_form(j);
    norm2 += out.components(j) * out.components(j);
  }
  out.norm = std::sqrt(norm2);
  out.components.note = "|m| = " + std::to_string(out.norm);
  return out;
}

MCovector m_covector(const MetricModel& m, const OneForm& form, const TangentSample& at) {
  return m_covector(evaluate_geometry(m, at), form);
}

ParallelReport is_parallel(const MetricModel& m, const OneForm& form, const std::vector<TangentSample>& samples,
                           const ParallelTolerances& tol, Scheme scheme, int threads) {
  if (samples.size() < 10) fail(ErrorKind::InsufficientSamples, "is_parallel needs at least 10 samples");
  ParallelReport rep;
  rep.sample_count = static_cast<int>(samples.size());
  rep.tolerances = tol;
  const ScalarField beta = form.beta();
  struct Row {
    SampleResidual r;
    double euler = 0.0;
  };
  const auto rows = parallel_map(samples.size(), threads, [&](std::size_t s) {
    const auto geo = evaluate_geometry(m, samples[s], scheme);
    Row row;
    row.r.covariant = covariant_derivative(geo, form, scheme).max_abs();
    row.r.delta = delta_derivative(geo, beta, scheme).max_abs();
    row.r.curvature = d_R_beta(geo, form).two_form.max_abs();
    row.euler = homogeneity_check(beta, samples[s], 1);
    return row;
  });
  for (std::size_t s = 0; s < rows.size(); ++s) {
    const auto& r = rows[s].r;
    const int idx = static_cast<int>(s);
    if (rep.worst_covariant < 0 || r.covariant > rep.max_covariant) rep.max_covariant = r.covariant, rep.worst_covariant = idx;
    if (rep.worst_delta < 0 || r.delta > rep.max_delta) rep.max_delta = r.delta, rep.worst_delta = idx;
    if (rep.worst_curvature < 0 || r.curvature > rep.max_curvature) rep.max_curvature = r.curvature, rep.worst_curvature = idx;
    rep.max_euler = std::max(rep.max_euler, rows[s].euler);
    rep.per_sample.push_back(r);
  }
  const bool ok = rep.max_covariant <= tol.covariant && rep.max_delta <= tol.delta &&
                  rep.max_curvature <= tol.curvature && rep.max_euler <= tol.euler;
  rep.verdict = ok ? ParallelVerdict::ParallelWithinTol : ParallelVerdict::NotParallel;
  return rep;
}

MetricModel randers_lift(const MetricModel& m, const OneForm& form, int probe_points, std::uint64_t seed) {
  if (!m.finsler) fail(ErrorKind::MissingFinslerFunction, "Randers lift needs a Finsler function");
  if (form.dim() != m.dim) fail(ErrorKind::BadParameter, "one-form dimension does not match metric");
  const int n = m.dim;
  const ScalarField F = *m.finsler;
  const ScalarField beta = form.beta();

  auto points = draw_samples(n, probe_points, seed, m.domain.sample_radius);
  for (const auto& p : points) {
    std::vector<std::vector<double>> dirs{p.y()};
    auto b = form.coefficients(p.x());
    std::vector<double> minus_b(n);
    for (int i = 0; i < n; ++i) minus_b[i] = -b[i];
    if (max_abs(minus_b) > 0.0) dirs.push_back(minus_b);
    for (int i = 0; i < n; ++i)
      for (double sign : {1.0, -1.0}) {
        std::vector<double> e(n, 0.0);
        e[i] = sign;
        dirs.push_back(e);
      }
    for (const auto& d : dirs) {
      const TangentSample at(p.x(), d);
      if (!(eval_value(F, at) + eval_value(beta, at) > 0.0))
        fail(ErrorKind::NotPositive, "F + beta is not positive at a probed sample");
    }
  }

  MetricModel out;
  out.name = m.name + "+" + form.name();
  out.dim = n;
  out.domain = m.domain;
  out.finsler = ScalarField{
      [F, beta](std::span<const Jet> x, std::span<const Jet> y) { return F.jet(x, y) + beta.jet(x, y); },
      [F, beta](std::span<const double> x, std::span<const double> y) { return F.value(x, y) + beta.value(x, y); }};
  return out;
}

DeformationFunction randers_deformation() {
  return [](const Jet& s) { return 1.0 + s; };
}

DeformationFunction exponential_deformation() {
  return [](const Jet& s) { return exp(s); };
}

IndependenceReport functional_independence(const MetricModel& m, const OneForm& form, const DeformationFunction& phi,
                                           const std::vector<TangentSample>& samples) {
  if (!m.finsler) fail(ErrorKind::MissingFinslerFunction, "functional independence needs a Finsler function");
  const int n = m.dim;
  const ScalarField F = *m.finsler;
  const ScalarField beta = form.beta();
  auto deformed_jet = [F, beta, phi](std::span<const Jet> x, std::span<const Jet> y) {
    const Jet f = F.jet(x, y);
    return f * phi(beta.jet(x, y) / f);
  };
  const ScalarField deformed = ScalarField::from_jet(deformed_jet);

  IndependenceReport rep;
  for (const auto& at : samples) {
    const Jet a = eval_jet(F, at, JetOrder{1, 1, 1});
    const Jet b = eval_jet(deformed, at, JetOrder{1, 1, 1});
    Eigen::MatrixXd jac(2, 2 * n);
    for (int v = 0; v < 2 * n; ++v) {
      jac(0, v) = a.partial({v});
      jac(1, v) = b.partial({v});
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(jac);
    const auto sv = svd.singularValues();
    int rank = 0;
    if (sv(0) > 0.0) rank = sv(1) > 1e-8 * sv(0) ? 2 : 1;
    rep.ranks.push_back(rank);
    rep.max_rank = std::max(rep.max_rank, rank);
  }
  return rep;
}

std::pair<double, double> annihilation_check(const PointGeometry& geo, const OneForm& form) {
  if (!geo.has_finsler) fail(ErrorKind::MissingFinslerFunction, "annihilation check needs a Finsler function");
  const int n = geo.dim;
  const auto b = form.coefficients(geo.x);
  double with_l = 0.0, with_b = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double sl = 0.0, sb = 0.0;
        for (int h = 0; h < n; ++h) {
          sl += geo.hilbert_form(h) * geo.berwald_curvature(h, i, j, k);
          sb += b[h] * geo.berwald_curvature(h, i, j, k);
        }
        with_l = std::max(with_l, std::abs(sl));
        with_b = std::max(with_b, std::abs(sb));
      }
  return {with_l, with_b};
}

std::pair<double, double> annihilation_check(const MetricModel& m, const OneForm& form, const TangentSample& at) {
  return annihilation_check(evaluate_geometry(m, at), form);
}

}  // namespace finsler
