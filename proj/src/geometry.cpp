#include "finsler/geometry.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

namespace finsler {

namespace {

// Layout of the energy jet: the spray needs E to second order in x and fifth
// order in y (three fiber derivatives of g^{-1}).
LayoutPtr energy_layout(int n) { return Layout::get(n, n, 2, 5, 5); }
// Layout of the spray jet: d_x G, d_x d_y G and up to third fiber derivatives.
LayoutPtr spray_layout(int n) { return Layout::get(n, n, 1, 3, 3); }

// Solves A z = b for jet-valued A, b by Gaussian elimination with pivoting on
// the constant terms.
std::vector<Jet> solve(std::vector<std::vector<Jet>> a, std::vector<Jet> b) {
  const int n = static_cast<int>(b.size());
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a[r][col].value()) > std::abs(a[piv][col].value())) piv = r;
    std::swap(a[col], a[piv]);
    std::swap(b[col], b[piv]);
    const Jet inv = reciprocal(a[col][col]);
    for (int r = col + 1; r < n; ++r) {
      const Jet factor = a[r][col] * inv;
      for (int c = col; c < n; ++c) a[r][c] -= factor * a[col][c];
      b[r] -= factor * b[col];
    }
  }
  std::vector<Jet> z(n);
  for (int r = n - 1; r >= 0; --r) {
    Jet acc = b[r];
    for (int c = r + 1; c < n; ++c) acc -= a[r][c] * z[c];
    z[r] = acc / a[r][r];
  }
  return z;
}

void require_finite(const Jet& j, const char* what) {
  if (!j.all_finite()) fail(ErrorKind::NonFiniteValue, std::string(what) + ": non-finite jet (domain violation?)");
}

struct FinslerJets {
  Jet finsler;
  Jet energy;
  std::vector<Jet> spray;
};

FinslerJets spray_from_finsler(const MetricModel& m, const TangentSample& at, Scheme scheme,
                               const PipelineTolerances& tol) {
  const int n = m.dim;
  const auto layout = energy_layout(n);
  Jet F = eval_jet(*m.finsler, at, JetOrder{2, 5, 5}, scheme);
  if (F.layout() != layout) F = F.project(layout);
  if (!(F.value() > 0.0)) fail(ErrorKind::NotPositive, "Finsler function is not positive at sample");
  const Jet E = 0.5 * F * F;

  std::vector<Jet> ey(n), ex(n);
  for (int h = 0; h < n; ++h) {
    ey[h] = E.derivative(n + h);
    ex[h] = E.derivative(h);
  }
  const auto sl = spray_layout(n);
  std::vector<std::vector<Jet>> g(n, std::vector<Jet>(n));
  Eigen::MatrixXd g0(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      g[i][j] = ey[j].derivative(n + i).project(sl);
      g0(i, j) = g[i][j].value();
    }
  double mean_diag = 0.0;
  for (int i = 0; i < n; ++i) mean_diag += std::abs(g0(i, i));
  mean_diag /= n;
  if (!(std::abs(g0.determinant()) > tol.degeneracy * std::pow(mean_diag, n)))
    fail(ErrorKind::DegenerateMetric, "metric tensor g_ij is degenerate at sample");

  auto [xs, ys] = seed_variables(sl, at);
  std::vector<Jet> rhs(n);
  for (int h = 0; h < n; ++h) {
    Jet acc = -ex[h].project(sl);
    for (int j = 0; j < n; ++j) acc += ys[j] * ey[h].derivative(j).project(sl);
    rhs[h] = acc;
  }
  auto z = solve(std::move(g), std::move(rhs));
  for (auto& c : z) {
    c *= 0.5;
    require_finite(c, "spray");
  }
  return {F, E, std::move(z)};
}

}  // namespace

bool Domain::contains(std::span<const double> x) const {
  if (kind == Kind::Everywhere) return true;
  double r2 = 0.0;
  for (double v : x) r2 += v * v;
  return std::sqrt(r2) < radius;
}

std::vector<double> PointGeometry::lower_metric(std::span<const double> v) const {
  std::vector<double> out(dim, 0.0);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) out[i] += metric(i, j) * v[j];
  return out;
}

std::vector<Jet> spray_jet(const MetricModel& m, const TangentSample& at, Scheme scheme) {
  if (at.dim() != m.dim) fail(ErrorKind::BadParameter, "sample dimension does not match metric");
  if (m.finsler) return spray_from_finsler(m, at, scheme, {}).spray;
  if (!m.spray_override) fail(ErrorKind::MissingFinslerFunction, "metric model has neither F nor a spray");
  auto g = eval_vector_jet(*m.spray_override, at, JetOrder{1, 3, 3});
  return g;
}

PointGeometry evaluate_geometry(const MetricModel& m, const TangentSample& at, Scheme scheme,
                                const PipelineTolerances& tol) {
  const int n = m.dim;
  if (at.dim() != n) fail(ErrorKind::BadParameter, "sample dimension does not match metric");
  if (!m.domain.contains(at.x())) fail(ErrorKind::NonFiniteValue, "sample base point outside the metric domain");
  PointGeometry geo;
  geo.dim = n;
  geo.x = at.x();
  geo.y = at.y();
  geo.has_finsler = m.has_finsler();

  std::vector<Jet> G;
  if (m.finsler) {
    auto fj = spray_from_finsler(m, at, scheme, tol);
    G = std::move(fj.spray);
    const Jet& F = fj.finsler;
    geo.finsler_value = F.value();
    geo.energy = 0.5 * F.value() * F.value();
    geo.metric = TensorValue(n, {kFiberDown, kFiberDown}, {symmetric(0, 1)});
    geo.hilbert_form = TensorValue(n, {kFiberDown});
    geo.angular_metric = TensorValue(n, {kFiberDown, kFiberDown}, {symmetric(0, 1)});
    for (int i = 0; i < n; ++i) geo.hilbert_form(i) = F.partial({n + i});
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double fyy = F.partial({n + i, n + j});
        const double li = geo.hilbert_form(i), lj = geo.hilbert_form(j);
        geo.metric(i, j) = fj.energy.partial({n + i, n + j});
        geo.angular_metric(i, j) = geo.metric(i, j) - li * lj;
        geo.angular_identity_defect =
            std::max(geo.angular_identity_defect, std::abs(geo.angular_metric(i, j) - F.value() * fyy));
      }
    Eigen::MatrixXd g0(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) g0(i, j) = geo.metric(i, j);
    const Eigen::MatrixXd gi = g0.inverse();
    geo.inverse_metric = TensorValue(n, {{Variance::Up, Slot::Fiber}, {Variance::Up, Slot::Fiber}}, {symmetric(0, 1)});
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) geo.inverse_metric(i, j) = gi(i, j);

    if (m.spray_override) {
      const auto closed = eval_vector(*m.spray_override, at);
      double dev = 0.0;
      for (int i = 0; i < n; ++i) dev = std::max(dev, std::abs(closed[i] - G[i].value()));
      geo.spray_override_deviation = dev;
    }
  } else {
    G = spray_jet(m, at, scheme);
  }

  geo.spray = TensorValue(n, {kUp});
  geo.connection = TensorValue(n, {kUp, kDown});
  geo.berwald_connection = TensorValue(n, {kUp, kDown, kDown}, {symmetric(1, 2)});
  geo.berwald_curvature =
      TensorValue(n, {kUp, kDown, kDown, kDown}, {symmetric(1, 2), symmetric(2, 3), symmetric(1, 3)});
  geo.mean_berwald = TensorValue(n, {kDown, kDown}, {symmetric(0, 1)});
  geo.spray_x_derivative = TensorValue(n, {kUp, kDown});
  geo.connection_x_derivative = TensorValue(n, {kUp, kDown, kDown});
  for (int i = 0; i < n; ++i) {
    geo.spray(i) = G[i].value();
    for (int j = 0; j < n; ++j) {
      geo.connection(i, j) = G[i].partial({n + j});
      geo.spray_x_derivative(i, j) = G[i].partial({j});
      for (int k = 0; k < n; ++k) {
        geo.berwald_connection(i, j, k) = G[i].partial({n + j, n + k});
        geo.connection_x_derivative(i, j, k) = G[i].partial({n + j, k});
        for (int l = 0; l < n; ++l) geo.berwald_curvature(i, j, k, l) = G[i].partial({n + j, n + k, n + l});
      }
    }
  }
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += geo.berwald_curvature(i, i, j, k);
      geo.mean_berwald(j, k) = 0.5 * s;
    }

  if (m.finsler) {
    geo.landsberg = TensorValue(n, {kDown, kDown, kDown}, {symmetric(0, 1), symmetric(1, 2), symmetric(0, 2)});
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          double s = 0.0;
          for (int h = 0; h < n; ++h) s += geo.berwald_curvature(h, i, j, k) * geo.hilbert_form(h);
          geo.landsberg(i, j, k) = -0.5 * geo.finsler_value * s;
        }
  }

  // Phi^i_j = 2 d_j G^i - y^k d_k N^i_j + 2 G^k G^i_jk - N^i_k N^k_j
  geo.jacobi = TensorValue(n, {kUp, kDown});
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double v = 2.0 * geo.spray_x_derivative(i, j);
      for (int k = 0; k < n; ++k) {
        v -= geo.y[k] * geo.connection_x_derivative(i, j, k);
        v += 2.0 * geo.spray(k) * geo.berwald_connection(i, j, k);
        v -= geo.connection(i, k) * geo.connection(k, j);
      }
      geo.jacobi(i, j) = v;
    }

  // delta_k N^h_j = d_k N^h_j - N^m_k G^h_jm; the raw curvature is
  // delta_k N^h_j - delta_j N^h_k.
  auto delta_n = [&](int h, int j, int k) {
    double v = geo.connection_x_derivative(h, j, k);
    for (int mm = 0; mm < n; ++mm) v -= geo.connection(mm, k) * geo.berwald_connection(h, j, mm);
    return v;
  };
  TensorValue raw(n, {kUp, kDown, kDown}, {antisymmetric(1, 2)});
  for (int h = 0; h < n; ++h)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) raw(h, j, k) = j == k ? 0.0 : delta_n(h, j, k) - delta_n(h, k, j);
  for (int h = 0; h < n; ++h)
    for (int j = 0; j < n; ++j)
      for (int k = j + 1; k < n; ++k) raw(h, k, j) = -raw(h, j, k);

  const TensorValue contracted = raw.contract(2, geo.y);
  double plus = 0.0, minus = 0.0, scale = 0.0;
  for (int h = 0; h < n; ++h)
    for (int j = 0; j < n; ++j) {
      plus = std::max(plus, std::abs(contracted(h, j) - geo.jacobi(h, j)));
      minus = std::max(minus, std::abs(contracted(h, j) + geo.jacobi(h, j)));
      scale = std::max({scale, std::abs(contracted(h, j)), std::abs(geo.jacobi(h, j))});
    }
  const double allowed = (scheme == Scheme::Taylor ? tol.convention : 1e3 * tol.convention) * (1.0 + scale);
  // The delta-difference contracts to -Phi analytically; keep -1 unless +1 fits strictly better.
  geo.curvature_sign = plus < minus ? 1 : -1;
  geo.curvature_contraction_defect = std::min(plus, minus);
  if (geo.curvature_contraction_defect > allowed)
    fail(ErrorKind::ConventionMismatch, "R^h_ij y^j differs from the Jacobi endomorphism by more than a sign");
  geo.curvature = raw;
  for (auto& c : geo.curvature.components()) c *= geo.curvature_sign;
  geo.curvature.note = geo.curvature_sign < 0 ? "R = delta_j N^h_k - delta_k N^h_j" : "R = delta_k N^h_j - delta_j N^h_k";
  return geo;
}

namespace {
const PointGeometry& require_finsler(const PointGeometry& g) {
  if (!g.has_finsler) fail(ErrorKind::MissingFinslerFunction, "operation needs a Finsler function");
  return g;
}
}  // namespace

double energy(const MetricModel& m, const TangentSample& at) {
  if (!m.finsler) fail(ErrorKind::MissingFinslerFunction, "energy needs a Finsler function");
  const double f = eval_value(*m.finsler, at);
  return 0.5 * f * f;
}

TensorValue metric_tensor(const MetricModel& m, const TangentSample& at) {
  return require_finsler(evaluate_geometry(m, at)).metric;
}
TensorValue hilbert_form(const MetricModel& m, const TangentSample& at) {
  return require_finsler(evaluate_geometry(m, at)).hilbert_form;
}
TensorValue angular_metric(const MetricModel& m, const TangentSample& at) {
  return require_finsler(evaluate_geometry(m, at)).angular_metric;
}
TensorValue spray_coefficients(const MetricModel& m, const TangentSample& at) { return evaluate_geometry(m, at).spray; }
TensorValue nonlinear_connection(const MetricModel& m, const TangentSample& at) {
  return evaluate_geometry(m, at).connection;
}
TensorValue berwald_connection(const MetricModel& m, const TangentSample& at) {
  return evaluate_geometry(m, at).berwald_connection;
}
TensorValue berwald_curvature(const MetricModel& m, const TangentSample& at) {
  return evaluate_geometry(m, at).berwald_curvature;
}
TensorValue mean_berwald(const MetricModel& m, const TangentSample& at) { return evaluate_geometry(m, at).mean_berwald; }
TensorValue landsberg_tensor(const MetricModel& m, const TangentSample& at) {
  return require_finsler(evaluate_geometry(m, at)).landsberg;
}
TensorValue jacobi_endomorphism(const MetricModel& m, const TangentSample& at) {
  return evaluate_geometry(m, at).jacobi;
}
TensorValue curvature_R(const MetricModel& m, const TangentSample& at) { return evaluate_geometry(m, at).curvature; }

TensorValue delta_derivative(const PointGeometry& geo, const ScalarField& f, Scheme scheme) {
  const int n = geo.dim;
  const TangentSample at(geo.x, geo.y);
  const Jet fj = eval_jet(f, at, JetOrder{1, 1, 1}, scheme);
  TensorValue out(n, {kDown});
  for (int i = 0; i < n; ++i) {
    double v = fj.partial({i});
    for (int j = 0; j < n; ++j) v -= geo.connection(j, i) * fj.partial({n + j});
    out(i) = v;
  }
  return out;
}

TensorValue delta_derivative(const MetricModel& m, const ScalarField& f, const TangentSample& at) {
  return delta_derivative(evaluate_geometry(m, at), f);
}

}  // namespace finsler
