#include "finsler/calculus.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

namespace finsler {

namespace {

constexpr int kRichardsonLevels = 3;

// Base step for a k-th order mixed partial. Central differences have error
// O(h^2); after kRichardsonLevels levels the truncation error is O(h^(2L)) and
// rounding grows like eps / h^k, which balances at h ~ eps^(1 / (k + 2L)).
double fd_base_step(int order) {
  const double eps = std::numeric_limits<double>::epsilon();
  return 2.0 * std::pow(eps, 1.0 / (order + 2.0 * kRichardsonLevels));
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) fail(ErrorKind::NonFiniteValue, std::string(what) + ": non-finite value (domain violation?)");
}

// One central-difference estimate with per-variable steps h[v].
double central_difference(const ScalarField& f, const TangentSample& at, std::span<const int> exps,
                          std::span<const double> h) {
  const int n = at.dim();
  std::vector<int> vars;
  for (int v = 0; v < 2 * n; ++v)
    if (exps[v] > 0) vars.push_back(v);
  std::vector<int> j(vars.size(), 0);
  std::vector<double> px(at.x()), py(at.y());
  double sum = 0.0;
  while (true) {
    double w = 1.0;
    for (std::size_t t = 0; t < vars.size(); ++t) {
      const int v = vars[t];
      const int m = exps[v];
      const double off = (0.5 * m - j[t]) * h[v];
      if (v < n)
        px[v] = at.x()[v] + off;
      else
        py[v - n] = at.y()[v - n] + off;
      w *= ((j[t] % 2) ? -1.0 : 1.0) * binomial(m, j[t]) / std::pow(h[v], m);
    }
    const double fv = f.value(px, py);
    require_finite(fv, "finite difference");
    sum += w * fv;
    std::size_t t = 0;
    for (; t < vars.size(); ++t) {
      if (++j[t] <= exps[vars[t]]) break;
      j[t] = 0;
    }
    if (t == vars.size()) break;
  }
  return sum;
}

}  // namespace

TangentSample::TangentSample(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
  if (x_.size() != y_.size() || x_.empty()) fail(ErrorKind::BadParameter, "tangent sample: x and y must have equal nonzero length");
  double norm2 = 0.0;
  for (std::size_t i = 0; i < y_.size(); ++i) {
    if (!std::isfinite(x_[i]) || !std::isfinite(y_[i])) fail(ErrorKind::BadParameter, "tangent sample: non-finite coordinate");
    norm2 += y_[i] * y_[i];
  }
  if (!(norm2 > 0.0)) fail(ErrorKind::BadParameter, "tangent sample: y must be nonzero");
}

std::pair<std::vector<Jet>, std::vector<Jet>> seed_variables(const LayoutPtr& layout, const TangentSample& at) {
  const int n = at.dim();
  std::vector<Jet> xs, ys;
  xs.reserve(n);
  ys.reserve(n);
  for (int i = 0; i < n; ++i) xs.push_back(Jet::variable(layout, i, at.x()[i]));
  for (int i = 0; i < n; ++i) ys.push_back(Jet::variable(layout, n + i, at.y()[i]));
  return {std::move(xs), std::move(ys)};
}

double finite_difference_partial(const ScalarField& f, const TangentSample& at, std::span<const int> exponents) {
  const int n = at.dim();
  int order = 0;
  for (int e : exponents) order += e;
  if (order == 0) return eval_value(f, at);
  const double h0 = fd_base_step(order);
  std::vector<double> h(2 * n);
  for (int v = 0; v < 2 * n; ++v) h[v] = h0 * (1.0 + std::abs(v < n ? at.x()[v] : at.y()[v - n]));

  std::array<std::array<double, kRichardsonLevels>, kRichardsonLevels> table{};
  for (int l = 0; l < kRichardsonLevels; ++l) {
    table[l][0] = central_difference(f, at, exponents, h);
    for (int m = 1; m <= l; ++m) {
      const double factor = std::pow(4.0, m) - 1.0;
      table[l][m] = table[l][m - 1] + (table[l][m - 1] - table[l - 1][m - 1]) / factor;
    }
    for (auto& hv : h) hv *= 0.5;
  }
  return table[kRichardsonLevels - 1][kRichardsonLevels - 1];
}

ScalarJet eval_jet(const ScalarField& f, const TangentSample& at, JetOrder order, Scheme scheme) {
  if (order.kx < 0 || order.ky < 0 || order.kx > JetOrder::kMaxX || order.ky > JetOrder::kMaxY)
    fail(ErrorKind::BadParameter, "eval_jet: derivative order outside caps");
  const int n = at.dim();
  auto layout = Layout::get(n, n, order.kx, order.ky, order.total_order());
  if (scheme == Scheme::Taylor) {
    auto [xs, ys] = seed_variables(layout, at);
    Jet r = f.jet(xs, ys);
    if (r.layout() != layout && r.layout()->contains(*layout)) r = r.project(layout);
    if (!r.all_finite()) fail(ErrorKind::NonFiniteValue, "eval_jet: non-finite value or partial (domain violation?)");
    return r;
  }
  Jet r(layout, eval_value(f, at));
  std::vector<int> exps(2 * n);
  for (int i = 1; i < layout->size(); ++i) {
    const auto e = layout->exponents(i);
    double fact = 1.0;
    for (int v = 0; v < 2 * n; ++v) {
      exps[v] = e[v];
      for (int k = 2; k <= e[v]; ++k) fact *= k;
    }
    r.coefficients()[i] = finite_difference_partial(f, at, exps) / fact;
  }
  return r;
}

std::vector<Jet> eval_vector_jet(const VectorField& f, const TangentSample& at, JetOrder order) {
  const int n = at.dim();
  auto layout = Layout::get(n, n, order.kx, order.ky, order.total_order());
  auto [xs, ys] = seed_variables(layout, at);
  auto r = f(xs, ys);
  for (auto& c : r) {
    if (c.layout() != layout && c.layout()->contains(*layout)) c = c.project(layout);
    if (!c.all_finite()) fail(ErrorKind::NonFiniteValue, "vector field: non-finite value or partial");
  }
  return r;
}

std::vector<double> eval_vector(const VectorField& f, const TangentSample& at) {
  auto jets = eval_vector_jet(f, at, JetOrder{0, 0, 0});
  std::vector<double> out;
  out.reserve(jets.size());
  for (const auto& j : jets) out.push_back(j.value());
  return out;
}

double eval_value(const ScalarField& f, const TangentSample& at) {
  const double v = f.value(at.x(), at.y());
  require_finite(v, "scalar field");
  return v;
}

namespace {
constexpr std::array<double, 3> kHomogeneityScales = {0.5, 2.0, 3.7};
}

double homogeneity_check(const ScalarField& f, const TangentSample& at, int degree) {
  const double base = eval_value(f, at);
  double worst = 0.0;
  for (double lambda : kHomogeneityScales) {
    std::vector<double> y = at.y();
    for (auto& c : y) c *= lambda;
    const double scaled = f.value(at.x(), y);
    require_finite(scaled, "homogeneity check");
    worst = std::max(worst, std::abs(scaled - std::pow(lambda, degree) * base) / (1.0 + std::abs(base)));
  }
  return worst;
}

double homogeneity_check(const VectorField& f, const TangentSample& at, int degree) {
  const auto base = eval_vector(f, at);
  double worst = 0.0;
  for (double lambda : kHomogeneityScales) {
    std::vector<double> y = at.y();
    for (auto& c : y) c *= lambda;
    const auto scaled = eval_vector(f, TangentSample(at.x(), y));
    for (std::size_t i = 0; i < base.size(); ++i)
      worst = std::max(worst, std::abs(scaled[i] - std::pow(lambda, degree) * base[i]) / (1.0 + std::abs(base[i])));
  }
  return worst;
}

}  // namespace finsler

namespace finsler {

ScalarField ScalarField::from_jet(std::function<Jet(std::span<const Jet>, std::span<const Jet>)> fn) {
  auto value = [fn](std::span<const double> x, std::span<const double> y) {
    const auto layout = Layout::get(static_cast<int>(x.size()), static_cast<int>(y.size()), 0, 0, 0);
    std::vector<Jet> xs, ys;
    for (double v : x) xs.emplace_back(layout, v);
    for (double v : y) ys.emplace_back(layout, v);
    return fn(xs, ys).value();
  };
  return ScalarField{std::move(fn), std::move(value)};
}

}  // namespace finsler
