#include "finsler/catalogue.hpp"

#include <cmath>
#include <limits>
#include <numeric>

namespace finsler {

namespace {

// sqrt(|y|^2 - |x|^2 |y|^2 + <x,y>^2), the Klein numerator.
template <class T>
T klein_root(std::span<const T> x, std::span<const T> y) {
  using std::sqrt;
  const T x2 = dot<T>(x, x), y2 = dot<T>(y, y), xy = dot<T>(x, y);
  return sqrt(y2 - x2 * y2 + xy * xy);
}

template <class T>
T euclidean_norm(std::span<const T> x, std::span<const T> y) {
  using std::sqrt;
  (void)x;
  return sqrt(dot<T>(y, y));
}

template <class T>
T klein_metric(std::span<const T> x, std::span<const T> y) {
  return klein_root(x, y) / (1.0 - dot<T>(x, x));
}

// Riemannian flat metric with spray G^i = -<a,y> y^i / (1 + <a,x>).
template <class T>
T flat_projective_metric(std::span<const double> a, std::span<const T> x, std::span<const T> y) {
  using std::sqrt;
  const T A = 1.0 + inner<T>(a, x);
  const T ay = inner<T>(a, y);
  const double a2 = std::inner_product(a.begin(), a.end(), a.begin(), 0.0);
  const T inside = dot<T>(y, y) - 2.0 * ay * dot<T>(x, y) / A - (1.0 - dot<T>(x, x)) * ay * ay / (A * A);
  return std::sqrt(1.0 - a2) / A * sqrt(inside);
}

template <class T>
T general_berwald_metric(std::span<const double> a, std::span<const T> x, std::span<const T> y) {
  const T root = klein_root(x, y);
  const T x2 = dot<T>(x, x), xy = dot<T>(x, y);
  const T ay = inner<T>(a, y);
  const T sum = root + xy;
  const T one_minus = 1.0 - x2;
  const T first = 1.0 + inner<T>(a, x) + (ay - x2 * ay) / sum;
  return first * (sum * sum) / (one_minus * one_minus * root);
}

template <class T>
T projective_factor(std::span<const T> x, std::span<const T> y) {
  return (klein_root(x, y) + dot<T>(x, y)) / (1.0 - dot<T>(x, x));
}

// G^i = p(x, y) y^i for a scalar factor p.
template <class Fn>
VectorField projective_spray(Fn factor) {
  return [factor](std::span<const Jet> x, std::span<const Jet> y) {
    const Jet p = factor(x, y);
    std::vector<Jet> g;
    for (const auto& yi : y) g.push_back(p * yi);
    return g;
  };
}

struct Frame {
  int n;
  std::vector<double> x, y;
  double A, t, L;
};

Frame frame(const TangentSample& at) {
  Frame f{at.dim(), at.x(), at.y(), 0.0, 0.0, 0.0};
  double x2 = 0.0, y2 = 0.0;
  for (int i = 0; i < f.n; ++i) {
    x2 += f.x[i] * f.x[i];
    y2 += f.y[i] * f.y[i];
    f.t += f.x[i] * f.y[i];
  }
  f.A = 1.0 - x2;
  f.L = std::sqrt(y2 - x2 * y2 + f.t * f.t) / f.A;
  if (!(f.A > 0.0) || !std::isfinite(f.L) || f.L <= 0.0)
    fail(ErrorKind::NonFiniteValue, "general Berwald closed form evaluated outside the unit ball");
  return f;
}

double kd(int i, int j) { return i == j ? 1.0 : 0.0; }

void check_finite(const TensorValue& t) {
  for (double v : t.components())
    if (!std::isfinite(v)) fail(ErrorKind::NonFiniteValue, "closed form produced a non-finite component");
}

}  // namespace

const std::vector<std::string>& catalogue_names() {
  static const std::vector<std::string> names{"euclidean", "klein", "example1", "berwald_classic", "general_berwald"};
  return names;
}

TensorValue closed_berwald_curvature(const TangentSample& at) {
  const Frame f = frame(at);
  const int n = f.n;
  const auto& x = f.x;
  const auto& y = f.y;
  const double A = f.A, t = f.t, L = f.L;
  const double L3 = L * L * L, L5 = L3 * L * L;
  const double A2 = A * A, A3 = A2 * A, A4 = A3 * A, A5 = A4 * A, A6 = A5 * A;

  const double c_delta = 1.0 / (L * A);
  const double c_ydelta = -1.0 / (L3 * A2);
  const double c_yy = -1.0 / (L3 * A2);
  const double c_xdelta = -t / (L3 * A3);
  const double c_xx = -t * t / (L3 * A4) + 1.0 / (L * A2);
  const double c_xy = -t / (L3 * A3);
  const double c_xxx = -3.0 * t / (L3 * A4) + 3.0 * t * t * t / (L5 * A6);
  const double c_yyy = 3.0 / (L5 * A3);
  const double c_yyx = 3.0 * t / (L5 * A4);
  const double c_yxx = 3.0 * t * t / (L5 * A5) - 1.0 / (L3 * A3);

  TensorValue out(n, {kUp, kDown, kDown, kDown}, {symmetric(1, 2), symmetric(2, 3), symmetric(1, 3)},
                  LoweringConvention::EuclideanLowering);
  for (int h = 0; h < n; ++h)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          double v = c_delta * (kd(i, j) * kd(h, k) + kd(j, k) * kd(h, i) + kd(k, i) * kd(h, j));
          v += c_ydelta * (y[i] * kd(j, k) + y[j] * kd(k, i) + y[k] * kd(i, j)) * y[h];
          v += c_yy * (y[i] * y[j] * kd(h, k) + y[j] * y[k] * kd(h, i) + y[k] * y[i] * kd(h, j));
          v += c_xdelta * (x[i] * kd(j, k) + x[j] * kd(k, i) + x[k] * kd(i, j)) * y[h];
          v += c_xx * (x[i] * x[j] * kd(h, k) + x[j] * x[k] * kd(h, i) + x[k] * x[i] * kd(h, j));
          v += c_xy * ((x[i] * y[j] + x[j] * y[i]) * kd(h, k) + (x[j] * y[k] + x[k] * y[j]) * kd(h, i) +
                       (x[k] * y[i] + x[i] * y[k]) * kd(h, j));
          v += c_xxx * x[i] * x[j] * x[k] * y[h];
          v += c_yyy * y[i] * y[j] * y[k] * y[h];
          v += c_yyx * (y[i] * y[j] * x[k] + y[j] * y[k] * x[i] + y[k] * y[i] * x[j]) * y[h];
          v += c_yxx * (y[i] * x[j] * x[k] + y[j] * x[k] * x[i] + y[k] * x[i] * x[j]) * y[h];
          out(h, i, j, k) = v;
        }
  check_finite(out);
  return out;
}

ProjectiveFactorJets projective_factor_jets(const TangentSample& at) {
  const Frame f = frame(at);
  const int n = f.n;
  const auto& x = f.x;
  const auto& y = f.y;
  const double A = f.A, t = f.t, L = f.L;
  const double L3 = L * L * L, L5 = L3 * L * L;
  const double A2 = A * A, A3 = A2 * A, A4 = A3 * A, A5 = A4 * A, A6 = A5 * A;

  ProjectiveFactorJets p;
  p.value = L + t / A;
  p.first = TensorValue(n, {kFiberDown}, {}, LoweringConvention::EuclideanLowering);
  p.second = TensorValue(n, {kFiberDown, kFiberDown}, {symmetric(0, 1)}, LoweringConvention::EuclideanLowering);
  p.third = TensorValue(n, {kFiberDown, kFiberDown, kFiberDown}, {symmetric(0, 1), symmetric(1, 2), symmetric(0, 2)},
                        LoweringConvention::EuclideanLowering);
  for (int i = 0; i < n; ++i) p.first(i) = (y[i] / A + t * x[i] / A2) / L + x[i] / A;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      p.second(i, j) = -(y[i] * y[j] / A2 + t * (x[i] * y[j] + x[j] * y[i]) / A3 + t * t * x[i] * x[j] / A4) / L3 +
                       (kd(i, j) / A + x[i] * x[j] / A2) / L;
  // The third derivative uses the fully symmetric index patterns.
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double v = 3.0 * t / (L5 * A4) * (y[i] * y[j] * x[k] + y[j] * y[k] * x[i] + y[k] * y[i] * x[j]);
        v += (3.0 * t * t / (L5 * A5) - 1.0 / (L3 * A3)) *
             (y[i] * x[j] * x[k] + y[j] * x[k] * x[i] + y[k] * x[i] * x[j]);
        v -= (y[i] * kd(j, k) + y[j] * kd(k, i) + y[k] * kd(i, j)) / (L3 * A2);
        v -= t / (L3 * A3) * (x[i] * kd(j, k) + x[j] * kd(k, i) + x[k] * kd(i, j));
        v += (-3.0 * t / (L3 * A4) + 3.0 * t * t * t / (L5 * A6)) * x[i] * x[j] * x[k];
        v += 3.0 / (L5 * A3) * y[i] * y[j] * y[k];
        p.third(i, j, k) = v;
      }
  check_finite(p.first);
  check_finite(p.second);
  check_finite(p.third);
  return p;
}

TensorValue assemble_berwald_curvature(const ProjectiveFactorJets& p, std::span<const double> y) {
  const int n = p.first.dim();
  TensorValue out(n, {kUp, kDown, kDown, kDown}, {symmetric(1, 2), symmetric(2, 3), symmetric(1, 3)},
                  LoweringConvention::EuclideanLowering);
  for (int h = 0; h < n; ++h)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          out(h, i, j, k) = p.third(i, j, k) * y[h] + p.second(i, j) * kd(h, k) + p.second(j, k) * kd(h, i) +
                            p.second(k, i) * kd(h, j);
  return out;
}

ScalarField projective_factor_field() {
  return ScalarField::from_generic([](auto x, auto y) { return projective_factor(x, y); });
}

CatalogueEntry entry(const std::string& name, const CatalogueParams& params) {
  const int n = params.dim;
  if (n < 2 || n > Layout::kMaxVariables / 2)
    fail(ErrorKind::BadParameter, "catalogue: dimension must be between 2 and " + std::to_string(Layout::kMaxVariables / 2));
  std::vector<double> a = params.a;
  if (a.empty()) a.assign(n, 0.0);
  if (static_cast<int>(a.size()) != n) fail(ErrorKind::BadParameter, "catalogue: parameter a must have length n");
  const double a_norm = std::sqrt(std::inner_product(a.begin(), a.end(), a.begin(), 0.0));

  CatalogueEntry e;
  e.name = name;
  e.a = a;
  e.model.name = name;
  e.model.dim = n;
  Domain ball{Domain::Kind::Ball, 1.0, 0.6};

  if (name == "euclidean") {
    e.model.domain = Domain{Domain::Kind::Everywhere, std::numeric_limits<double>::infinity(), 0.6};
    e.model.finsler = ScalarField::from_generic([](auto x, auto y) { return euclidean_norm(x, y); });
    e.closed_spray = VectorField([](std::span<const Jet> x, std::span<const Jet> y) {
      std::vector<Jet> g;
      for (std::size_t i = 0; i < y.size(); ++i) g.push_back(0.0 * x[i]);
      return g;
    });
    e.closed_connection = [](const TangentSample& at) { return TensorValue(at.dim(), {kUp, kDown}); };
    e.closed_berwald_curvature = [](const TangentSample& at) {
      return TensorValue(at.dim(), {kUp, kDown, kDown, kDown});
    };
    e.flag_curvature = 0.0;
    e.riemannian = e.berwald = e.landsberg = true;
  } else if (name == "klein") {
    e.model.domain = ball;
    e.model.finsler = ScalarField::from_generic([](auto x, auto y) { return klein_metric(x, y); });
    e.closed_spray = projective_spray(
        [](std::span<const Jet> x, std::span<const Jet> y) { return dot<Jet>(x, y) / (1.0 - dot<Jet>(x, x)); });
    e.flag_curvature = -1.0;
    e.riemannian = e.berwald = e.landsberg = true;
  } else if (name == "example1") {
    if (!(a_norm < 1.0)) fail(ErrorKind::BadParameter, "example1: requires |a| < 1");
    if (a[0] == 0.0) fail(ErrorKind::BadParameter, "example1: the parallel form family requires a_1 != 0");
    e.model.domain = ball;
    e.model.finsler = ScalarField::from_generic([a](auto x, auto y) {
      return flat_projective_metric(std::span<const double>(a), x, y);
    });
    e.closed_spray = projective_spray([a](std::span<const Jet> x, std::span<const Jet> y) {
      return -inner<Jet>(a, y) / (1.0 + inner<Jet>(a, x));
    });
    // G^i = (p.y) y^i with p = -a / (1 + <a,x>).
    e.closed_connection = [a](const TangentSample& at) {
      const int dim = at.dim();
      double ax = 0.0, py = 0.0;
      for (int i = 0; i < dim; ++i) ax += a[i] * at.x()[i];
      for (int i = 0; i < dim; ++i) py -= a[i] * at.y()[i] / (1.0 + ax);
      TensorValue N(dim, {kUp, kDown});
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) N(i, j) = -a[j] / (1.0 + ax) * at.y()[i] + (i == j ? py : 0.0);
      return N;
    };
    e.closed_berwald_curvature = [](const TangentSample& at) {
      return TensorValue(at.dim(), {kUp, kDown, kDown, kDown});
    };
    std::vector<double> c_mu = params.c_mu;
    c_mu.resize(n, 0.0);
    e.parallel_form = OneForm::flat_projective_family(a, params.c, c_mu);
    e.flag_curvature = 0.0;
    e.riemannian = e.berwald = e.landsberg = true;
  } else if (name == "berwald_classic" || name == "general_berwald") {
    if (name == "berwald_classic") {
      if (a_norm != 0.0) fail(ErrorKind::BadParameter, "berwald_classic: takes no parameter a");
    } else if (!(a_norm < 1.0)) {
      fail(ErrorKind::BadParameter, "general_berwald: requires |a| < 1");
    }
    e.model.domain = ball;
    if (name == "berwald_classic") {
      e.model.finsler = ScalarField::from_generic([](auto x, auto y) {
        const auto root = klein_root(x, y);
        const auto sum = root + dot(x, y);
        const auto one_minus = 1.0 - dot(x, x);
        return (sum * sum) / (one_minus * one_minus * root);
      });
    } else {
      e.model.finsler = ScalarField::from_generic([a](auto x, auto y) {
        return general_berwald_metric(std::span<const double>(a), x, y);
      });
    }
    e.closed_spray = projective_spray([](std::span<const Jet> x, std::span<const Jet> y) {
      return projective_factor(x, y);
    });
    e.closed_connection = [](const TangentSample& at) {
      const auto p = projective_factor_jets(at);
      const int dim = at.dim();
      TensorValue N(dim, {kUp, kDown});
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) N(i, j) = p.first(j) * at.y()[i] + (i == j ? p.value : 0.0);
      return N;
    };
    e.closed_berwald_curvature = [](const TangentSample& at) { return closed_berwald_curvature(at); };
    e.flag_curvature = 0.0;
  } else {
    fail(ErrorKind::BadParameter, "catalogue: unknown metric '" + name + "'");
  }
  return e;
}

}  // namespace finsler
