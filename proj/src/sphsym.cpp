#include "finsler/sphsym.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace finsler {

namespace {

constexpr double kSingularDenominator = 1e-12;

// sum_a c_a prod_i deltas_i^{a_i} for a polynomial jet in a local layout.
Jet compose(const Jet& poly, std::span<const Jet> deltas) {
  const auto& local = *poly.layout();
  const int m = local.nvars();
  const auto& target = deltas[0].layout();
  const int k = local.kt();
  std::vector<std::vector<Jet>> powers(m);
  for (int i = 0; i < m; ++i) {
    powers[i].push_back(Jet(target, 1.0));
    for (int p = 1; p <= k; ++p) powers[i].push_back(powers[i].back() * deltas[i]);
  }
  Jet out(target, 0.0);
  for (int idx = 0; idx < local.size(); ++idx) {
    const double c = poly.coefficients()[idx];
    if (c == 0.0) continue;
    const auto e = local.exponents(idx);
    Jet term = powers[0][e[0]];
    for (int i = 1; i < m; ++i)
      if (e[i] > 0) term *= powers[i][e[i]];
    out += c * term;
  }
  return out;
}

LayoutPtr local_layout(int vars, int order) { return Layout::get(vars, 0, order, 0, order); }

struct ProfileDerivatives {
  Jet phi, r, s, ss, rs;
};

// phi and the partials entering P and Q, as polynomials of order k in (r, s)
// around (r0, s0).
ProfileDerivatives profile_derivatives(const SphSymProfile& p, double r0, double s0, int k) {
  const auto big = local_layout(2, k + 2);
  const auto small = local_layout(2, k);
  const Jet phi = p.phi(Jet::variable(big, 0, r0), Jet::variable(big, 1, s0));
  const Jet pr = phi.derivative(0);
  const Jet ps = phi.derivative(1);
  ProfileDerivatives d{phi.project(small), pr.project(small), ps.project(small), ps.derivative(1), pr.derivative(1)};
  d.ss = d.ss.layout() == small ? d.ss : d.ss.project(small);
  d.rs = d.rs.layout() == small ? d.rs : d.rs.project(small);
  for (const Jet* j : {&d.phi, &d.r, &d.s, &d.ss, &d.rs})
    if (!j->all_finite()) fail(ErrorKind::NonFiniteValue, "profile derivative is not finite");
  return d;
}

std::pair<Jet, Jet> pq_local(const SphSymProfile& p, double r0, double s0, int k) {
  const auto small = local_layout(2, k);
  const auto d = profile_derivatives(p, r0, s0, k);
  const Jet R = Jet::variable(small, 0, r0);
  const Jet S = Jet::variable(small, 1, s0);
  const Jet w = R * R - S * S;
  const Jet denom = d.phi - S * d.s + w * d.ss;
  if (std::abs(denom.value()) <= kSingularDenominator)
    fail(ErrorKind::SingularDenominator, "phi - s phi_s + (r^2 - s^2) phi_ss vanishes");
  const Jet Q = (S * d.rs + R * d.ss - d.r) / (2.0 * R * denom);
  const Jet P = -(Q / d.phi) * (S * d.phi + w * d.s) + (S * d.r + R * d.s) / (2.0 * R * d.phi);
  return {P, Q};
}

// Limits at r = 0, where |s| <= r forces s = 0 and phi_r must vanish.
PQValues pq_at_origin(const SphSymProfile& p, double s0) {
  if (s0 != 0.0) fail(ErrorKind::BadParameter, "sphsym: s must vanish at r = 0");
  const auto big = local_layout(2, 2);
  const Jet phi = p.phi(Jet::variable(big, 0, 0.0), Jet::variable(big, 1, 0.0));
  const double f = phi.value(), fr = phi.partial({0}), fs = phi.partial({1});
  const double frr = phi.partial({0, 0}), fss = phi.partial({1, 1});
  if (std::abs(fr) > kSingularDenominator || std::abs(f) <= kSingularDenominator)
    fail(ErrorKind::SingularDenominator, "P and Q have no limit at r = 0 for this profile");
  return {fs / (2.0 * f), (fss - frr) / (2.0 * f)};
}

void require_same_layout(const Jet& r, const Jet& s) {
  if (r.layout() != s.layout()) fail(ErrorKind::BadParameter, "sphsym: r and s must share a jet layout");
}

// P, Q and their s-derivatives at a point.
struct PQFirst {
  double P, Ps, Q, Qs;
};

PQFirst pq_first(const PQPair& pq, double r, double s) {
  const auto l = local_layout(2, 1);
  const Jet R = Jet::variable(l, 0, r), S = Jet::variable(l, 1, s);
  const Jet P = pq.P(R, S), Q = pq.Q(R, S);
  if (!P.all_finite() || !Q.all_finite()) fail(ErrorKind::NonFiniteValue, "P or Q is not finite");
  return {P.value(), P.partial({1}), Q.value(), Q.partial({1})};
}

struct Polar {
  double u, r, s;
};

Polar polar(const TangentSample& at) {
  double x2 = 0.0, y2 = 0.0, xy = 0.0;
  for (int i = 0; i < at.dim(); ++i) {
    x2 += at.x()[i] * at.x()[i];
    y2 += at.y()[i] * at.y()[i];
    xy += at.x()[i] * at.y()[i];
  }
  const double u = std::sqrt(y2);
  return {u, std::sqrt(x2), xy / u};
}

}  // namespace

double SphSymProfile::value(double r, double s) const {
  const auto l = local_layout(2, 0);
  return phi(Jet(l, r), Jet(l, s)).value();
}

SphSymProfile euclidean_profile() {
  return {"euclidean", [](const Jet& r, const Jet&) { return 0.0 * r + 1.0; }, std::numeric_limits<double>::infinity()};
}

SphSymProfile berwald_classic_profile() {
  return {"berwald_classic",
          [](const Jet& r, const Jet& s) {
            const Jet w = sqrt(1.0 - r * r + s * s);
            const Jet a = 1.0 - r * r;
            return (w + s) * (w + s) / (a * a * w);
          },
          1.0};
}

RadialFactor constant_factor(double c) {
  return {"constant", [c](const Jet& r) { return 0.0 * r + c; }};
}

Jet composed_partial(const std::function<Jet(std::span<const Jet>)>& g, std::span<const Jet> args,
                     std::span<const int> vars) {
  const int m = static_cast<int>(args.size());
  const int k = args[0].layout()->kt();
  const int extra = static_cast<int>(vars.size());
  const auto local = local_layout(m, k + extra);
  std::vector<Jet> seeds, deltas;
  for (int i = 0; i < m; ++i) {
    seeds.push_back(Jet::variable(local, i, args[i].value()));
    deltas.push_back(args[i] - args[i].value());
  }
  Jet d = g(seeds);
  for (int v : vars) d = d.derivative(v);
  const auto small = local_layout(m, k);
  if (d.layout() != small) d = d.project(small);
  return compose(d, deltas);
}

PQPair constant_pq(double P, double Q) {
  return {[P](const Jet& r, const Jet&) { return 0.0 * r + P; }, [Q](const Jet& r, const Jet&) { return 0.0 * r + Q; }};
}

PQPair pq_from_profile(const SphSymProfile& p) {
  auto eval = [p](const Jet& r, const Jet& s, bool want_p) {
    require_same_layout(r, s);
    if (r.value() == 0.0) {
      if (r.layout()->kt() > 0) fail(ErrorKind::SingularDenominator, "derivatives of P and Q are singular at r = 0");
      const auto v = pq_at_origin(p, s.value());
      return Jet(r.layout(), want_p ? v.P : v.Q);
    }
    const auto [P, Q] = pq_local(p, r.value(), s.value(), r.layout()->kt());
    const Jet deltas[2] = {r - r.value(), s - s.value()};
    return compose(want_p ? P : Q, deltas);
  };
  return {[eval](const Jet& r, const Jet& s) { return eval(r, s, true); },
          [eval](const Jet& r, const Jet& s) { return eval(r, s, false); }};
}

PQValues pq_values(const PQPair& pq, double r, double s) {
  const auto l = local_layout(2, 0);
  const Jet R(l, r), S(l, s);
  PQValues v{pq.P(R, S).value(), pq.Q(R, S).value()};
  if (!std::isfinite(v.P) || !std::isfinite(v.Q)) fail(ErrorKind::NonFiniteValue, "P or Q is not finite");
  return v;
}

VectorField spray_field(const PQPair& pq) {
  return [pq](std::span<const Jet> x, std::span<const Jet> y) {
    const Jet u2 = dot<Jet>(y, y);
    const Jet u = sqrt(u2);
    const Jet r = sqrt(dot<Jet>(x, x));
    const Jet s = dot<Jet>(x, y) / u;
    const Jet up = u * pq.P(r, s);
    const Jet uq = u2 * pq.Q(r, s);
    std::vector<Jet> g;
    for (std::size_t i = 0; i < x.size(); ++i) g.push_back(up * y[i] + uq * x[i]);
    return g;
  };
}

TensorValue spray_from_pq(const PQPair& pq, const TangentSample& at) {
  const int n = at.dim();
  const auto g = eval_vector(spray_field(pq), at);
  TensorValue out(n, {kUp});
  for (int i = 0; i < n; ++i) {
    if (!std::isfinite(g[i])) fail(ErrorKind::NonFiniteValue, "spray from P, Q is not finite");
    out(i) = g[i];
  }
  return out;
}

TensorValue connection_from_pq(const PQPair& pq, const TangentSample& at) {
  const int n = at.dim();
  const auto [u, r, s] = polar(at);
  PQFirst d{0.0, 0.0, 0.0, 0.0};
  if (r > 0.0) {
    d = pq_first(pq, r, s);
  } else {
    // x = 0 kills every term carrying P_s or Q_s.
    const auto v = pq_values(pq, r, s);
    d.P = v.P;
    d.Q = v.Q;
  }
  const auto& x = at.x();
  const auto& y = at.y();
  TensorValue out(n, {kUp, kDown});
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      out(i, j) = (i == j ? u * d.P : 0.0) + d.Ps * x[j] * y[i] + (d.P - s * d.Ps) * y[j] * y[i] / u +
                  u * d.Qs * x[i] * x[j] + (2.0 * d.Q - s * d.Qs) * x[i] * y[j];
  return out;
}

std::pair<double, double> metrizability_residuals(const SphSymProfile& p, const PQPair& pq, double r, double s) {
  if (!(r > 0.0)) fail(ErrorKind::SingularDenominator, "metrizability residuals need r > 0");
  const auto l = local_layout(2, 1);
  const Jet phi = p.phi(Jet::variable(l, 0, r), Jet::variable(l, 1, s));
  const double f = phi.value(), fr = phi.partial({0}), fs = phi.partial({1});
  const auto d = pq_first(pq, r, s);
  const double w = r * r - s * s;
  const double a = 2.0 * d.Q - s * d.Qs;
  const double res1 = (1.0 + s * d.P - w * a) * fs + (s * d.Ps - 2.0 * d.P - s * a) * f;
  const double res2 = fr / r - (d.P + d.Qs * w) * fs - (d.Ps + s * d.Qs) * f;
  return {std::abs(res1), std::abs(res2)};
}

RsFunction parallel_q_function(const RadialFactor& f, const RsFunction& P) {
  return [f, P](const Jet& r, const Jet& s) {
    if (r.value() == 0.0) fail(ErrorKind::DivisionByZero, "parallel Q: r = 0");
    const Jet fr = f.f(r);
    if (fr.value() == 0.0) fail(ErrorKind::DivisionByZero, "parallel Q: f(r) = 0");
    const int var = 0;
    const Jet fp = composed_partial([&f](std::span<const Jet> a) { return f.f(a[0]); }, std::span<const Jet>(&r, 1),
                                    std::span<const int>(&var, 1));
    const Jet r2 = r * r;
    return s * s * fp / (2.0 * r2 * r * fr) - s * P(r, s) / r2 + 1.0 / (2.0 * r2);
  };
}

double parallel_q(const RadialFactor& f, const RsFunction& P, double r, double s) {
  const auto l = local_layout(2, 0);
  return parallel_q_function(f, P)(Jet(l, r), Jet(l, s)).value();
}

PQPair parallel_pq(const RadialFactor& f, const RsFunction& P) { return {P, parallel_q_function(f, P)}; }

SssResiduals sss_residuals(const RadialFactor& f, const RsFunction& P, const RsFunction& Q, double r, double s) {
  if (r == 0.0) fail(ErrorKind::DivisionByZero, "parallel-form system: r = 0");
  const auto l = local_layout(2, 1);
  const Jet R = Jet::variable(l, 0, r), S = Jet::variable(l, 1, s);
  const Jet fj = f.f(R);
  const double fv = fj.value(), fp = fj.partial({0});
  const auto d = pq_first(PQPair{P, Q}, r, s);
  const double r2 = r * r;
  SssResiduals out;
  out.sss1 = s * fp / r - s * fv * d.Ps - fv * d.P - fv * r2 * d.Qs;
  out.sss2 = fv - fv * s * d.P + fv * s * s * d.Ps - 2.0 * fv * r2 * d.Q + fv * s * r2 * d.Qs;
  out.sss3 = s * s * fp / r + fv - 2.0 * fv * s * d.P - 2.0 * fv * r2 * d.Q;
  return out;
}

MetricModel sphsym_metric(const SphSymProfile& p, int dim) {
  if (dim < 2) fail(ErrorKind::BadParameter, "sphsym metric: dimension must be at least 2");
  MetricModel m;
  m.name = "sphsym:" + p.name;
  m.dim = dim;
  if (std::isfinite(p.r0))
    m.domain = Domain{Domain::Kind::Ball, p.r0, 0.6 * std::min(1.0, p.r0)};
  auto phi = p.phi;
  m.finsler = ScalarField::from_jet([phi](std::span<const Jet> x, std::span<const Jet> y) {
    const Jet u = sqrt(dot<Jet>(y, y));
    return u * phi(sqrt(dot<Jet>(x, x)), dot<Jet>(x, y) / u);
  });
  return m;
}

MetricModel spray_only_model(const PQPair& pq, int dim, double radius) {
  MetricModel m;
  m.name = "sphsym-spray";
  m.dim = dim;
  m.domain = Domain{Domain::Kind::Ball, radius, 0.6 * std::min(1.0, radius)};
  m.spray_override = spray_field(pq);
  return m;
}

OneForm radial_form(const RadialFactor& f, int dim) {
  auto coeffs = [f](std::span<const Jet> x) {
    const Jet fr = f.f(sqrt(dot<Jet>(x, x)));
    std::vector<Jet> b;
    for (const auto& xi : x) b.push_back(fr * xi);
    return b;
  };
  return OneForm(
      "radial:" + f.name, dim, coeffs, [coeffs](std::span<const double> x) {
        const auto l = local_layout(static_cast<int>(x.size()), 0);
        std::vector<Jet> xs;
        for (double v : x) xs.emplace_back(l, v);
        std::vector<double> b;
        for (const auto& c : coeffs(xs)) b.push_back(c.value());
        return b;
      });
}

SphSymParallelReport parallel_form_check(const PQPair& pq, const RadialFactor& f, const std::vector<TangentSample>& samples,
                                         double tol) {
  if (samples.empty()) fail(ErrorKind::InsufficientSamples, "parallel_form_check needs samples");
  const int n = samples[0].dim();
  SphSymParallelReport rep;
  rep.sample_count = static_cast<int>(samples.size());
  rep.tolerance = tol;
  double radius = 0.0;
  for (const auto& at : samples) radius = std::max(radius, polar(at).r);
  const MetricModel model = spray_only_model(pq, n, 2.0 * radius + 1.0);
  const ScalarField beta = radial_form(f, n).beta();
  for (const auto& at : samples) {
    const auto [u, r, s] = polar(at);
    const auto c = sss_residuals(f, pq.P, pq.Q, r, s);
    rep.max_x_coefficient = std::max(rep.max_x_coefficient, std::abs(c.sss1));
    rep.max_y_coefficient = std::max(rep.max_y_coefficient, std::abs(c.sss2));
    const auto delta = delta_derivative(model, beta, at);
    for (int i = 0; i < n; ++i) {
      const double expansion = u * c.sss1 * at.x()[i] + c.sss2 * at.y()[i];
      rep.max_expansion = std::max(rep.max_expansion, std::abs(expansion));
      rep.max_pipeline = std::max(rep.max_pipeline, std::abs(delta(i)));
      rep.max_route_gap = std::max(rep.max_route_gap, std::abs(expansion - delta(i)));
    }
  }
  rep.verdict = rep.max_expansion <= tol && rep.max_pipeline <= tol ? ParallelVerdict::ParallelWithinTol
                                                                     : ParallelVerdict::NotParallel;
  return rep;
}

std::vector<std::pair<double, double>> rs_grid(int nr, int ns, double r_min, double r_max, double s_frac) {
  std::vector<std::pair<double, double>> g;
  for (int a = 0; a < nr; ++a) {
    const double r = nr == 1 ? r_min : r_min + (r_max - r_min) * a / (nr - 1);
    for (int b = 0; b < ns; ++b) {
      const double t = ns == 1 ? 0.0 : -1.0 + 2.0 * b / (ns - 1);
      g.emplace_back(r, s_frac * r * t);
    }
  }
  return g;
}

std::vector<TangentSample> draw_shell_samples(int dim, int count, std::uint64_t seed, double r_min, double r_max) {
  auto base = draw_samples(dim, count, seed, 1.0);
  std::vector<TangentSample> out;
  for (const auto& at : base) {
    std::vector<double> x = at.x();
    double rho = 0.0;
    for (double v : x) rho += v * v;
    rho = std::sqrt(rho);
    if (rho == 0.0) {
      x.assign(dim, 0.0);
      x[0] = 1.0;
      rho = 1.0;
    }
    // rho^n is uniform on [0, 1) for points uniform in the unit ball.
    const double target = r_min + (r_max - r_min) * std::pow(rho, dim);
    for (auto& v : x) v *= target / rho;
    out.emplace_back(std::move(x), at.y());
  }
  return out;
}

const char* to_string(ProfileClass c) {
  switch (c) {
    case ProfileClass::Riemannian: return "Riemannian";
    case ProfileClass::DegenerateLinear: return "DegenerateLinear";
    case ProfileClass::NonRiemannian: return "NonRiemannian";
  }
  return "NonRiemannian";
}

ProfileClass classify_profile(const SphSymProfile& p, const std::vector<std::pair<double, double>>& grid, double tol) {
  double max_s = 0.0, max_linear = 0.0;
  const auto l = local_layout(2, 1);
  for (const auto& [r, s] : grid) {
    const Jet phi = p.phi(Jet::variable(l, 0, r), Jet::variable(l, 1, s));
    const double f = phi.value(), fs = phi.partial({1});
    max_s = std::max(max_s, std::abs(fs));
    if (std::abs(s) > 1e-12) max_linear = std::max(max_linear, std::abs(s * fs / f - 1.0));
  }
  if (max_s <= tol) return ProfileClass::Riemannian;
  if (max_linear <= tol) return ProfileClass::DegenerateLinear;
  return ProfileClass::NonRiemannian;
}

}  // namespace finsler
