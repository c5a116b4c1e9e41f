#include "finsler/commands.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <type_traits>

#include "finsler/analysis.hpp"
#include "finsler/parallel.hpp"

namespace finsler {

namespace {

std::vector<std::string> coordinate_names(const char* prefix, int dim) {
  std::vector<std::string> out;
  for (int i = 1; i <= dim; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

Expression bound(const std::string& src, const std::vector<std::string>& names) {
  return Expression::parse(src, names).bind(names);
}

double max_abs_of(std::span<const double> v) {
  double m = 0.0;
  for (double c : v) m = std::max(m, std::abs(c));
  return m;
}

// |a - b| relative to 1 + the larger scale.
double relative_gap(const TensorValue& a, const TensorValue& b) {
  return max_abs_difference(a, b) / (1.0 + std::max(a.max_abs(), b.max_abs()));
}

double relative_gap(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d / (1.0 + std::max(max_abs_of(a), max_abs_of(b)));
}

std::vector<double> pad(std::vector<double> v, int dim) {
  v.resize(static_cast<std::size_t>(dim), 0.0);
  return v;
}

double sample_radius(const RunConfig& cfg, const MetricModel& m) {
  if (!cfg.radius) return m.domain.sample_radius;
  if (m.domain.kind == Domain::Kind::Ball && !(*cfg.radius < m.domain.radius))
    fail(ErrorKind::ConfigError, "radius must be smaller than the domain radius " + format_number(m.domain.radius));
  return *cfg.radius;
}

CheckRecord record(std::string name, double residual, double tol, int samples, std::uint64_t seed, std::string notes = {}) {
  CheckRecord r;
  r.name = std::move(name);
  r.max_residual = residual;
  r.tolerance = tol;
  r.pass = std::isfinite(residual) && residual <= tol;
  r.sample_count = samples;
  r.seed = seed;
  r.notes = std::move(notes);
  return r;
}

std::string join_ints(const std::vector<int>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
  return out;
}

// Per-sample maxima of the invariant battery, reduced after the parallel map.
struct BatteryRow {
  double euler_chain = 0.0;
  double symmetry = 0.0;
  double trace = 0.0;
  double angular = 0.0;
  double angular_kernel = 0.0;
  double homogeneity = 0.0;
  double closed = 0.0;
  double vertical_euler = 0.0;
  double covariant_contraction = 0.0;
  double curvature_contraction = 0.0;
};

BatteryRow battery_row(const BuiltMetric& metric, const OneForm& form, const TangentSample& at, Scheme scheme) {
  const MetricModel& m = metric.model;
  const int n = m.dim;
  const auto geo = evaluate_geometry(m, at, scheme);
  const auto& y = at.y();
  BatteryRow row;

  auto chain = [&](const TensorValue& lhs, const TensorValue& rhs) {
    row.euler_chain = std::max(row.euler_chain, relative_gap(lhs, rhs));
  };
  TensorValue two_g(n, {kUp});
  for (int i = 0; i < n; ++i) two_g(i) = 2.0 * geo.spray(i);
  chain(geo.connection.contract(1, y), two_g);
  chain(geo.berwald_connection.contract(2, y), geo.connection);
  TensorValue zero3(n, {kUp, kDown, kDown});
  chain(geo.berwald_curvature.contract(3, y), zero3);
  TensorValue zero1(n, {kDown});
  chain(geo.mean_berwald.contract(1, y), zero1);
  TensorValue zero_up(n, {kUp});
  chain(geo.jacobi.contract(1, y), zero_up);
  row.curvature_contraction = geo.curvature_contraction_defect;

  auto sym = [&](const TensorValue& t) { row.symmetry = std::max(row.symmetry, t.max_symmetry_defect() / (1.0 + t.max_abs())); };
  sym(geo.berwald_connection);
  sym(geo.berwald_curvature);
  sym(geo.mean_berwald);
  sym(geo.curvature);

  if (geo.has_finsler) {
    const double F = geo.finsler_value;
    double ly = 0.0;
    for (int i = 0; i < n; ++i) ly += geo.hilbert_form(i) * y[i];
    row.euler_chain = std::max(row.euler_chain, std::abs(ly - F) / (1.0 + F));
    const auto gy = geo.metric.contract(1, y);
    TensorValue Fl(n, {kDown});
    for (int i = 0; i < n; ++i) Fl(i) = F * geo.hilbert_form(i);
    chain(gy, Fl);
    chain(geo.landsberg.contract(2, y), TensorValue(n, {kDown, kDown}));
    sym(geo.metric);
    sym(geo.inverse_metric);
    sym(geo.angular_metric);
    sym(geo.landsberg);

    double trace = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) trace += geo.inverse_metric(i, j) * geo.angular_metric(i, j);
    row.trace = std::abs(trace - (n - 1)) / n;
    row.angular = geo.angular_identity_defect / (1.0 + geo.angular_metric.max_abs());
    row.angular_kernel = geo.angular_metric.contract(1, y).max_abs() / (1.0 + geo.angular_metric.max_abs() * max_abs_of(y));
    row.homogeneity = homogeneity_check(*m.finsler, at, 1);
  }
  if (m.spray_override) row.homogeneity = std::max(row.homogeneity, homogeneity_check(*m.spray_override, at, 2));
  if (geo.spray_override_deviation) row.closed = std::max(row.closed, *geo.spray_override_deviation);

  if (metric.entry) {
    const auto& e = *metric.entry;
    if (e.closed_spray) {
      row.homogeneity = std::max(row.homogeneity, homogeneity_check(*e.closed_spray, at, 2));
      const auto g = eval_vector(*e.closed_spray, at);
      row.closed = std::max(row.closed, relative_gap(geo.spray.components(), g));
    }
    if (e.closed_connection) row.closed = std::max(row.closed, relative_gap(geo.connection, (*e.closed_connection)(at)));
    if (e.closed_berwald_curvature)
      row.closed = std::max(row.closed, relative_gap(geo.berwald_curvature, (*e.closed_berwald_curvature)(at)));
  }

  // d_C beta = beta through the fiber gradient of beta.
  const ScalarField beta = form.beta();
  const Jet bj = eval_jet(beta, at, JetOrder{0, 1}, scheme);
  double cb = 0.0;
  for (int i = 0; i < n; ++i) cb += y[i] * bj.partial({n + i});
  row.vertical_euler = std::abs(cb - bj.value()) / (1.0 + std::abs(bj.value()));

  // y^i b_{i|j} = delta_j beta
  const auto cov = covariant_derivative(geo, form, scheme);
  const auto hd = delta_derivative(geo, beta, scheme);
  const auto ycov = cov.contract(0, y);
  row.covariant_contraction = relative_gap(ycov.components(), hd.components());
  return row;
}

}  // namespace

RsFunction rs_expression(const std::string& src) {
  const Expression e = bound(src, {"r", "s"});
  return [e](const Jet& r, const Jet& s) {
    const Jet v[2] = {r, s};
    return e.eval<Jet>(std::span<const Jet>(v, 2));
  };
}

RadialFunction radial_expression(const std::string& src) {
  const Expression e = bound(src, {"r"});
  return [e](const Jet& r) { return e.eval<Jet>(std::span<const Jet>(&r, 1)); };
}

OneForm expression_form(const std::vector<std::string>& coefficients, int dim) {
  if (static_cast<int>(coefficients.size()) != dim)
    fail(ErrorKind::ConfigError, "form needs " + std::to_string(dim) + " coefficient expressions, got " +
                                     std::to_string(coefficients.size()));
  const auto names = coordinate_names("x", dim);
  std::vector<Expression> exprs;
  std::string label;
  for (std::size_t i = 0; i < coefficients.size(); ++i) {
    exprs.push_back(bound(coefficients[i], names));
    label += (i ? "," : "") + coefficients[i];
  }
  return OneForm(
      "(" + label + ")", dim,
      [exprs](std::span<const Jet> x) {
        std::vector<Jet> out;
        for (const auto& e : exprs) out.push_back(e.eval<Jet>(x));
        return out;
      },
      [exprs](std::span<const double> x) {
        std::vector<double> out;
        for (const auto& e : exprs) out.push_back(e.eval<double>(x));
        return out;
      });
}

ScalarField finsler_expression(const std::string& src, int dim) {
  auto names = coordinate_names("x", dim);
  const auto ys = coordinate_names("y", dim);
  names.insert(names.end(), ys.begin(), ys.end());
  const Expression e = bound(src, names);
  return ScalarField{[e](std::span<const Jet> x, std::span<const Jet> y) {
                       std::vector<Jet> v(x.begin(), x.end());
                       v.insert(v.end(), y.begin(), y.end());
                       return e.eval<Jet>(v);
                     },
                     [e](std::span<const double> x, std::span<const double> y) {
                       std::vector<double> v(x.begin(), x.end());
                       v.insert(v.end(), y.begin(), y.end());
                       return e.eval<double>(v);
                     }};
}

CatalogueParams reference_params(const std::string& name, int dim) {
  CatalogueParams p;
  p.dim = dim;
  p.a.assign(static_cast<std::size_t>(dim), 0.0);
  if (name == "example1") {
    p.a = pad({0.5, 0.1}, dim);
    p.c = 1.0;
    p.c_mu = pad({0.0, 0.2}, dim);
  } else if (name == "general_berwald") {
    p.a = pad({0.1, 0.05}, dim);
  }
  return p;
}

BuiltMetric build_metric(const RunConfig& cfg) {
  BuiltMetric out;
  const int n = cfg.dim;
  if (!cfg.finsler.empty()) {
    out.model.name = "finsler:" + cfg.finsler;
    out.model.dim = n;
    out.model.finsler = finsler_expression(cfg.finsler, n);
    out.source = "finsler";
    return out;
  }
  if (!cfg.phi.empty()) {
    SphSymProfile p{cfg.phi, rs_expression(cfg.phi), 1.0};
    out.model = sphsym_metric(p, n);
    out.profile = p;
    out.source = "phi";
    return out;
  }
  if (!cfg.metric.empty()) {
    const auto& names = catalogue_names();
    if (std::find(names.begin(), names.end(), cfg.metric) == names.end())
      fail(ErrorKind::ConfigError, "unknown metric '" + cfg.metric + "'");
    CatalogueParams params = reference_params(cfg.metric, n);
    if (!cfg.a.empty()) params.a = cfg.a;
    params.c = cfg.c;
    if (!cfg.c_mu.empty()) params.c_mu = cfg.c_mu;
    out.entry = entry(cfg.metric, params);
    out.model = out.entry->model;
    if (cfg.metric == "berwald_classic") out.profile = berwald_classic_profile();
    if (cfg.metric == "euclidean") out.profile = euclidean_profile();
    out.source = "catalogue";
    return out;
  }
  if (!cfg.P.empty()) {
    const RadialFactor f{cfg.f.empty() ? "1" : cfg.f, radial_expression(cfg.f.empty() ? "1" : cfg.f)};
    out.model = spray_only_model(parallel_pq(f, rs_expression(cfg.P)), n, 1.0);
    out.model.name = "spray:P=" + cfg.P;
    out.source = "spray";
    return out;
  }
  fail(ErrorKind::ConfigError, "no metric selected: give metric, phi, finsler or P");
}

std::optional<OneForm> build_form(const RunConfig& cfg, const BuiltMetric& metric) {
  if (!cfg.form.empty()) return expression_form(cfg.form, cfg.dim);
  if (metric.entry && metric.entry->parallel_form) return metric.entry->parallel_form;
  if (!cfg.f.empty()) return radial_form(RadialFactor{cfg.f, radial_expression(cfg.f)}, cfg.dim);
  return std::nullopt;
}

OneForm probe_form(int dim) {
  return OneForm::from_generic("probe", dim, [dim](auto x) {
    using T = std::decay_t<decltype(x[0])>;
    std::vector<T> b;
    for (int i = 0; i < dim; ++i) b.push_back(x[i] * (1.0 + x[0] * x[0]) + 0.1 * (i + 1) + x[(i + 1) % dim] * x[i]);
    return b;
  });
}

std::vector<CheckRecord> invariant_battery(const BuiltMetric& metric, const OneForm& form,
                                           const std::vector<TangentSample>& samples, const BatteryOptions& options) {
  const auto rows = parallel_map(samples.size(), options.threads,
                                 [&](std::size_t s) { return battery_row(metric, form, samples[s], options.scheme); });
  BatteryRow worst;
  for (const auto& r : rows) {
    worst.euler_chain = std::max(worst.euler_chain, r.euler_chain);
    worst.symmetry = std::max(worst.symmetry, r.symmetry);
    worst.trace = std::max(worst.trace, r.trace);
    worst.angular = std::max(worst.angular, r.angular);
    worst.angular_kernel = std::max(worst.angular_kernel, r.angular_kernel);
    worst.homogeneity = std::max(worst.homogeneity, r.homogeneity);
    worst.closed = std::max(worst.closed, r.closed);
    worst.vertical_euler = std::max(worst.vertical_euler, r.vertical_euler);
    worst.covariant_contraction = std::max(worst.covariant_contraction, r.covariant_contraction);
    worst.curvature_contraction = std::max(worst.curvature_contraction, r.curvature_contraction);
  }
  const int count = static_cast<int>(samples.size());
  const double tol = options.tol;
  const auto seed = options.seed;
  std::vector<CheckRecord> out;
  out.push_back(record("euler_chain", worst.euler_chain, tol, count, seed,
                       "l_i y^i = F, g_ij y^j = F l_i, N^i_j y^j = 2G^i, G^h_ij y^j = N^h_i, G^h_ijk y^k = 0, "
                       "E_jk y^k = 0, L_ijk y^k = 0, Phi^i_j y^j = 0"));
  out.push_back(record("symmetry_tags", worst.symmetry, tol, count, seed));
  out.push_back(record("curvature_contraction", worst.curvature_contraction, tol, count, seed,
                       "R^h_jk y^k = Phi^h_j after sign normalization"));
  if (metric.model.has_finsler()) {
    out.push_back(record("angular_trace", worst.trace, tol, count, seed, "g^ij h_ij = n - 1"));
    out.push_back(record("angular_identity", worst.angular, tol, count, seed, "h_ij = F d_i d_j F"));
    out.push_back(record("angular_kernel", worst.angular_kernel, tol, count, seed, "h_ij y^j = 0"));
  }
  out.push_back(record("homogeneity", worst.homogeneity, tol, count, seed, "F degree 1, spray degree 2"));
  if (metric.entry || metric.model.spray_override)
    out.push_back(record("closed_form_agreement", worst.closed, tol, count, seed,
                         "pipeline against closed-form spray, connection and Berwald curvature"));
  out.push_back(record("vertical_euler", worst.vertical_euler, tol, count, seed, "d_C beta = beta for " + form.name()));
  out.push_back(record("covariant_contraction", worst.covariant_contraction, tol, count, seed,
                       "y^i b_{i|j} = delta_j beta for " + form.name()));
  return out;
}

namespace {

void run_tensors(const RunConfig& cfg, const BuiltMetric& metric, const std::vector<TangentSample>& samples,
                 Report& rep) {
  const auto geos = parallel_map(samples.size(), cfg.threads,
                                 [&](std::size_t s) { return evaluate_geometry(metric.model, samples[s], cfg.scheme); });
  double angular = 0.0, contraction = 0.0, override_dev = 0.0;
  bool has_override = false;
  for (const auto& g : geos) {
    TensorDump d;
    d.x = g.x;
    d.y = g.y;
    if (g.has_finsler) {
      d.scalars = {{"F", g.finsler_value}, {"energy", g.energy}};
      d.tensors = {{"metric", g.metric},
                   {"inverse_metric", g.inverse_metric},
                   {"hilbert_form", g.hilbert_form},
                   {"angular_metric", g.angular_metric},
                   {"landsberg", g.landsberg}};
      angular = std::max(angular, g.angular_identity_defect / (1.0 + g.angular_metric.max_abs()));
    }
    d.tensors.insert(d.tensors.end(), {{"spray", g.spray},
                                       {"connection", g.connection},
                                       {"berwald_connection", g.berwald_connection},
                                       {"berwald_curvature", g.berwald_curvature},
                                       {"mean_berwald", g.mean_berwald},
                                       {"jacobi", g.jacobi},
                                       {"curvature", g.curvature}});
    contraction = std::max(contraction, g.curvature_contraction_defect);
    if (g.spray_override_deviation) {
      has_override = true;
      override_dev = std::max(override_dev, *g.spray_override_deviation);
    }
    rep.dumps.push_back(std::move(d));
  }
  const double tol = cfg.tol.value_or(cfg.scheme == Scheme::Taylor ? 1e-8 : 1e-4);
  const int count = static_cast<int>(samples.size());
  if (metric.model.has_finsler())
    rep.add(record("angular_identity", angular, tol, count, cfg.seed, "h_ij = F d_i d_j F"));
  rep.add(record("curvature_contraction", contraction, tol, count, cfg.seed,
                 "R^h_jk = -(delta_k N^h_j - delta_j N^h_k), R^h_jk y^k = Phi^h_j"));
  if (has_override)
    rep.add(record("spray_override", override_dev, tol, count, cfg.seed, "derived spray against the supplied one"));
}

void run_check_parallel(const RunConfig& cfg, const BuiltMetric& metric, const std::vector<TangentSample>& samples,
                        Report& rep) {
  const auto form = build_form(cfg, metric);
  if (!form) fail(ErrorKind::ConfigError, "check-parallel needs a form: give form, f, or a catalogue metric with one");
  auto tol = ParallelTolerances::for_scheme(cfg.scheme);
  if (cfg.tol) tol.covariant = tol.delta = tol.curvature = *cfg.tol;
  const auto r = is_parallel(metric.model, *form, samples, tol, cfg.scheme, cfg.threads);
  const int count = r.sample_count;
  auto worst = [](int i) { return "worst sample " + std::to_string(i); };
  rep.add(record("covariant_derivative", r.max_covariant, tol.covariant, count, cfg.seed,
                 "b_{i|j} = d_j b_i - b_k G^k_ij; " + worst(r.worst_covariant)));
  rep.add(record("horizontal_derivative", r.max_delta, tol.delta, count, cfg.seed,
                 "delta_j beta = d_j beta - N^k_j d_{y^k} beta; " + worst(r.worst_delta)));
  rep.add(record("curvature_two_form", r.max_curvature, tol.curvature, count, cfg.seed,
                 "R^h_jk b_h; " + worst(r.worst_curvature)));
  rep.add(record("fiber_homogeneity", r.max_euler, tol.euler, count, cfg.seed, "beta degree 1 in y"));
  rep.verdicts.emplace_back("form", form->name());
  rep.verdicts.emplace_back("parallel", to_string(r.verdict));
}

void run_scan(const RunConfig& cfg, const BuiltMetric& metric, Report& rep) {
  ScanOptions opt;
  if (cfg.tol) opt.threshold = *cfg.tol;
  opt.berwald_rows = cfg.rows != "R";
  opt.curvature_rows = cfg.rows != "G";
  opt.seed = cfg.seed;
  opt.radius = sample_radius(cfg, metric.model);
  opt.threads = cfg.threads;
  const auto r = parallel_obstruction_scan(metric.model, cfg.x_points, cfg.y_samples, opt);
  const int n = metric.model.dim;
  std::vector<int> dims;
  for (std::size_t p = 0; p < r.points.size(); ++p) {
    const auto& pt = r.points[p];
    dims.push_back(pt.kernel_dim);
    const double smax = pt.singular_values.empty() ? 0.0 : pt.singular_values.front();
    const double smin = pt.singular_values.empty() ? 0.0 : pt.singular_values.back();
    std::string notes = "rows " + std::to_string(pt.rows) + ", sigma_min/sigma_max " +
                        format_number(smax > 0.0 ? smin / smax : 0.0) + ", x = (";
    for (int i = 0; i < n; ++i) notes += (i ? "," : "") + format_number(pt.x[i]);
    notes += ")";
    // residual is the kernel dimension
    CheckRecord c = record("kernel_point_" + std::to_string(p), static_cast<double>(pt.kernel_dim), 0.0,
                           cfg.y_samples, cfg.seed + 1 + p, notes);
    rep.add(c);
  }
  CheckRecord summary = record("kernel_scan", static_cast<double>(r.max_kernel_dim), 0.0,
                               static_cast<int>(r.points.size()), cfg.seed,
                               std::string("branch ") + to_string(r.branch) + ", intersection kernel " +
                                   std::to_string(r.intersection_kernel_dim));
  summary.pass = r.branch != ScanBranch::Inconclusive;
  rep.add(summary);

  const auto form = build_form(cfg, metric);
  if (form) {
    double worst = 0.0;
    for (const auto& pt : r.points) worst = std::max(worst, pt.residual(form->coefficients(pt.x)));
    rep.add(record("known_form_in_kernel", worst, 1e-7, static_cast<int>(r.points.size()), cfg.seed,
                   "max |A b| / max |A| for " + form->name()));
  }
  rep.verdicts.emplace_back("branch", to_string(r.branch));
  rep.verdicts.emplace_back("kernel_dims", join_ints(dims));
  rep.verdicts.emplace_back("intersection_kernel_dim", std::to_string(r.intersection_kernel_dim));
  rep.verdicts.emplace_back("rows", cfg.rows);
}

void run_sphsym(const RunConfig& cfg, const BuiltMetric& metric, Report& rep) {
  const int n = cfg.dim;
  const double rmax = cfg.radius.value_or(0.6);
  const auto grid = rs_grid(cfg.grid_r, cfg.grid_s, 0.05, rmax);
  const int grid_count = static_cast<int>(grid.size());
  bool ran = false;
  if (metric.profile) {
    ran = true;
    const auto& p = *metric.profile;
    if (std::isfinite(p.r0) && !(rmax < p.r0)) fail(ErrorKind::ConfigError, "radius must be smaller than r0");
    const double tol = cfg.tol.value_or(1e-7);
    const PQPair pq = pq_from_profile(p);
    double m1 = 0.0, m2 = 0.0;
    for (const auto& [r, s] : grid) {
      const auto [a, b] = metrizability_residuals(p, pq, r, s);
      m1 = std::max(m1, a);
      m2 = std::max(m2, b);
    }
    rep.add(record("metrizability_first", m1, tol, grid_count, 0, "first metrizability equation on the (r,s) grid"));
    rep.add(record("metrizability_second", m2, tol, grid_count, 0, "second metrizability equation on the (r,s) grid"));
    if (metric.entry && metric.entry->name == "berwald_classic") {
      double qmax = 0.0, perr = 0.0;
      for (const auto& [r, s] : grid) {
        const auto v = pq_values(pq, r, s);
        qmax = std::max(qmax, std::abs(v.Q));
        perr = std::max(perr, std::abs(v.P - (std::sqrt(1.0 - r * r + s * s) + s) / (1.0 - r * r)));
      }
      rep.add(record("closed_form_Q", qmax, 1e-8, grid_count, 0, "Q = 0"));
      rep.add(record("closed_form_P", perr, 1e-8, grid_count, 0, "P = (sqrt(1 - r^2 + s^2) + s) / (1 - r^2)"));
    }
    const MetricModel model = sphsym_metric(p, n);
    const auto samples = draw_shell_samples(n, cfg.samples, cfg.seed, 0.05, rmax);
    const auto gaps = parallel_map(samples.size(), cfg.threads, [&](std::size_t s) {
      const auto geo = evaluate_geometry(model, samples[s], cfg.scheme);
      return relative_gap(geo.spray, spray_from_pq(pq, samples[s]));
    });
    rep.add(record("spray_agreement", *std::max_element(gaps.begin(), gaps.end()), tol, cfg.samples, cfg.seed,
                   "G^i = u P y^i + u^2 Q x^i against the spray of F = u phi"));
    rep.verdicts.emplace_back("profile_class", to_string(classify_profile(p, grid)));
  }
  if (!cfg.P.empty()) {
    ran = true;
    const std::string fsrc = cfg.f.empty() ? "1" : cfg.f;
    const RadialFactor f{fsrc, radial_expression(fsrc)};
    const RsFunction P = rs_expression(cfg.P);
    const PQPair pq = parallel_pq(f, P);
    const double sss_tol = cfg.tol.value_or(1e-10);
    double s1 = 0.0, s2 = 0.0, s3 = 0.0;
    for (const auto& [r, s] : grid) {
      const auto c = sss_residuals(f, P, pq.Q, r, s);
      s1 = std::max(s1, std::abs(c.sss1));
      s2 = std::max(s2, std::abs(c.sss2));
      s3 = std::max(s3, std::abs(c.sss3));
    }
    rep.add(record("parallel_system_first", s1, sss_tol, grid_count, 0, "x-coefficient equation"));
    rep.add(record("parallel_system_second", s2, sss_tol, grid_count, 0, "y-coefficient equation"));
    rep.add(record("parallel_system_third", s3, sss_tol, grid_count, 0, "defining relation of Q"));
    const auto samples = draw_shell_samples(n, cfg.samples, cfg.seed, 0.05, rmax);
    const double tol = cfg.tol.value_or(1e-7);
    const auto r = parallel_form_check(pq, f, samples, tol);
    rep.add(record("horizontal_derivative", std::max(r.max_expansion, r.max_pipeline), tol, r.sample_count, cfg.seed,
                   "beta = f(r) <x,y>, coefficient expansion and pipeline routes; route gap " +
                       format_number(r.max_route_gap)));
    rep.verdicts.emplace_back("parallel", to_string(r.verdict));
  }
  if (!ran) fail(ErrorKind::ConfigError, "sphsym needs phi, a profile metric (euclidean, berwald_classic) or P");
}

void run_scalar_curvature(const RunConfig& cfg, const BuiltMetric& metric, const std::vector<TangentSample>& samples,
                          Report& rep) {
  const double tol = cfg.tol.value_or(1e-6);
  const auto fit = scalar_curvature_fit(metric.model, samples, tol, cfg.threads);
  const int count = static_cast<int>(samples.size());
  rep.add(record("scalar_curvature_fit", fit.max_residual, tol, count, cfg.seed,
                 "max |Phi^h_i - K (F^2 delta^h_i - y_i y^h)| / F^2, y_i = g_ij y^j"));
  if (metric.entry && metric.entry->flag_curvature) {
    double dev = 0.0;
    for (double K : fit.K) dev = std::max(dev, std::abs(K - *metric.entry->flag_curvature));
    rep.add(record("flag_curvature_value", dev, tol, count, cfg.seed,
                   "K against the catalogue value " + format_number(*metric.entry->flag_curvature)));
  }
  rep.verdicts.emplace_back("curvature", to_string(fit.verdict));
  rep.verdicts.emplace_back("K_min", format_number(fit.K_min));
  rep.verdicts.emplace_back("K_max", format_number(fit.K_max));
}

void run_invariants(const RunConfig& cfg, const BuiltMetric& metric, const std::vector<TangentSample>& samples,
                    Report& rep) {
  BatteryOptions opt;
  opt.tol = cfg.tol.value_or(cfg.scheme == Scheme::Taylor ? 1e-8 : 1e-4);
  opt.scheme = cfg.scheme;
  opt.threads = cfg.threads;
  opt.seed = cfg.seed;
  const auto form = build_form(cfg, metric);
  for (auto& c : invariant_battery(metric, form ? *form : probe_form(cfg.dim), samples, opt)) rep.add(std::move(c));
  if (metric.model.has_finsler()) {
    const auto l = landsberg_residual(metric.model, samples, cfg.threads);
    rep.verdicts.emplace_back("max_landsberg", format_number(l.max_landsberg));
    rep.verdicts.emplace_back("max_berwald_curvature", format_number(l.max_berwald));
  }
}

}  // namespace

Report run(const RunConfig& cfg) {
  cfg.validate();
  Report rep;
  rep.command = cfg.command;
  rep.config = config_echo(cfg);
  rep.timestamp = utc_timestamp();
  const BuiltMetric metric = build_metric(cfg);
  if (metric.model.dim != cfg.dim) fail(ErrorKind::ConfigError, "metric dimension does not match dim");
  rep.verdicts.emplace_back("metric", metric.model.name);

  if (cfg.command == "scan") {
    run_scan(cfg, metric, rep);
  } else if (cfg.command == "sphsym") {
    run_sphsym(cfg, metric, rep);
  } else {
    const auto samples = draw_samples(cfg.dim, cfg.samples, cfg.seed, sample_radius(cfg, metric.model));
    if (cfg.command == "tensors")
      run_tensors(cfg, metric, samples, rep);
    else if (cfg.command == "check-parallel")
      run_check_parallel(cfg, metric, samples, rep);
    else if (cfg.command == "scalar-curvature")
      run_scalar_curvature(cfg, metric, samples, rep);
    else
      run_invariants(cfg, metric, samples, rep);
  }
  return rep;
}

int exit_code(const Report& r) { return r.all_pass() ? 0 : 1; }

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ConfigError:
    case ErrorKind::ParseError:
    case ErrorKind::BadParameter:
    case ErrorKind::MissingFinslerFunction:
    case ErrorKind::InsufficientSamples:
      return 2;
    default:
      return 3;
  }
}

}  // namespace finsler
