#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <string>

#include "finsler/analysis.hpp"
#include "finsler/catalogue.hpp"
#include "finsler/commands.hpp"
#include "finsler/forms.hpp"
#include "finsler/sphsym.hpp"

using namespace finsler;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double rel(const TensorValue& a, const TensorValue& b) {
  return max_abs_difference(a, b) / std::max(1.0, std::max(a.max_abs(), b.max_abs()));
}

Outcome ac1() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto e = entry("general_berwald", CatalogueParams{3, {0.1, 0.05, 0.0}});
  double worst = 0.0;
  for (const auto& at : draw_samples(3, 100, 0, 0.6))
    worst = std::max(worst, rel(evaluate_geometry(e.model, at).berwald_curvature, (*e.closed_berwald_curvature)(at)));
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {worst <= 1e-6 && secs <= 60.0, "max relative gap " + fmt(worst) + ", " + fmt(secs) + " s"};
}

Outcome ac2() {
  const auto e = entry("example1", CatalogueParams{3, {0.5, 0.1, 0.0}, 1.0, {0.0, 0.2, 0.0}});
  const auto samples = draw_samples(3, 100, 0, 0.6);
  const auto r = is_parallel(e.model, *e.parallel_form, samples);
  double spray = 0.0;
  for (const auto& at : samples) {
    const auto g = evaluate_geometry(e.model, at).spray;
    const auto c = eval_vector(*e.closed_spray, at);
    for (int i = 0; i < 3; ++i) spray = std::max(spray, std::abs(g(i) - c[i]));
  }
  const bool ok = r.max_covariant <= 1e-7 && r.max_delta <= 1e-7 && r.max_curvature <= 1e-7 && spray <= 1e-9;
  return {ok, "b_i|j " + fmt(r.max_covariant) + ", delta " + fmt(r.max_delta) + ", d_R " + fmt(r.max_curvature) +
                  ", spray " + fmt(spray)};
}

Outcome ac3() {
  const auto e = entry("general_berwald", CatalogueParams{3, {0.1, 0.05, 0.0}});
  const auto r = parallel_obstruction_scan(e.model, 5, 20);
  std::string dims;
  for (const auto& p : r.points) dims += std::to_string(p.kernel_dim);
  const bool ok = r.points.size() >= 5 && r.branch != ScanBranch::Inconclusive;
  return {ok, std::string("branch ") + to_string(r.branch) + ", kernel dims " + dims + ", intersection " +
                  std::to_string(r.intersection_kernel_dim)};
}

Outcome ac4() {
  const auto m = entry("klein").model;
  const auto fit = scalar_curvature_fit(m, draw_samples(3, 100, 0, 0.6));
  ScanOptions o;
  o.berwald_rows = false;
  const auto scan = parallel_obstruction_scan(m, 5, 20, o);
  bool zero = !scan.points.empty();
  for (const auto& p : scan.points) zero = zero && p.kernel_dim == 0;
  const bool ok = std::abs(fit.K_min + 1.0) <= 1e-6 && std::abs(fit.K_max + 1.0) <= 1e-6 && fit.max_residual <= 1e-6 && zero;
  return {ok, "K in [" + fmt(fit.K_min) + ", " + fmt(fit.K_max) + "], residual " + fmt(fit.max_residual) +
                  ", R-row kernels " + (zero ? "all 0" : "nonzero")};
}

Outcome ac5() {
  const auto m = entry("berwald_classic").model;
  double worst = 0.0;
  for (const auto& at : draw_samples(3, 100, 0, 0.6)) {
    const auto geo = evaluate_geometry(m, at);
    worst = std::max(worst, geo.jacobi.max_abs() / (geo.finsler_value * geo.finsler_value));
  }
  return {worst <= 1e-6, "max |Phi| / F^2 " + fmt(worst)};
}

Outcome ac6() {
  const auto profile = berwald_classic_profile();
  const auto pq = pq_from_profile(profile);
  double q = 0.0, p = 0.0, m1 = 0.0, m2 = 0.0;
  for (const auto& [r, s] : rs_grid(20, 20)) {
    const auto v = pq_values(pq, r, s);
    q = std::max(q, std::abs(v.Q));
    p = std::max(p, std::abs(v.P - (std::sqrt(1 - r * r + s * s) + s) / (1 - r * r)));
    const auto [a, b] = metrizability_residuals(profile, pq, r, s);
    m1 = std::max(m1, a);
    m2 = std::max(m2, b);
  }
  const auto model = sphsym_metric(profile, 3);
  double spray = 0.0;
  for (const auto& at : draw_samples(3, 100, 0, 0.6))
    spray = std::max(spray, max_abs_difference(evaluate_geometry(model, at).spray, spray_from_pq(pq, at)));
  const bool ok = q <= 1e-8 && p <= 1e-8 && m1 <= 1e-7 && m2 <= 1e-7 && spray <= 1e-7;
  return {ok, "|Q| " + fmt(q) + ", P gap " + fmt(p) + ", metrizability " + fmt(m1) + "/" + fmt(m2) + ", spray " + fmt(spray)};
}

Outcome ac7() {
  const RadialFactor one = constant_factor(1.0);
  const RsFunction P = [](const Jet& r, const Jet& s) { return r * s / 10.0; };
  const RsFunction Q = parallel_q_function(one, P);
  const auto rep = parallel_form_check(parallel_pq(one, P), one, draw_shell_samples(3, 100, 0, 0.1, 0.9));
  double s1 = 0.0, s2 = 0.0;
  for (const auto& [r, s] : rs_grid(20, 20, 0.05, 0.9)) {
    const auto c = sss_residuals(one, P, Q, r, s);
    s1 = std::max(s1, std::abs(c.sss1));
    s2 = std::max(s2, std::abs(c.sss2));
  }
  const double delta = std::max(rep.max_expansion, rep.max_pipeline);
  return {delta <= 1e-7 && s1 <= 1e-10 && s2 <= 1e-10,
          "max |delta beta| " + fmt(delta) + ", SSS1 " + fmt(s1) + ", SSS2 " + fmt(s2)};
}

Outcome ac8() {
  const auto e = entry("example1", CatalogueParams{3, {0.5, 0.1, 0.0}, 1.0, {0.0, 0.2, 0.0}});
  const auto samples = draw_samples(3, 100, 0, 0.6);
  // sup|b| sup|y| / inf F over unit y must stay below 1 for F + beta to be positive
  double sup_b = 0.0, inf_F = std::numeric_limits<double>::infinity();
  for (const auto& at : samples) {
    for (double v : e.parallel_form->coefficients(std::span<const double>(at.x()))) sup_b = std::max(sup_b, std::abs(v));
    for (const auto& d : draw_samples(3, 50, 1, 1.0)) {
      std::vector<double> y = d.y();
      double norm = 0.0;
      for (double v : y) norm += v * v;
      for (auto& v : y) v /= std::sqrt(norm);
      inf_F = std::min(inf_F, eval_value(*e.model.finsler, TangentSample(at.x(), y)));
    }
  }
  const double factor = 0.5 * inf_F / (std::sqrt(3.0) * sup_b);
  const OneForm form = e.parallel_form->scaled(factor);
  const auto lift = randers_lift(e.model, form);
  double spray = 0.0, annihilation = 0.0;
  for (const auto& at : samples) {
    const auto g0 = evaluate_geometry(e.model, at);
    const auto g1 = evaluate_geometry(lift, at);
    spray = std::max(spray, max_abs_difference(g0.spray, g1.spray));
    annihilation = std::max(annihilation, annihilation_check(g1, form).first);
  }
  const int rank = functional_independence(e.model, *e.parallel_form, randers_deformation(), samples).max_rank;
  return {spray <= 1e-7 && annihilation <= 1e-7 && rank == 2,
          "form scaled by " + fmt(factor) + ", spray gap " + fmt(spray) + ", annihilation " + fmt(annihilation) + ", rank " + std::to_string(rank)};
}

Outcome ac9() {
  const auto t0 = std::chrono::steady_clock::now();
  int failures = 0, records = 0;
  double worst = 0.0;
  for (const auto& name : catalogue_names())
    for (int n : {2, 3, 4}) {
      RunConfig c;
      c.metric = name;
      c.dim = n;
      const auto metric = build_metric(c);
      const auto form = metric.entry && metric.entry->parallel_form ? *metric.entry->parallel_form : probe_form(n);
      const auto samples = draw_samples(n, 100, 0, metric.model.domain.sample_radius);
      for (const auto& r : invariant_battery(metric, form, samples, BatteryOptions{})) {
        ++records;
        if (!r.pass) ++failures;
        worst = std::max(worst, r.max_residual);
      }
    }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {failures == 0 && secs <= 300.0, std::to_string(records) + " records, " + std::to_string(failures) +
                                               " failed, worst " + fmt(worst) + ", " + fmt(secs) + " s"};
}

std::string without_timestamp(std::string s) {
  const auto p = s.find("\"timestamp\"");
  if (p != std::string::npos) s.erase(p, s.find(',', p) - p + 1);
  return s;
}

Outcome ac10() {
  int identical = 0, total = 0;
  for (const auto& [cmd, metric] : std::vector<std::pair<std::string, std::string>>{
           {"tensors", "general_berwald"}, {"check-parallel", "example1"}, {"scan", "general_berwald"},
           {"sphsym", "berwald_classic"}, {"scalar-curvature", "klein"}, {"invariants", "klein"}}) {
    RunConfig c;
    c.command = cmd;
    c.metric = metric;
    c.seed = 11;
    ++total;
    if (without_timestamp(to_json(run(c))) == without_timestamp(to_json(run(c)))) ++identical;
  }
  return {identical == total, std::to_string(identical) + "/" + std::to_string(total) + " commands byte-identical"};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"AC1 closed-form Berwald curvature", ac1}, {"AC2 Example 1 parallel form", ac2},
      {"AC3 general Berwald scan", ac3},          {"AC4 Klein scalar curvature", ac4},
      {"AC5 zero flag curvature", ac5},           {"AC6 profile closure", ac6},
      {"AC7 constructive parallel form", ac7},    {"AC8 Randers lift", ac8},
      {"AC9 invariant battery", ac9},             {"AC10 determinism", ac10}};
  int failed = 0;
  for (const auto& [label, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const Error& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", label, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
