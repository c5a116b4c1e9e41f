#include <gtest/gtest.h>

#include <cmath>

#include "finsler/catalogue.hpp"
#include "finsler/commands.hpp"
#include "finsler/forms.hpp"

using namespace finsler;

namespace {

CatalogueEntry example1() { return entry("example1", reference_params("example1", 3)); }

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::ConfigError;
}

}  // namespace

TEST(CovariantDerivative, EuclideanOracles) {
  const auto m = entry("euclidean").model;
  const TangentSample at({0.2, 0.1, -0.3}, {0.1, 0.9, 0.3});
  EXPECT_EQ(covariant_derivative(m, OneForm::constant({1, -2, 0.5}), at).max_abs(), 0.0);
  const auto c = covariant_derivative(m, OneForm::position(3), at);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) EXPECT_NEAR(c(i, j), i == j ? 1.0 : 0.0, 1e-15);
}

TEST(CovariantDerivative, ExampleOneFormVanishes) {
  const auto e = entry("example1", CatalogueParams{3, {0.5, 0, 0}, 1.0, {0, 0, 0}});
  for (const auto& at : draw_samples(3, 100, 21, 0.6))
    EXPECT_LE(covariant_derivative(e.model, *e.parallel_form, at).max_abs(), 1e-8);
}

TEST(CovariantDerivative, ContractionAndFiberDerivativeIdentities) {
  // y^i b_{i|j} = delta_j beta and d_{y^i}(delta_j beta) = b_{i|j}
  for (const char* name : {"klein", "general_berwald", "berwald_classic"}) {
    const auto e = entry(name, reference_params(name, 3));
    const OneForm form = probe_form(3);
    const ScalarField beta = form.beta();
    for (const auto& at : draw_samples(3, 20, 22, 0.6)) {
      const auto geo = evaluate_geometry(e.model, at);
      const auto cov = covariant_derivative(geo, form);
      const auto d = delta_derivative(geo, beta);
      const auto yc = cov.contract(0, at.y());
      const double scale = 1.0 + cov.max_abs();
      for (int j = 0; j < 3; ++j) EXPECT_NEAR(yc(j), d(j), 1e-10 * scale) << name;
      // fiber derivative of delta_j beta by differencing the AD pipeline along each y^i
      for (int i = 0; i < 3; ++i) {
        const double h = 1e-5;
        auto yp = at.y(), ym = at.y();
        yp[i] += h;
        ym[i] -= h;
        const auto dp = delta_derivative(e.model, beta, TangentSample(at.x(), yp));
        const auto dm = delta_derivative(e.model, beta, TangentSample(at.x(), ym));
        for (int j = 0; j < 3; ++j) EXPECT_NEAR((dp(j) - dm(j)) / (2 * h), cov(i, j), 1e-8 * scale * 10) << name;
      }
    }
  }
}

TEST(CurvatureForm, SpecValues) {
  const auto eu = entry("euclidean").model;
  const TangentSample at({0.1, 0.2, 0.3}, {1, 0, 0});
  EXPECT_EQ(d_R_beta(eu, OneForm::constant({1, 1, 1}), at).two_form.max_abs(), 0.0);
  const auto kl = d_R_beta(entry("klein").model, OneForm::constant({0, 1, 0}), TangentSample({0, 0, 0}, {1, 0, 0}));
  EXPECT_NEAR(kl.contracted(0), 0.0, 1e-12);
  EXPECT_NEAR(kl.contracted(1), -1.0, 1e-12);
  EXPECT_NEAR(kl.contracted(2), 0.0, 1e-12);
  const auto bc = entry("berwald_classic").model;
  for (const auto& s : draw_samples(3, 20, 23, 0.6))
    EXPECT_LE(d_R_beta(bc, OneForm::constant({0.3, -1, 2}), s).two_form.max_abs(), 1e-6);
}

TEST(MCovector, EuclideanAndSweep) {
  const auto eu = entry("euclidean").model;
  const auto b = OneForm::constant({1, 0, 0});
  EXPECT_LE(m_covector(eu, b, TangentSample({0, 0, 0}, {1, 0, 0})).norm, 1e-15);
  const auto m = m_covector(eu, b, TangentSample({0, 0, 0}, {0, 1, 0}));
  EXPECT_NEAR(m.components(0), 1.0, 1e-15);
  EXPECT_NEAR(m.components(1), 0.0, 1e-15);
  // not identically zero in y, for every catalogue metric and n
  for (const auto& name : catalogue_names())
    for (int n : {2, 3, 4}) {
      const auto e = entry(name, reference_params(name, n));
      std::vector<double> bc(n, 0.0);
      bc[n - 1] = 0.7;
      bc[0] = -0.2;
      const auto x = draw_samples(n, 1, 24, e.model.domain.sample_radius)[0].x();
      double best = 0.0;
      for (const auto& s : draw_samples(n, 50, 25, 1.0))
        best = std::max(best, m_covector(e.model, OneForm::constant(bc), TangentSample(x, s.y())).norm);
      EXPECT_GT(best, 1e-8) << name << " n=" << n;
    }
}

TEST(IsParallel, Verdicts) {
  const auto eu = entry("euclidean").model;
  const auto samples = draw_samples(3, 20, 26, 0.6);
  EXPECT_EQ(is_parallel(eu, OneForm::constant({1, 2, 3}), samples).verdict, ParallelVerdict::ParallelWithinTol);
  const auto r = is_parallel(eu, OneForm::position(3), samples);
  EXPECT_EQ(r.verdict, ParallelVerdict::NotParallel);
  EXPECT_NEAR(r.max_covariant, 1.0, 1e-15);
  const auto e = example1();
  const auto ex = is_parallel(e.model, *e.parallel_form, draw_samples(3, 100, 27, 0.6));
  EXPECT_EQ(ex.verdict, ParallelVerdict::ParallelWithinTol);
  EXPECT_LE(ex.max_covariant, 1e-7);
  EXPECT_LE(ex.max_delta, 1e-7);
  EXPECT_LE(ex.max_curvature, 1e-7);
  EXPECT_LE(ex.max_euler, 1e-14);
}

TEST(IsParallel, VerdictIffAllMaximaWithinTolerance) {
  const auto e = example1();
  const auto samples = draw_samples(3, 30, 28, 0.6);
  for (double scale : {1.0, 1.3}) {
    // the family built for a different a is no longer parallel
    const OneForm f = scale == 1.0 ? *e.parallel_form : OneForm::flat_projective_family({0.5, 0.1 * scale, 0.0}, 1.0, {0.0, 0.2, 0.0});
    const auto r = is_parallel(e.model, f, samples);
    const bool within = r.max_covariant <= r.tolerances.covariant && r.max_delta <= r.tolerances.delta &&
                        r.max_curvature <= r.tolerances.curvature && r.max_euler <= r.tolerances.euler;
    EXPECT_EQ(r.verdict == ParallelVerdict::ParallelWithinTol, within);
    EXPECT_EQ(within, scale == 1.0);
  }
}

TEST(IsParallel, ThreadCountDoesNotChangeResult) {
  const auto e = example1();
  const auto samples = draw_samples(3, 40, 29, 0.6);
  const auto a = is_parallel(e.model, *e.parallel_form, samples, {}, Scheme::Taylor, 1);
  const auto b = is_parallel(e.model, *e.parallel_form, samples, {}, Scheme::Taylor, 4);
  EXPECT_EQ(a.max_covariant, b.max_covariant);
  EXPECT_EQ(a.max_delta, b.max_delta);
  EXPECT_EQ(a.max_curvature, b.max_curvature);
  EXPECT_EQ(a.worst_delta, b.worst_delta);
}

TEST(IsParallel, NeedsTenSamples) {
  EXPECT_EQ(kind_of([] { is_parallel(entry("euclidean").model, OneForm::position(3), draw_samples(3, 9, 0, 0.6)); }),
            ErrorKind::InsufficientSamples);
}

TEST(IsParallel, FiniteDifferenceScheme) {
  const auto e = example1();
  const auto r = is_parallel(e.model, *e.parallel_form, draw_samples(3, 10, 30, 0.6),
                             ParallelTolerances::for_scheme(Scheme::FiniteDifference), Scheme::FiniteDifference);
  EXPECT_EQ(r.verdict, ParallelVerdict::ParallelWithinTol);
  EXPECT_DOUBLE_EQ(r.tolerances.covariant, 1e-4);
}

TEST(ExampleOneFamily, RejectsZeroFirstComponent) {
  EXPECT_EQ(kind_of([] { OneForm::flat_projective_family({0.0, 0.3, 0.0}, 1.0, {}); }), ErrorKind::BadParameter);
}

TEST(RandersLift, PositivityAndSpray) {
  EXPECT_NO_THROW(randers_lift(entry("euclidean").model, OneForm::constant({0.5, 0, 0})));
  EXPECT_EQ(kind_of([] { randers_lift(entry("euclidean").model, OneForm::constant({2, 0, 0})); }), ErrorKind::NotPositive);

  const auto e = example1();
  const auto lift = randers_lift(e.model, e.parallel_form->scaled(0.3));
  EXPECT_FALSE(lift.spray_override.has_value());
  for (const auto& at : draw_samples(3, 100, 31, 0.6)) {
    const auto g0 = evaluate_geometry(e.model, at);
    const auto g1 = evaluate_geometry(lift, at);
    EXPECT_LE(max_abs_difference(g0.spray, g1.spray), 1e-7);
    const auto [l, b] = annihilation_check(g1, e.parallel_form->scaled(0.3));
    EXPECT_LE(l, 1e-7);
    EXPECT_LE(b, 1e-7);
  }
}

TEST(FunctionalIndependence, SpecExamples) {
  const auto eu = entry("euclidean").model;
  const auto b = OneForm::constant({1, 0, 0});
  const auto r1 = functional_independence(eu, b, randers_deformation(), {TangentSample({0, 0, 0}, {0, 1, 0})});
  EXPECT_EQ(r1.max_rank, 2);
  const auto r2 = functional_independence(eu, b, randers_deformation(),
                                          {TangentSample({0, 0, 0}, {1, 0, 0}), TangentSample({0, 0, 0}, {0, 1, 0})});
  EXPECT_EQ(r2.ranks[0], 1);
  EXPECT_EQ(r2.max_rank, 2);
  const auto e = example1();
  EXPECT_EQ(functional_independence(e.model, *e.parallel_form, randers_deformation(), draw_samples(3, 100, 32, 0.6)).max_rank, 2);
  EXPECT_EQ(functional_independence(e.model, *e.parallel_form, exponential_deformation(), draw_samples(3, 20, 33, 0.6)).max_rank, 2);
}

TEST(Annihilation, SpecExamples) {
  const TangentSample at({0.2, -0.1, 0.15}, {0.3, 0.8, -0.5});
  const auto [l0, b0] = annihilation_check(entry("euclidean").model, OneForm::constant({1, 2, 3}), at);
  EXPECT_EQ(l0, 0.0);
  EXPECT_EQ(b0, 0.0);
  const auto e = example1();
  const auto [l1, b1] = annihilation_check(e.model, *e.parallel_form, at);
  EXPECT_LE(l1, 1e-9);
  EXPECT_LE(b1, 1e-9);
  const auto gb = entry("general_berwald", reference_params("general_berwald", 3));
  const auto [l2, b2] = annihilation_check(gb.model, OneForm::constant({1, 0, 0}), at);
  (void)l2;
  EXPECT_GT(b2, 1e-3);
}
