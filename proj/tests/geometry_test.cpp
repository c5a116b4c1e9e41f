#include <gtest/gtest.h>

#include <cmath>

#include "finsler/catalogue.hpp"
#include "finsler/commands.hpp"

using namespace finsler;

namespace {

MetricModel linear_model() {
  MetricModel m;
  m.name = "linear";
  m.dim = 3;
  m.finsler = ScalarField::from_generic([](auto x, auto y) { return 2.0 * dot(x, y) + 0.0 * y[0]; });
  return m;
}

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

TEST(Energy, SpecValues) {
  EXPECT_DOUBLE_EQ(energy(entry("euclidean").model, TangentSample({0.3, 0.1, 0}, {3, 4, 0})), 12.5);
  EXPECT_NEAR(energy(entry("klein").model, TangentSample({0, 0, 0}, {1, 0, 0})), 0.5, 1e-15);
  CatalogueParams p{3, {0.5, 0, 0}, 1.0, {}};
  EXPECT_NEAR(energy(entry("example1", p).model, TangentSample({0, 0, 0}, {0, 1, 0})), 0.375, 1e-15);
}

TEST(MetricTensor, IdentityForEuclideanAndKleinAtOrigin) {
  for (const char* name : {"euclidean", "klein"}) {
    const auto g = metric_tensor(entry(name).model, TangentSample({0, 0, 0}, {0.3, -0.4, 0.5}));
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) EXPECT_NEAR(g(i, j), i == j ? 1.0 : 0.0, 1e-14) << name;
  }
}

TEST(MetricTensor, LinearFunctionIsDegenerate) {
  const auto m = linear_model();
  EXPECT_EQ(kind_of([&] { metric_tensor(m, TangentSample({0.3, 0.2, 0.1}, {1, 0.5, 0.2})); }),
            ErrorKind::DegenerateMetric);
}

TEST(HilbertForm, EuclideanValues) {
  const auto m = entry("euclidean").model;
  const TangentSample at({0.2, 0.2, 0.2}, {1, 0, 0});
  const auto l = hilbert_form(m, at);
  const auto h = angular_metric(m, at);
  EXPECT_NEAR(l(0), 1.0, 1e-15);
  EXPECT_NEAR(l(1), 0.0, 1e-15);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) EXPECT_NEAR(h(i, j), (i == j && i > 0) ? 1.0 : 0.0, 1e-15);
}

TEST(HilbertForm, TraceAndKernelAcrossCatalogue) {
  for (const auto& name : catalogue_names())
    for (int n : {2, 3, 4}) {
      const auto e = entry(name, reference_params(name, n));
      for (const auto& at : draw_samples(n, 20, 2, e.model.domain.sample_radius)) {
        const auto geo = evaluate_geometry(e.model, at);
        double trace = 0.0;
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) trace += geo.inverse_metric(i, j) * geo.angular_metric(i, j);
        EXPECT_NEAR(trace, n - 1, 1e-8) << name;
        EXPECT_LE(geo.angular_metric.contract(1, at.y()).max_abs(), 1e-10 * (1.0 + geo.angular_metric.max_abs()))
            << name;
        EXPECT_LE(geo.angular_identity_defect, 1e-10 * (1.0 + geo.angular_metric.max_abs())) << name;
      }
    }
}

TEST(Spray, SpecValues) {
  const TangentSample at0({0, 0, 0}, {1, 0, 0});
  EXPECT_EQ(spray_coefficients(entry("euclidean").model, at0).max_abs(), 0.0);
  const auto g1 = spray_coefficients(entry("example1", CatalogueParams{3, {0.5, 0, 0}, 1.0, {}}).model, at0);
  EXPECT_NEAR(g1(0), -0.5, 1e-14);
  EXPECT_NEAR(g1(1), 0.0, 1e-14);
  EXPECT_NEAR(g1(2), 0.0, 1e-14);
  const auto g2 = spray_coefficients(entry("general_berwald", CatalogueParams{3, {0, 0, 0}}).model, at0);
  EXPECT_NEAR(g2(0), 1.0, 1e-14);
  EXPECT_NEAR(g2(1), 0.0, 1e-14);
  // G^i = |y| y^i at x = 0, a = 0
  const TangentSample at1({0, 0, 0}, {0.3, -0.4, 1.2});
  const auto g3 = spray_coefficients(entry("general_berwald", CatalogueParams{3, {0, 0, 0}}).model, at1);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(g3(i), 1.3 * at1.y()[i], 1e-14);
}

TEST(Connection, ExampleOneHandOracle) {
  // G^i = p_k y^k y^i with p = (-1/2, 0, 0): N^i_j = p_j y^i + (p.y) delta^i_j
  const auto m = entry("example1", CatalogueParams{3, {0.5, 0, 0}, 1.0, {}}).model;
  const std::vector<double> y{1.0, 0.7, -0.2};
  const TangentSample at({0, 0, 0}, y);
  const double p[3] = {-0.5, 0, 0};
  const double py = -0.5 * y[0];
  const auto N = nonlinear_connection(m, at);
  const auto B = berwald_connection(m, at);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      EXPECT_NEAR(N(i, j), p[j] * y[i] + (i == j ? py : 0.0), 1e-14);
      for (int h = 0; h < 3; ++h)
        EXPECT_NEAR(B(h, i, j), p[i] * (h == j) + p[j] * (h == i), 1e-13);
    }
  const auto N0 = nonlinear_connection(m, TangentSample({0, 0, 0}, {1, 0, 0}));
  EXPECT_NEAR(N0(0, 0), -1.0, 1e-14);
  EXPECT_NEAR(N0(1, 1), -0.5, 1e-14);
  EXPECT_NEAR(N0(2, 2), -0.5, 1e-14);
  EXPECT_NEAR(B(0, 0, 0), -1.0, 1e-14);
}

TEST(Connection, BerwaldCoefficientsIndependentOfFiber) {
  const auto m = entry("example1", reference_params("example1", 3)).model;
  const std::vector<double> x{0.1, -0.2, 0.3};
  const auto b1 = berwald_connection(m, TangentSample(x, {1, 0.2, 0.3}));
  const auto b2 = berwald_connection(m, TangentSample(x, {-0.4, 0.9, 0.1}));
  EXPECT_LE(max_abs_difference(b1, b2), 1e-9);
}

TEST(Pipeline, EuclideanTensorsVanish) {
  const auto m = entry("euclidean").model;
  for (const auto& at : draw_samples(3, 10, 1, 0.6)) {
    const auto g = evaluate_geometry(m, at);
    EXPECT_EQ(g.spray.max_abs(), 0.0);
    EXPECT_EQ(g.connection.max_abs(), 0.0);
    EXPECT_EQ(g.berwald_connection.max_abs(), 0.0);
    EXPECT_EQ(g.berwald_curvature.max_abs(), 0.0);
    EXPECT_EQ(g.mean_berwald.max_abs(), 0.0);
    EXPECT_EQ(g.landsberg.max_abs(), 0.0);
    EXPECT_EQ(g.jacobi.max_abs(), 0.0);
    EXPECT_EQ(g.curvature.max_abs(), 0.0);
  }
}

TEST(Pipeline, EulerChainAndSymmetryAcrossCatalogue) {
  for (const auto& name : catalogue_names()) {
    const auto e = entry(name, reference_params(name, 3));
    for (const auto& at : draw_samples(3, 20, 4, e.model.domain.sample_radius)) {
      const auto g = evaluate_geometry(e.model, at);
      const auto& y = at.y();
      const double s = 1.0 + g.berwald_curvature.max_abs() + g.connection.max_abs();
      for (int i = 0; i < 3; ++i) {
        double ny = 0.0;
        for (int j = 0; j < 3; ++j) ny += g.connection(i, j) * y[j];
        EXPECT_NEAR(ny, 2.0 * g.spray(i), 1e-9 * s) << name;
      }
      EXPECT_LE(max_abs_difference(g.berwald_connection.contract(2, y), g.connection), 1e-9 * s) << name;
      EXPECT_LE(g.berwald_curvature.contract(3, y).max_abs(), 1e-9 * s) << name;
      EXPECT_LE(g.mean_berwald.contract(1, y).max_abs(), 1e-9 * s) << name;
      EXPECT_LE(g.landsberg.contract(2, y).max_abs(), 1e-9 * (1.0 + g.landsberg.max_abs())) << name;
      EXPECT_LE(g.jacobi.contract(1, y).max_abs(), 1e-9 * (1.0 + g.jacobi.max_abs())) << name;
      for (const TensorValue* t : {&g.metric, &g.berwald_connection, &g.berwald_curvature, &g.mean_berwald,
                                   &g.landsberg, &g.curvature})
        EXPECT_LE(t->max_symmetry_defect(), 1e-10 * (1.0 + t->max_abs())) << name;
      // antisymmetry of R holds exactly as stored
      for (int h = 0; h < 3; ++h)
        for (int j = 0; j < 3; ++j)
          for (int k = 0; k < 3; ++k) EXPECT_EQ(g.curvature(h, j, k), -g.curvature(h, k, j));
    }
  }
}

TEST(Pipeline, MeanBerwaldIsHalfTrace) {
  const auto e = entry("general_berwald", reference_params("general_berwald", 3));
  for (const auto& at : draw_samples(3, 20, 8, 0.6)) {
    const auto g = evaluate_geometry(e.model, at);
    const auto closed = closed_berwald_curvature(at);
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) {
        double tp = 0.0, tc = 0.0;
        for (int i = 0; i < 3; ++i) tp += g.berwald_curvature(i, i, j, k), tc += closed(i, i, j, k);
        EXPECT_NEAR(g.mean_berwald(j, k), 0.5 * tp, 1e-12 * (1 + std::abs(tp)));
        EXPECT_NEAR(g.mean_berwald(j, k), 0.5 * tc, 1e-6 * (1 + std::abs(tc)));
      }
  }
}

TEST(Jacobi, KleinAtOriginAndBerwaldClassicVanishes) {
  const auto phi = jacobi_endomorphism(entry("klein").model, TangentSample({0, 0, 0}, {1, 0, 0}));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) EXPECT_NEAR(phi(i, j), (i == j && i > 0) ? -1.0 : 0.0, 1e-12);
  const auto m = entry("berwald_classic").model;
  for (const auto& at : draw_samples(3, 30, 9, 0.6)) {
    const auto g = evaluate_geometry(m, at);
    EXPECT_LE(g.jacobi.max_abs(), 1e-6 * g.finsler_value * g.finsler_value);
  }
}

TEST(Curvature, ContractionMatchesJacobiWithRecordedSign) {
  const auto m = entry("klein").model;
  for (const auto& at : draw_samples(3, 20, 12, 0.6)) {
    const auto g = evaluate_geometry(m, at);
    EXPECT_LE(max_abs_difference(g.curvature.contract(2, at.y()), g.jacobi), 1e-8);
    EXPECT_EQ(g.curvature_sign, -1);
  }
}

TEST(DeltaDerivative, EuclideanForms) {
  const auto m = entry("euclidean").model;
  const TangentSample at({0.3, -0.1, 0.2}, {0.5, 0.6, -0.2});
  EXPECT_EQ(delta_derivative(m, OneForm::constant({1, 2, 3}).beta(), at).max_abs(), 0.0);
  const auto d = delta_derivative(m, OneForm::position(3).beta(), at);
  for (int j = 0; j < 3; ++j) EXPECT_NEAR(d(j), at.y()[j], 1e-15);
}

TEST(DeltaDerivative, ExampleOneFormIsHorizontallyConstant) {
  const auto e = entry("example1", CatalogueParams{3, {0.5, 0, 0}, 1.0, {0, 0, 0}});
  for (const auto& at : draw_samples(3, 20, 13, 0.6))
    EXPECT_LE(delta_derivative(e.model, e.parallel_form->beta(), at).max_abs(), 1e-8);
}

TEST(SprayOverride, DeviationReported) {
  auto e = entry("example1", reference_params("example1", 3));
  MetricModel m = e.model;
  m.spray_override = e.closed_spray;
  const auto g = evaluate_geometry(m, TangentSample({0.1, 0.2, 0}, {0.3, 0.1, 1}));
  ASSERT_TRUE(g.spray_override_deviation.has_value());
  EXPECT_LE(*g.spray_override_deviation, 1e-12);
}

TEST(Sampling, DeterministicAndInsideBall) {
  const auto a = draw_samples(4, 50, 42, 0.6), b = draw_samples(4, 50, 42, 0.6);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].x(), b[i].x());
    EXPECT_EQ(a[i].y(), b[i].y());
    double r2 = 0.0, y2 = 0.0;
    for (int k = 0; k < 4; ++k) r2 += a[i].x()[k] * a[i].x()[k], y2 += a[i].y()[k] * a[i].y()[k];
    EXPECT_LE(std::sqrt(r2), 0.6);
    EXPECT_NEAR(y2, 1.0, 1e-14);
  }
  EXPECT_NE(draw_samples(4, 1, 43, 0.6)[0].x(), a[0].x());
}

TEST(Domain, OutsideBallRejected) {
  const auto m = entry("klein").model;
  EXPECT_THROW(evaluate_geometry(m, TangentSample({1.2, 0, 0}, {0, 1, 0})), Error);
}
