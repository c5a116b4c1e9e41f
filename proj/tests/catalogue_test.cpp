#include <gtest/gtest.h>

#include <cmath>

#include "finsler/catalogue.hpp"
#include "finsler/commands.hpp"

using namespace finsler;

namespace {

double rel(const TensorValue& a, const TensorValue& b) {
  return max_abs_difference(a, b) / std::max(1.0, std::max(a.max_abs(), b.max_abs()));
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

// Independent evaluation of the general Berwald F straight from its defining formula.
double general_berwald_F(const std::vector<double>& a, const std::vector<double>& x, const std::vector<double>& y) {
  double xx = 0, yy = 0, xy = 0, ax = 0, ay = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    xx += x[i] * x[i];
    yy += y[i] * y[i];
    xy += x[i] * y[i];
    ax += a[i] * x[i];
    ay += a[i] * y[i];
  }
  const double root = std::sqrt(yy - xx * yy + xy * xy);
  return (1 + ax + (ay - xx * ay) / (root + xy)) * std::pow(root + xy, 2) / (std::pow(1 - xx, 2) * root);
}

}  // namespace

TEST(Catalogue, NamesAndErrors) {
  const auto& names = catalogue_names();
  EXPECT_EQ(names.size(), 5u);
  EXPECT_EQ(kind_of([] { entry("nonesuch"); }), ErrorKind::BadParameter);
  EXPECT_EQ(kind_of([] { entry("general_berwald", CatalogueParams{3, {0.9, 0.9, 0}}); }), ErrorKind::BadParameter);
  EXPECT_EQ(kind_of([] { entry("example1", CatalogueParams{3, {0, 0.3, 0}}); }), ErrorKind::BadParameter);
  EXPECT_EQ(kind_of([] { entry("general_berwald", CatalogueParams{3, {0.1, 0.1}}); }), ErrorKind::BadParameter);
}

TEST(Catalogue, GeneralBerwaldMatchesDefiningFormula) {
  const std::vector<double> a{0.1, 0.05, 0.0};
  const auto e = entry("general_berwald", CatalogueParams{3, a});
  for (const auto& at : draw_samples(3, 50, 40, 0.6))
    EXPECT_NEAR(eval_value(*e.model.finsler, at), general_berwald_F(a, at.x(), at.y()), 1e-13);
}

TEST(Catalogue, BerwaldClassicIsGeneralBerwaldAtZero) {
  const auto g = entry("general_berwald", CatalogueParams{3, {0, 0, 0}});
  const auto c = entry("berwald_classic");
  for (const auto& at : draw_samples(3, 50, 41, 0.6))
    EXPECT_NEAR(eval_value(*g.model.finsler, at), eval_value(*c.model.finsler, at), 1e-12);
}

TEST(Catalogue, KleinAtOriginIsEuclideanNorm) {
  const auto k = entry("klein");
  for (const auto& s : draw_samples(3, 10, 42, 1.0)) {
    std::vector<double> y = s.y();
    for (auto& v : y) v *= 2.5;
    EXPECT_NEAR(eval_value(*k.model.finsler, TangentSample({0, 0, 0}, y)), 2.5, 1e-14);
  }
}

TEST(Catalogue, ExampleOneClosedSpray) {
  const auto e = entry("example1", CatalogueParams{3, {0.5, 0, 0}, 1.0, {}});
  const auto g = eval_vector(*e.closed_spray, TangentSample({0, 0, 0}, {1, 0, 0}));
  EXPECT_NEAR(g[0], -0.5, 1e-15);
  EXPECT_NEAR(g[1], 0.0, 1e-15);
  EXPECT_NEAR(g[2], 0.0, 1e-15);
  EXPECT_TRUE(e.berwald);
  EXPECT_TRUE(e.landsberg);
}

TEST(Catalogue, ClosedFormsMatchPipelineAtHundredSamples) {
  for (const auto& name : catalogue_names()) {
    const auto e = entry(name, reference_params(name, 3));
    for (const auto& at : draw_samples(3, 100, 43, e.model.domain.sample_radius)) {
      const auto geo = evaluate_geometry(e.model, at);
      if (e.closed_spray) {
        const auto g = eval_vector(*e.closed_spray, at);
        for (int i = 0; i < 3; ++i) EXPECT_NEAR(geo.spray(i), g[i], 1e-6 * std::max(1.0, std::abs(g[i]))) << name;
      }
      if (e.closed_connection) EXPECT_LE(rel(geo.connection, (*e.closed_connection)(at)), 1e-6) << name;
      if (e.closed_berwald_curvature)
        EXPECT_LE(rel(geo.berwald_curvature, (*e.closed_berwald_curvature)(at)), 1e-6) << name;
    }
  }
}

TEST(ClosedBerwaldCurvature, IndependentOfParameterAndSymmetric) {
  for (const auto& at : draw_samples(3, 20, 44, 0.6)) {
    const auto c = closed_berwald_curvature(at);
    EXPECT_LE(c.max_symmetry_defect(), 1e-10 * (1.0 + c.max_abs()));
    EXPECT_LE(c.contract(3, at.y()).max_abs(), 1e-9 * (1.0 + c.max_abs()));
    EXPECT_EQ(c.lowering(), LoweringConvention::EuclideanLowering);
    // the same closed form serves every a
    const auto e1 = entry("general_berwald", CatalogueParams{3, {0.1, 0, 0}});
    const auto e2 = entry("general_berwald", CatalogueParams{3, {0, 0, 0}});
    EXPECT_EQ(max_abs_difference((*e1.closed_berwald_curvature)(at), (*e2.closed_berwald_curvature)(at)), 0.0);
  }
}

TEST(ProjectiveFactor, OriginValuesAndJetAgreement) {
  const TangentSample origin({0, 0, 0}, {0.6, 0.0, 0.8});
  const auto p0 = projective_factor_jets(origin);
  EXPECT_NEAR(p0.value, 1.0, 1e-15);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(p0.first(i), origin.y()[i], 1e-15);

  const ScalarField P = projective_factor_field();
  for (const auto& at : draw_samples(3, 30, 45, 0.6)) {
    const auto p = projective_factor_jets(at);
    const Jet j = eval_jet(P, at, JetOrder{0, 3});
    EXPECT_NEAR(p.value, j.value(), 1e-12);
    for (int i = 0; i < 3; ++i) {
      EXPECT_NEAR(p.first(i), j.partial({3 + i}), 1e-8);
      for (int k = 0; k < 3; ++k) {
        EXPECT_NEAR(p.second(i, k), j.partial({3 + i, 3 + k}), 1e-8);
        for (int l = 0; l < 3; ++l) EXPECT_NEAR(p.third(i, k, l), j.partial({3 + i, 3 + k, 3 + l}), 1e-8);
      }
    }
    EXPECT_LE(p.second.max_symmetry_defect(), 1e-10 * (1 + p.second.max_abs()));
    EXPECT_LE(p.third.max_symmetry_defect(), 1e-10 * (1 + p.third.max_abs()));
    EXPECT_LE(max_abs_difference(assemble_berwald_curvature(p, at.y()), closed_berwald_curvature(at)), 1e-9);
  }
}

TEST(Catalogue, ZeroFlagCurvatureOfBerwaldClassic) {
  const auto e = entry("berwald_classic");
  for (const auto& at : draw_samples(3, 100, 46, 0.6)) {
    const auto geo = evaluate_geometry(e.model, at);
    EXPECT_LE(geo.jacobi.max_abs(), 1e-6 * geo.finsler_value * geo.finsler_value);
  }
}
