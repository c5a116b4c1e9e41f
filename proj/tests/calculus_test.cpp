#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "finsler/catalogue.hpp"
#include "finsler/commands.hpp"

using namespace finsler;

namespace {

ScalarField norm_field() {
  return ScalarField::from_generic([](auto x, auto y) {
    (void)x;
    return sqrt(dot(y, y));
  });
}

double relative_jet_gap(const Jet& a, const Jet& b) {
  double d = 0.0, s = 0.0;
  const auto ca = a.coefficients(), cb = b.coefficients();
  for (std::size_t i = 0; i < ca.size(); ++i) {
    d = std::max(d, std::abs(ca[i] - cb[i]));
    s = std::max(s, std::abs(ca[i]));
  }
  return d / std::max(1.0, s);
}

}  // namespace

TEST(Jet, ArithmeticMatchesHandDerivatives) {
  // f(u, v) = sin(u) exp(v) / (1 + u^2) around (0.3, -0.2)
  const auto l = Layout::get(1, 1, 3, 3, 3);
  const Jet u = Jet::variable(l, 0, 0.3), v = Jet::variable(l, 1, -0.2);
  const Jet f = sin(u) * exp(v) / (1.0 + u * u);
  const double a = 0.3, b = -0.2;
  const double g = std::sin(a) / (1 + a * a);
  const double gp = std::cos(a) / (1 + a * a) - 2 * a * std::sin(a) / ((1 + a * a) * (1 + a * a));
  EXPECT_NEAR(f.value(), g * std::exp(b), 1e-15);
  EXPECT_NEAR(f.partial({0}), gp * std::exp(b), 1e-14);
  EXPECT_NEAR(f.partial({1}), g * std::exp(b), 1e-15);
  EXPECT_NEAR(f.partial({1, 1, 1}), g * std::exp(b), 1e-14);
  EXPECT_NEAR(f.partial({0, 1, 1}), gp * std::exp(b), 1e-14);
  EXPECT_DOUBLE_EQ(f.partial({0, 1}), f.partial({1, 0}));
}

TEST(Jet, PowersAndLogs) {
  const auto l = Layout::get(1, 0, 4, 0, 4);
  const Jet t = Jet::variable(l, 0, 1.7);
  const Jet p = pow(t, 3), q = pow(t, 2.5), r = log(t), s = sqrt(t);
  EXPECT_NEAR(p.partial({0, 0, 0}), 6.0, 1e-13);
  EXPECT_NEAR(q.partial({0, 0}), 2.5 * 1.5 * std::pow(1.7, 0.5), 1e-13);
  EXPECT_NEAR(r.partial({0, 0, 0}), 2.0 / std::pow(1.7, 3), 1e-14);
  EXPECT_NEAR(s.partial({0}), 0.5 / std::sqrt(1.7), 1e-15);
  EXPECT_NEAR(pow(t, -2).partial({0}), -2.0 / std::pow(1.7, 3), 1e-14);
}

TEST(Jet, LayoutEnumeratesAllCappedMonomials) {
  for (int n : {1, 2, 3}) {
    const auto l = Layout::get(n, n, 2, 3, 4);
    // brute-force count of (a, b) with |a| <= 2, |b| <= 3, |a| + |b| <= 4
    int count = 0;
    const int nv = 2 * n;
    std::vector<int> e(nv, 0);
    std::function<void(int)> rec = [&](int k) {
      if (k == nv) {
        int ax = 0, by = 0;
        for (int i = 0; i < n; ++i) ax += e[i], by += e[n + i];
        if (ax <= 2 && by <= 3 && ax + by <= 4) ++count;
        return;
      }
      for (int d = 0; d <= 4; ++d) {
        e[k] = d;
        rec(k + 1);
      }
      e[k] = 0;
    };
    rec(0);
    EXPECT_EQ(l->size(), count) << "n = " << n;
  }
}

TEST(EvalJet, NormGradientAndHessian) {
  const TangentSample at({0.4, -0.1, 0.2}, {1, 0, 0});
  const Jet j1 = eval_jet(norm_field(), at, JetOrder{0, 1});
  EXPECT_DOUBLE_EQ(j1.value(), 1.0);
  EXPECT_NEAR(j1.partial({3}), 1.0, 1e-15);
  EXPECT_NEAR(j1.partial({4}), 0.0, 1e-15);
  EXPECT_NEAR(j1.partial({5}), 0.0, 1e-15);
  const Jet j2 = eval_jet(norm_field(), at, JetOrder{0, 2});
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) EXPECT_NEAR(j2.partial({3 + i, 3 + k}), (i == k && i > 0) ? 1.0 : 0.0, 1e-15);
}

TEST(EvalJet, OrderCapsEnforced) {
  const TangentSample at({0.1, 0.1}, {1, 0});
  EXPECT_THROW(eval_jet(norm_field(), at, JetOrder{3, 0}), Error);
  EXPECT_THROW(eval_jet(norm_field(), at, JetOrder{0, 6}), Error);
}

TEST(EvalJet, AdAndFdAgreeAtReferencePoint) {
  const auto e = entry("general_berwald", CatalogueParams{3, {0.1, 0.05, 0.0}});
  const TangentSample at({0.2, 0, 0}, {0, 1, 0});
  const Jet ad = eval_jet(*e.model.finsler, at, JetOrder{1, 3}, Scheme::Taylor);
  const Jet fd = eval_jet(*e.model.finsler, at, JetOrder{1, 3}, Scheme::FiniteDifference);
  EXPECT_LE(relative_jet_gap(ad, fd), 1e-6);
}

TEST(EvalJet, SchemeAgreementAcrossCatalogue) {
  for (const auto& name : catalogue_names()) {
    const auto e = entry(name, reference_params(name, 3));
    double worst = 0.0;
    for (const auto& at : draw_samples(3, 100, 11, e.model.domain.sample_radius))
      worst = std::max(worst, relative_jet_gap(eval_jet(*e.model.finsler, at, JetOrder{1, 3}),
                                               eval_jet(*e.model.finsler, at, JetOrder{1, 3}, Scheme::FiniteDifference)));
    EXPECT_LE(worst, 1e-6) << name;
  }
}

TEST(EvalJet, MixedPartialsSymmetricUnderPermutation) {
  const auto e = entry("general_berwald", reference_params("general_berwald", 3));
  for (const auto& at : draw_samples(3, 10, 5, 0.6)) {
    const Jet j = eval_jet(*e.model.finsler, at, JetOrder{1, 3});
    EXPECT_EQ(j.partial({0, 3, 4}), j.partial({4, 0, 3}));
    EXPECT_EQ(j.partial({3, 5, 5}), j.partial({5, 3, 5}));
    // FD estimates of the same mixed partial taken in either order
    const int ex[6] = {1, 0, 0, 1, 1, 0};
    const double fd = finite_difference_partial(*e.model.finsler, at, ex);
    EXPECT_NEAR(fd, j.partial({0, 3, 4}), 1e-5 * (1.0 + std::abs(fd)));
  }
}

TEST(EvalJet, NonFiniteSignalsDomainViolation) {
  const auto e = entry("klein");
  const TangentSample at({1.0, 0.0, 0.0}, {0, 1, 0});
  EXPECT_THROW(
      {
        try {
          eval_jet(*e.model.finsler, at, JetOrder{0, 2});
        } catch (const Error& err) {
          EXPECT_EQ(err.kind(), ErrorKind::NonFiniteValue);
          throw;
        }
      },
      Error);
}

TEST(TangentSample, RejectsZeroFiber) {
  EXPECT_THROW(TangentSample({0.0, 0.0}, {0.0, 0.0}), Error);
  EXPECT_THROW(TangentSample({0.0}, {1.0, 0.0}), Error);
}

TEST(Homogeneity, NormSprayAndForm) {
  const TangentSample at({0.1, 0.2, -0.3}, {0.3, -0.5, 0.8});
  EXPECT_LE(homogeneity_check(norm_field(), at, 1), 1e-15);
  const auto e = entry("example1", reference_params("example1", 3));
  EXPECT_LE(homogeneity_check(*e.closed_spray, at, 2), 1e-12);
  const auto beta = e.parallel_form->beta();
  EXPECT_LE(homogeneity_check(beta, at, 1), 1e-14);
  EXPECT_LE(homogeneity_check(OneForm::position(3).beta(), at, 1), 1e-14);
}

TEST(Homogeneity, EnergyEulerIdentityAcrossCatalogue) {
  for (const auto& name : catalogue_names()) {
    const auto e = entry(name, reference_params(name, 3));
    for (const auto& at : draw_samples(3, 25, 3, e.model.domain.sample_radius)) {
      const Jet F = eval_jet(*e.model.finsler, at, JetOrder{0, 1});
      // y^i d_i E = F y^i d_i F = 2E
      double euler = 0.0;
      for (int i = 0; i < 3; ++i) euler += at.y()[i] * F.value() * F.partial({3 + i});
      const double twoE = F.value() * F.value();
      EXPECT_LE(std::abs(euler - twoE), 1e-10 * twoE) << name;
    }
  }
}
