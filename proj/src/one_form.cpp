#include "finsler/one_form.hpp"

#include <cmath>

namespace finsler {

OneForm::OneForm(std::string name, int dim, JetCoefficients jet, ValueCoefficients value)
    : name_(std::move(name)), dim_(dim), jet_(std::move(jet)), value_(std::move(value)) {
  if (dim_ < 1) fail(ErrorKind::BadParameter, "one-form: dimension must be positive");
}

OneForm OneForm::constant(std::vector<double> b) {
  const int n = static_cast<int>(b.size());
  return from_generic("constant", n, [b](auto x) {
    using T = typename decltype(x)::value_type;
    std::vector<std::remove_const_t<T>> out;
    for (std::size_t i = 0; i < b.size(); ++i) out.push_back(x[i] * 0.0 + b[i]);
    return out;
  });
}

OneForm OneForm::position(int dim) {
  return from_generic("position", dim, [](auto x) {
    using T = std::remove_const_t<typename decltype(x)::value_type>;
    return std::vector<T>(x.begin(), x.end());
  });
}

OneForm OneForm::flat_projective_family(std::vector<double> a, double c, std::vector<double> c_mu) {
  const int n = static_cast<int>(a.size());
  if (n < 1 || a[0] == 0.0) fail(ErrorKind::BadParameter, "flat projective form family requires a_1 != 0");
  c_mu.resize(n, 0.0);
  c_mu[0] = 0.0;
  return from_generic("example1_parallel", n, [a, c, c_mu](auto x) {
    using T = std::remove_const_t<typename decltype(x)::value_type>;
    const T A = 1.0 + inner<T>(a, x);
    const T b1 = (c + inner<T>(c_mu, x)) / (A * A);
    std::vector<T> out{b1};
    for (std::size_t mu = 1; mu < a.size(); ++mu) out.push_back(b1 * (a[mu] / a[0]) - (c_mu[mu] / a[0]) / A);
    return out;
  });
}

std::vector<double> OneForm::coefficients(std::span<const double> x) const {
  auto b = value_(x);
  for (double v : b)
    if (!std::isfinite(v)) fail(ErrorKind::NonFiniteValue, "one-form coefficient is not finite");
  return b;
}

TensorValue OneForm::coefficient_derivative(std::span<const double> x) const {
  auto layout = Layout::get(dim_, 0, 1, 0, 1);
  std::vector<Jet> xs;
  for (int i = 0; i < dim_; ++i) xs.push_back(Jet::variable(layout, i, x[i]));
  const auto b = jet_(xs);
  TensorValue out(dim_, {kDown, kDown});
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) {
      const Jet bi = b[i].layout() == layout ? b[i] : b[i].project(layout);
      out(i, j) = bi.partial({j});
      if (!std::isfinite(out(i, j))) fail(ErrorKind::NonFiniteValue, "one-form derivative is not finite");
    }
  return out;
}

ScalarField OneForm::beta() const {
  auto jet = jet_;
  auto value = value_;
  return ScalarField{[jet](std::span<const Jet> x, std::span<const Jet> y) {
                       const auto b = jet(x);
                       return dot<Jet>(std::span<const Jet>(b), y);
                     },
                     [value](std::span<const double> x, std::span<const double> y) {
                       const auto b = value(x);
                       return dot<double>(std::span<const double>(b), y);
                     }};
}

OneForm OneForm::scaled(double factor) const {
  auto jet = jet_;
  auto value = value_;
  return OneForm(
      name_, dim_,
      [jet, factor](std::span<const Jet> x) {
        auto b = jet(x);
        for (auto& c : b) c *= factor;
        return b;
      },
      [value, factor](std::span<const double> x) {
        auto b = value(x);
        for (auto& c : b) c *= factor;
        return b;
      });
}

}  // namespace finsler
