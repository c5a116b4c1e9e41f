#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "finsler/calculus.hpp"
#include "finsler/tensor.hpp"

namespace finsler {

template <class T>
T dot(std::span<const T> u, std::span<const T> v) {
  T s = u[0] * v[0];
  for (std::size_t i = 1; i < u.size(); ++i) s += u[i] * v[i];
  return s;
}

// <a, v> for a constant vector a.
template <class T>
T inner(std::span<const double> a, std::span<const T> v) {
  T s = v[0] * a[0];
  for (std::size_t i = 1; i < v.size(); ++i) s += v[i] * a[i];
  return s;
}

// beta = b_i(x) y^i. The coefficients depend on the base point only, so
// fiber independence and 1-homogeneity hold by construction.
class OneForm {
 public:
  using JetCoefficients = std::function<std::vector<Jet>(std::span<const Jet>)>;
  using ValueCoefficients = std::function<std::vector<double>(std::span<const double>)>;

  OneForm(std::string name, int dim, JetCoefficients jet, ValueCoefficients value);

  // fn(std::span<const T> x) -> std::vector<T> for T = double and T = Jet.
  template <class Fn>
  static OneForm from_generic(std::string name, int dim, Fn fn) {
    return OneForm(
        std::move(name), dim, [fn](std::span<const Jet> x) -> std::vector<Jet> { return fn(x); },
        [fn](std::span<const double> x) -> std::vector<double> { return fn(x); });
  }

  static OneForm constant(std::vector<double> b);
  // b_i = x_i
  static OneForm position(int dim);
  // The parallel family of the projectively flat zero-curvature metric
  // F_a: b_1 = (c + c_mu x^mu) / (1 + <a,x>)^2,
  // b_mu = a_mu b_1 / a_1 - c_mu / (a_1 (1 + <a,x>)). Needs a_1 != 0.
  static OneForm flat_projective_family(std::vector<double> a, double c, std::vector<double> c_mu);

  const std::string& name() const { return name_; }
  int dim() const { return dim_; }

  std::vector<double> coefficients(std::span<const double> x) const;
  std::vector<Jet> coefficients(std::span<const Jet> x) const { return jet_(x); }
  // d_j b_i stored (i, j).
  TensorValue coefficient_derivative(std::span<const double> x) const;
  ScalarField beta() const;
  OneForm scaled(double factor) const;

 private:
  std::string name_;
  int dim_;
  JetCoefficients jet_;
  ValueCoefficients value_;
};

}  // namespace finsler
