#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "finsler/errors.hpp"
#include "finsler/jet.hpp"

namespace finsler {

// A point (x, y) of the slit tangent bundle.
class TangentSample {
 public:
  TangentSample(std::vector<double> x, std::vector<double> y);

  int dim() const { return static_cast<int>(x_.size()); }
  const std::vector<double>& x() const { return x_; }
  const std::vector<double>& y() const { return y_; }

 private:
  std::vector<double> x_;
  std::vector<double> y_;
};

// Highest x- and y-derivative orders of a jet. total < 0 means kx + ky.
struct JetOrder {
  int kx = 0;
  int ky = 0;
  int total = -1;

  static constexpr int kMaxX = 2;
  static constexpr int kMaxY = 5;

  int total_order() const { return total < 0 ? kx + ky : total; }
};

enum class Scheme { Taylor, FiniteDifference };

// Value and mixed partials of a scalar field at one sample; variable k < n is
// x^k and variable n + k is y^k.
using ScalarJet = Jet;

// Scalar field on the slit tangent bundle with a Taylor-mode and a plain double
// evaluation route. Both must compute the same function.
struct ScalarField {
  std::function<Jet(std::span<const Jet>, std::span<const Jet>)> jet;
  std::function<double(std::span<const double>, std::span<const double>)> value;

  // fn must be callable as fn(std::span<const T> x, std::span<const T> y) for
  // T = double and T = Jet.
  template <class Fn>
  static ScalarField from_generic(Fn fn) {
    return ScalarField{
        [fn](std::span<const Jet> x, std::span<const Jet> y) -> Jet { return fn(x, y); },
        [fn](std::span<const double> x, std::span<const double> y) -> double { return fn(x, y); }};
  }

  // Jet-only field; plain values go through an order-zero layout.
  static ScalarField from_jet(std::function<Jet(std::span<const Jet>, std::span<const Jet>)> fn);
};

// Vector-valued field (spray coefficients, covector components). Only the Taylor
// route exists; plain values come from an order-zero layout.
using VectorField = std::function<std::vector<Jet>(std::span<const Jet>, std::span<const Jet>)>;

// Seeds x^k and y^k as independent variables of `layout` around `at`.
std::pair<std::vector<Jet>, std::vector<Jet>> seed_variables(const LayoutPtr& layout, const TangentSample& at);

ScalarJet eval_jet(const ScalarField& f, const TangentSample& at, JetOrder order, Scheme scheme = Scheme::Taylor);

std::vector<Jet> eval_vector_jet(const VectorField& f, const TangentSample& at, JetOrder order);
std::vector<double> eval_vector(const VectorField& f, const TangentSample& at);

double eval_value(const ScalarField& f, const TangentSample& at);

// max over lambda in {0.5, 2, 3.7} of |f(x, lambda y) - lambda^degree f(x, y)| / (1 + |f(x, y)|)
double homogeneity_check(const ScalarField& f, const TangentSample& at, int degree);
double homogeneity_check(const VectorField& f, const TangentSample& at, int degree);

// Central-difference estimate of one mixed partial of f, refined by Richardson
// extrapolation. `exponents` has length 2n (x block then y block).
double finite_difference_partial(const ScalarField& f, const TangentSample& at, std::span<const int> exponents);

}  // namespace finsler
