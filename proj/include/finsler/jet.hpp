#pragma once

#include <cstdint>
#include <initializer_list>
#include <memory>
#include <span>
#include <unordered_map>
#include <vector>

namespace finsler {

// Monomial set of a truncated Taylor expansion in nx "base" variables followed by
// ny "fiber" variables. A monomial is kept iff its base degree <= kx, its fiber
// degree <= ky and its total degree <= kt. Every such set is closed under
// truncated multiplication, which is what makes Jet arithmetic exact.
class Layout {
 public:
  static constexpr int kMaxVariables = 16;
  static constexpr int kMaxDegree = 15;

  // Layouts are interned; equal parameters return the same object.
  static std::shared_ptr<const Layout> get(int nx, int ny, int kx, int ky, int kt);

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  int nvars() const { return nx_ + ny_; }
  int kx() const { return kx_; }
  int ky() const { return ky_; }
  int kt() const { return kt_; }
  int size() const { return static_cast<int>(degree_.size()); }

  std::span<const std::uint8_t> exponents(int index) const {
    return {exponents_.data() + static_cast<std::size_t>(index) * nvars(),
            static_cast<std::size_t>(nvars())};
  }
  int degree(int index) const { return degree_[index]; }
  // -1 when the monomial is not part of this layout.
  int index_of(std::span<const std::uint8_t> exps) const;

  struct Product {
    int lhs;
    int rhs;
    int out;
  };
  const std::vector<Product>& products() const { return products_; }

  bool is_base_variable(int var) const { return var < nx_; }
  bool contains(const Layout& other) const;

  // Layout of d/dvar of a jet in this layout.
  std::shared_ptr<const Layout> derivative_layout(int var) const;
  // Largest layout contained in both.
  static std::shared_ptr<const Layout> meet(const Layout& a, const Layout& b);

  Layout(int nx, int ny, int kx, int ky, int kt);

 private:
  static std::uint64_t key(std::span<const std::uint8_t> exps);

  int nx_, ny_, kx_, ky_, kt_;
  std::vector<std::uint8_t> exponents_;
  std::vector<int> degree_;
  std::unordered_map<std::uint64_t, int> lookup_;
  std::vector<Product> products_;
};

using LayoutPtr = std::shared_ptr<const Layout>;

// Truncated multivariate Taylor polynomial around a point. Coefficient c_a of
// monomial a equals (d^a f)/a!. Arithmetic and the elementary functions below
// propagate all partial derivatives up to the layout's orders exactly (up to
// floating point rounding).
class Jet {
 public:
  Jet() = default;
  Jet(LayoutPtr layout, double value);

  static Jet variable(LayoutPtr layout, int var, double value);

  const LayoutPtr& layout() const { return layout_; }
  double value() const { return coeffs_.empty() ? 0.0 : coeffs_[0]; }
  std::span<const double> coefficients() const { return coeffs_; }
  std::span<double> coefficients() { return coeffs_; }

  // Partial derivative for a multiset of variable indices, e.g. {n, n+1} for
  // d^2/dy^0 dy^1. The multiset must be inside the layout.
  double partial(std::span<const int> vars) const;
  double partial(std::initializer_list<int> vars) const {
    return partial(std::span<const int>(vars.begin(), vars.size()));
  }

  Jet derivative(int var) const;
  Jet project(const LayoutPtr& target) const;
  bool all_finite() const;

  Jet& operator+=(const Jet& rhs);
  Jet& operator-=(const Jet& rhs);
  Jet& operator*=(const Jet& rhs);
  Jet& operator/=(const Jet& rhs);
  Jet& operator+=(double rhs);
  Jet& operator-=(double rhs);
  Jet& operator*=(double rhs);
  Jet& operator/=(double rhs);

  friend Jet operator-(const Jet& a);
  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator/(const Jet& a, const Jet& b);
  friend Jet operator+(Jet a, double b) { return a += b; }
  friend Jet operator+(double a, Jet b) { return b += a; }
  friend Jet operator-(Jet a, double b) { return a -= b; }
  friend Jet operator-(double a, const Jet& b);
  friend Jet operator*(Jet a, double b) { return a *= b; }
  friend Jet operator*(double a, Jet b) { return b *= a; }
  friend Jet operator/(Jet a, double b) { return a /= b; }
  friend Jet operator/(double a, const Jet& b);

 private:
  // Applies sum_k series[k] h^k where h = *this - value().
  Jet compose(std::span<const double> series) const;
  friend Jet sqrt(const Jet&);
  friend Jet exp(const Jet&);
  friend Jet log(const Jet&);
  friend Jet sin(const Jet&);
  friend Jet cos(const Jet&);
  friend Jet pow(const Jet&, double);
  friend Jet reciprocal(const Jet&);

  LayoutPtr layout_;
  std::vector<double> coeffs_;
};

Jet sqrt(const Jet& a);
Jet exp(const Jet& a);
Jet log(const Jet& a);
Jet sin(const Jet& a);
Jet cos(const Jet& a);
Jet abs(const Jet& a);
Jet pow(const Jet& a, double p);
Jet pow(const Jet& a, int p);
Jet pow(const Jet& a, const Jet& p);
Jet reciprocal(const Jet& a);

inline double value_of(double v) { return v; }
inline double value_of(const Jet& v) { return v.value(); }

}  // namespace finsler
