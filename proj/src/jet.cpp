#include "finsler/jet.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace finsler {

namespace {

std::mutex& registry_mutex() {
  static std::mutex m;
  return m;
}

std::map<std::tuple<int, int, int, int, int>, LayoutPtr>& registry() {
  static std::map<std::tuple<int, int, int, int, int>, LayoutPtr> r;
  return r;
}

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace

std::uint64_t Layout::key(std::span<const std::uint8_t> exps) {
  std::uint64_t k = 0;
  for (std::size_t i = 0; i < exps.size(); ++i) k |= static_cast<std::uint64_t>(exps[i]) << (4 * i);
  return k;
}

Layout::Layout(int nx, int ny, int kx, int ky, int kt) : nx_(nx), ny_(ny), kx_(kx), ky_(ky), kt_(kt) {
  const int nv = nx + ny;
  // Graded enumeration: all monomials of total degree d, for d = 0..kt.
  std::vector<std::uint8_t> cur(nv, 0);
  for (int d = 0; d <= kt; ++d) {
    // Recursive fill of cur with total degree d.
    auto rec = [&](auto&& self, int var, int remaining, int xdeg, int ydeg) -> void {
      if (var == nv) {
        if (remaining != 0) return;
        exponents_.insert(exponents_.end(), cur.begin(), cur.end());
        degree_.push_back(d);
        return;
      }
      const bool base = var < nx;
      const int cap = base ? kx - xdeg : ky - ydeg;
      for (int e = std::min(remaining, cap); e >= 0; --e) {
        cur[var] = static_cast<std::uint8_t>(e);
        self(self, var + 1, remaining - e, base ? xdeg + e : xdeg, base ? ydeg : ydeg + e);
      }
      cur[var] = 0;
    };
    rec(rec, 0, d, 0, 0);
  }
  for (int i = 0; i < size(); ++i) lookup_.emplace(key(exponents(i)), i);

  std::vector<std::uint8_t> sum(nv);
  for (int a = 0; a < size(); ++a) {
    const auto ea = exponents(a);
    for (int b = 0; b < size(); ++b) {
      if (degree_[a] + degree_[b] > kt) continue;
      const auto eb = exponents(b);
      for (int v = 0; v < nv; ++v) sum[v] = static_cast<std::uint8_t>(ea[v] + eb[v]);
      const int r = index_of(sum);
      if (r >= 0) products_.push_back({a, b, r});
    }
  }
}

LayoutPtr Layout::get(int nx, int ny, int kx, int ky, int kt) {
  if (nx < 0 || ny < 0 || nx + ny > kMaxVariables)
    throw std::invalid_argument("jet layout: unsupported number of variables");
  kx = std::clamp(kx, 0, kMaxDegree);
  ky = std::clamp(ky, 0, kMaxDegree);
  kt = std::clamp(kt, 0, kx + ky);
  if (nx == 0) kx = 0;
  if (ny == 0) ky = 0;
  kt = std::min(kt, kx + ky);
  const auto k = std::make_tuple(nx, ny, kx, ky, kt);
  std::lock_guard lock(registry_mutex());
  auto& reg = registry();
  auto it = reg.find(k);
  if (it != reg.end()) return it->second;
  auto layout = std::make_shared<const Layout>(nx, ny, kx, ky, kt);
  reg.emplace(k, layout);
  return layout;
}

int Layout::index_of(std::span<const std::uint8_t> exps) const {
  int xd = 0, yd = 0;
  for (int v = 0; v < nvars(); ++v) {
    if (exps[v] > kMaxDegree) return -1;
    (v < nx_ ? xd : yd) += exps[v];
  }
  if (xd > kx_ || yd > ky_ || xd + yd > kt_) return -1;
  auto it = lookup_.find(key(exps));
  return it == lookup_.end() ? -1 : it->second;
}

bool Layout::contains(const Layout& other) const {
  return nx_ == other.nx_ && ny_ == other.ny_ && kx_ >= other.kx_ && ky_ >= other.ky_ && kt_ >= other.kt_;
}

LayoutPtr Layout::derivative_layout(int var) const {
  if (var < 0 || var >= nvars()) throw std::out_of_range("jet derivative: variable index");
  if (kt_ == 0 || (is_base_variable(var) ? kx_ : ky_) == 0)
    throw std::logic_error("jet derivative: differentiation order exhausted");
  return is_base_variable(var) ? get(nx_, ny_, kx_ - 1, ky_, kt_ - 1) : get(nx_, ny_, kx_, ky_ - 1, kt_ - 1);
}

LayoutPtr Layout::meet(const Layout& a, const Layout& b) {
  if (a.nx_ != b.nx_ || a.ny_ != b.ny_) throw std::invalid_argument("jet: mismatched variable sets");
  return get(a.nx_, a.ny_, std::min(a.kx_, b.kx_), std::min(a.ky_, b.ky_), std::min(a.kt_, b.kt_));
}

Jet::Jet(LayoutPtr layout, double value) : layout_(std::move(layout)) {
  coeffs_.assign(static_cast<std::size_t>(layout_->size()), 0.0);
  coeffs_[0] = value;
}

Jet Jet::variable(LayoutPtr layout, int var, double value) {
  Jet j(layout, value);
  if (layout->kt() == 0) return j;
  std::vector<std::uint8_t> e(layout->nvars(), 0);
  e[var] = 1;
  const int idx = layout->index_of(e);
  if (idx >= 0) j.coeffs_[idx] = 1.0;
  return j;
}

double Jet::partial(std::span<const int> vars) const {
  std::vector<std::uint8_t> e(layout_->nvars(), 0);
  for (int v : vars) {
    if (v < 0 || v >= layout_->nvars()) throw std::out_of_range("jet partial: variable index");
    ++e[v];
  }
  const int idx = layout_->index_of(e);
  if (idx < 0) throw std::out_of_range("jet partial: order outside layout");
  double scale = 1.0;
  for (auto k : e) scale *= factorial(k);
  return coeffs_[idx] * scale;
}

Jet Jet::derivative(int var) const {
  auto target = layout_->derivative_layout(var);
  Jet out(target, 0.0);
  std::vector<std::uint8_t> e(layout_->nvars());
  for (int i = 0; i < target->size(); ++i) {
    const auto t = target->exponents(i);
    std::copy(t.begin(), t.end(), e.begin());
    ++e[var];
    const int src = layout_->index_of(e);
    out.coeffs_[i] = src < 0 ? 0.0 : e[var] * coeffs_[src];
  }
  return out;
}

Jet Jet::project(const LayoutPtr& target) const {
  if (target == layout_) return *this;
  if (!layout_->contains(*target)) throw std::invalid_argument("jet project: target not contained");
  Jet out(target, 0.0);
  for (int i = 0; i < target->size(); ++i) out.coeffs_[i] = coeffs_[layout_->index_of(target->exponents(i))];
  return out;
}

bool Jet::all_finite() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](double c) { return std::isfinite(c); });
}

Jet& Jet::operator+=(const Jet& rhs) {
  if (rhs.layout_ == layout_) {
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += rhs.coeffs_[i];
    return *this;
  }
  auto m = Layout::meet(*layout_, *rhs.layout_);
  *this = project(m);
  const Jet r = rhs.project(m);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += r.coeffs_[i];
  return *this;
}

Jet& Jet::operator-=(const Jet& rhs) {
  if (rhs.layout_ == layout_) {
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= rhs.coeffs_[i];
    return *this;
  }
  auto m = Layout::meet(*layout_, *rhs.layout_);
  *this = project(m);
  const Jet r = rhs.project(m);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= r.coeffs_[i];
  return *this;
}

Jet& Jet::operator*=(const Jet& rhs) { return *this = *this * rhs; }
Jet& Jet::operator/=(const Jet& rhs) { return *this = *this / rhs; }

Jet& Jet::operator+=(double rhs) {
  coeffs_[0] += rhs;
  return *this;
}
Jet& Jet::operator-=(double rhs) {
  coeffs_[0] -= rhs;
  return *this;
}
Jet& Jet::operator*=(double rhs) {
  for (auto& c : coeffs_) c *= rhs;
  return *this;
}
Jet& Jet::operator/=(double rhs) {
  for (auto& c : coeffs_) c /= rhs;
  return *this;
}

Jet operator-(const Jet& a) {
  Jet r = a;
  for (auto& c : r.coeffs_) c = -c;
  return r;
}

Jet operator*(const Jet& a, const Jet& b) {
  if (a.layout_ != b.layout_) {
    auto m = Layout::meet(*a.layout_, *b.layout_);
    return a.project(m) * b.project(m);
  }
  Jet out(a.layout_, 0.0);
  const double* pa = a.coeffs_.data();
  const double* pb = b.coeffs_.data();
  double* po = out.coeffs_.data();
  for (const auto& p : a.layout_->products()) po[p.out] += pa[p.lhs] * pb[p.rhs];
  return out;
}

Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }

Jet operator-(double a, const Jet& b) {
  Jet r = -b;
  r.coeffs_[0] += a;
  return r;
}

Jet operator/(double a, const Jet& b) { return reciprocal(b) * a; }

Jet Jet::compose(std::span<const double> series) const {
  Jet h = *this;
  h.coeffs_[0] = 0.0;
  const int k_max = static_cast<int>(series.size()) - 1;
  Jet result(layout_, series[k_max]);
  for (int k = k_max - 1; k >= 0; --k) {
    result = result * h;
    result.coeffs_[0] += series[k];
  }
  return result;
}

namespace {
int series_length(const Jet& a) { return std::min(a.layout()->kt(), a.layout()->kx() + a.layout()->ky()) + 1; }
}  // namespace

Jet reciprocal(const Jet& a) {
  const double a0 = a.value();
  std::vector<double> s(series_length(a));
  double t = 1.0 / a0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    s[k] = t;
    t *= -1.0 / a0;
  }
  return a.compose(s);
}

Jet pow(const Jet& a, double p) {
  const double a0 = a.value();
  std::vector<double> s(series_length(a));
  double binom = 1.0;
  const double base = std::pow(a0, p);
  double inv = 1.0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    s[k] = base * binom * inv;
    binom *= (p - static_cast<double>(k)) / static_cast<double>(k + 1);
    inv /= a0;
  }
  return a.compose(s);
}

Jet sqrt(const Jet& a) {
  const double a0 = a.value();
  std::vector<double> s(series_length(a));
  double binom = 1.0;
  const double base = std::sqrt(a0);
  double inv = 1.0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    s[k] = base * binom * inv;
    binom *= (0.5 - static_cast<double>(k)) / static_cast<double>(k + 1);
    inv /= a0;
  }
  return a.compose(s);
}

Jet exp(const Jet& a) {
  std::vector<double> s(series_length(a));
  const double e = std::exp(a.value());
  for (std::size_t k = 0; k < s.size(); ++k) s[k] = e / factorial(static_cast<int>(k));
  return a.compose(s);
}

Jet log(const Jet& a) {
  const double a0 = a.value();
  std::vector<double> s(series_length(a));
  s[0] = std::log(a0);
  double t = 1.0;
  for (std::size_t k = 1; k < s.size(); ++k) {
    t /= a0;
    s[k] = ((k % 2 == 1) ? 1.0 : -1.0) * t / static_cast<double>(k);
  }
  return a.compose(s);
}

Jet sin(const Jet& a) {
  const double sv = std::sin(a.value()), cv = std::cos(a.value());
  const double cycle[4] = {sv, cv, -sv, -cv};
  std::vector<double> s(series_length(a));
  for (std::size_t k = 0; k < s.size(); ++k) s[k] = cycle[k % 4] / factorial(static_cast<int>(k));
  return a.compose(s);
}

Jet cos(const Jet& a) {
  const double sv = std::sin(a.value()), cv = std::cos(a.value());
  const double cycle[4] = {cv, -sv, -cv, sv};
  std::vector<double> s(series_length(a));
  for (std::size_t k = 0; k < s.size(); ++k) s[k] = cycle[k % 4] / factorial(static_cast<int>(k));
  return a.compose(s);
}

Jet abs(const Jet& a) { return a.value() < 0.0 ? -a : a; }

Jet pow(const Jet& a, int p) {
  if (p < 0) return reciprocal(pow(a, -p));
  Jet result(a.layout(), 1.0);
  Jet base = a;
  while (p > 0) {
    if (p & 1) result = result * base;
    p >>= 1;
    if (p > 0) base = base * base;
  }
  return result;
}

Jet pow(const Jet& a, const Jet& p) { return exp(p * log(a)); }

}  // namespace finsler
