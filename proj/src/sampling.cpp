#include <cmath>
#include <numbers>
#include <random>

#include "finsler/geometry.hpp"

namespace finsler {

namespace {

// The engine's output sequence is fixed by the standard; the distributions are
// not, so the transforms below are written out.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    spare_ = radius * std::sin(2.0 * std::numbers::pi * u2);
    has_spare_ = true;
    return radius * std::cos(2.0 * std::numbers::pi * u2);
  }

  std::vector<double> unit_vector(int n) {
    std::vector<double> v(n);
    double norm = 0.0;
    while (!(norm > 1e-12)) {
      norm = 0.0;
      for (auto& c : v) {
        c = normal();
        norm += c * c;
      }
      norm = std::sqrt(norm);
    }
    for (auto& c : v) c /= norm;
    return v;
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace

std::vector<TangentSample> draw_samples(int dim, int count, std::uint64_t seed, double radius) {
  if (dim < 1) fail(ErrorKind::BadParameter, "draw_samples: dimension must be positive");
  Sampler s(seed);
  std::vector<TangentSample> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    auto x = s.unit_vector(dim);
    const double r = radius * std::pow(s.uniform(), 1.0 / dim);
    for (auto& c : x) c *= r;
    out.emplace_back(std::move(x), s.unit_vector(dim));
  }
  return out;
}

}  // namespace finsler
