#include "finsler/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace finsler {

const char* to_string(LoweringConvention c) {
  switch (c) {
    case LoweringConvention::None: return "none";
    case LoweringConvention::MetricLowering: return "metric";
    case LoweringConvention::EuclideanLowering: return "euclidean";
  }
  return "none";
}

TensorValue::TensorValue(int dim, std::vector<IndexRole> roles, std::vector<SymmetryTag> symmetries,
                         LoweringConvention lowering)
    : dim_(dim), roles_(std::move(roles)), symmetries_(std::move(symmetries)), lowering_(lowering) {
  std::size_t size = 1;
  for (std::size_t i = 0; i < roles_.size(); ++i) size *= static_cast<std::size_t>(dim_);
  data_.assign(size, 0.0);
}

std::size_t TensorValue::offset(std::initializer_list<int> idx) const {
  if (static_cast<int>(idx.size()) != rank()) throw std::out_of_range("tensor: wrong number of indices");
  std::size_t off = 0;
  for (int i : idx) {
    if (i < 0 || i >= dim_) throw std::out_of_range("tensor: index out of range");
    off = off * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(i);
  }
  return off;
}

double TensorValue::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

double TensorValue::symmetry_defect(const SymmetryTag& tag) const {
  const int r = rank();
  const double sign = tag.kind == SymmetryTag::Kind::Symmetric ? -1.0 : 1.0;
  std::vector<int> idx(r, 0);
  std::vector<std::size_t> stride(r, 1);
  for (int s = r - 2; s >= 0; --s) stride[s] = stride[s + 1] * static_cast<std::size_t>(dim_);
  double worst = 0.0;
  for (std::size_t flat = 0; flat < data_.size(); ++flat) {
    std::size_t rem = flat;
    for (int s = 0; s < r; ++s) {
      idx[s] = static_cast<int>(rem / stride[s]);
      rem %= stride[s];
    }
    std::swap(idx[tag.first], idx[tag.second]);
    std::size_t other = 0;
    for (int s = 0; s < r; ++s) other += static_cast<std::size_t>(idx[s]) * stride[s];
    worst = std::max(worst, std::abs(data_[flat] + sign * data_[other]));
  }
  return worst;
}

double TensorValue::max_symmetry_defect() const {
  double worst = 0.0;
  for (const auto& t : symmetries_) worst = std::max(worst, symmetry_defect(t));
  return worst;
}

TensorValue TensorValue::contract(int slot, std::span<const double> v) const {
  if (slot < 0 || slot >= rank() || static_cast<int>(v.size()) != dim_) throw std::out_of_range("tensor contract");
  std::vector<IndexRole> roles = roles_;
  roles.erase(roles.begin() + slot);
  TensorValue out(dim_, std::move(roles), {}, lowering_);
  const int r = rank();
  std::vector<std::size_t> stride(r, 1);
  for (int s = r - 2; s >= 0; --s) stride[s] = stride[s + 1] * static_cast<std::size_t>(dim_);
  for (std::size_t flat = 0; flat < data_.size(); ++flat) {
    std::size_t rem = flat, out_flat = 0;
    int k = 0;
    for (int s = 0; s < r; ++s) {
      const auto i = rem / stride[s];
      rem %= stride[s];
      if (s == slot)
        k = static_cast<int>(i);
      else
        out_flat = out_flat * static_cast<std::size_t>(dim_) + i;
    }
    out.data_[out_flat] += data_[flat] * v[k];
  }
  return out;
}

double max_abs_difference(const TensorValue& a, const TensorValue& b) {
  if (a.components().size() != b.components().size()) throw std::invalid_argument("tensor shapes differ");
  double m = 0.0;
  for (std::size_t i = 0; i < a.components().size(); ++i)
    m = std::max(m, std::abs(a.components()[i] - b.components()[i]));
  return m;
}

}  // namespace finsler
