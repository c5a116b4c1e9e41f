#pragma once

#include <array>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace finsler {

enum class Variance { Up, Down };
enum class Slot { Coordinate, Fiber };

struct IndexRole {
  Variance variance;
  Slot slot;
};

struct SymmetryTag {
  enum class Kind { Symmetric, Antisymmetric };
  Kind kind;
  int first;
  int second;
};

enum class LoweringConvention { None, MetricLowering, EuclideanLowering };

const char* to_string(LoweringConvention c);

// Dense n^rank array with index metadata. Components are stored row-major in the
// order of `roles`.
class TensorValue {
 public:
  TensorValue() = default;
  TensorValue(int dim, std::vector<IndexRole> roles, std::vector<SymmetryTag> symmetries = {},
              LoweringConvention lowering = LoweringConvention::None);

  int dim() const { return dim_; }
  int rank() const { return static_cast<int>(roles_.size()); }
  const std::vector<IndexRole>& roles() const { return roles_; }
  const std::vector<SymmetryTag>& symmetries() const { return symmetries_; }
  LoweringConvention lowering() const { return lowering_; }
  void set_lowering(LoweringConvention c) { lowering_ = c; }

  std::span<const double> components() const { return data_; }
  std::span<double> components() { return data_; }

  template <class... I>
  double& operator()(I... idx) {
    return data_[offset({static_cast<int>(idx)...})];
  }
  template <class... I>
  double operator()(I... idx) const {
    return data_[offset({static_cast<int>(idx)...})];
  }

  double max_abs() const;
  // Largest |T(..a..b..) -/+ T(..b..a..)| for the tag, i.e. 0 when it holds.
  double symmetry_defect(const SymmetryTag& tag) const;
  double max_symmetry_defect() const;
  // Contracts index `slot` with v (sum over that index).
  TensorValue contract(int slot, std::span<const double> v) const;

  std::string note;

 private:
  std::size_t offset(std::initializer_list<int> idx) const;

  int dim_ = 0;
  std::vector<IndexRole> roles_;
  std::vector<SymmetryTag> symmetries_;
  LoweringConvention lowering_ = LoweringConvention::None;
  std::vector<double> data_;
};

double max_abs_difference(const TensorValue& a, const TensorValue& b);

// Shorthands for the index roles used throughout.
inline constexpr IndexRole kUp{Variance::Up, Slot::Coordinate};
inline constexpr IndexRole kDown{Variance::Down, Slot::Coordinate};
inline constexpr IndexRole kFiberDown{Variance::Down, Slot::Fiber};

inline SymmetryTag symmetric(int a, int b) { return {SymmetryTag::Kind::Symmetric, a, b}; }
inline SymmetryTag antisymmetric(int a, int b) { return {SymmetryTag::Kind::Antisymmetric, a, b}; }

}  // namespace finsler
