#pragma once

#include <cmath>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "finsler/errors.hpp"
#include "finsler/jet.hpp"

namespace finsler {

class ParseError : public Error {
 public:
  ParseError(std::size_t position, std::vector<std::string> expected, const std::string& detail);

  // 0-based offset of the offending token in the source.
  std::size_t position() const { return position_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  std::size_t position_;
  std::vector<std::string> expected_;
};

enum class Function { Sqrt, Exp, Log, Sin, Cos, Abs };

// Parse tree of an arithmetic expression. Grammar, loosest binding first:
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?         right-associative
//   primary := number | name | name '(' expr ')' | '(' expr ')'
class Expression {
 public:
  enum class Kind { Number, Variable, Negate, Add, Subtract, Multiply, Divide, Power, Call };

  struct Node {
    Kind kind = Kind::Number;
    double number = 0.0;
    std::string name;  // variable name
    Function function = Function::Sqrt;
    int slot = -1;  // variable index after bind()
    std::shared_ptr<const Node> lhs, rhs;
  };

  Expression() = default;

  // Identifiers outside `variables` are rejected when the list is nonempty.
  static Expression parse(std::string_view src, const std::vector<std::string>& variables = {});

  // Fully parenthesized source that reparses to an identical tree.
  std::string print() const;
  bool operator==(const Expression& other) const;

  // Names of the variables, in order of first appearance.
  std::vector<std::string> variables() const;

  // Resolves variables against `names`; eval takes values in that order.
  Expression bind(const std::vector<std::string>& names) const;

  // T is double or Jet. Throws NonFiniteValue if any node evaluates to NaN or
  // infinity.
  template <class T>
  T eval(std::span<const T> values) const {
    if (!root_) fail(ErrorKind::ParseError, "empty expression");
    T out = eval_node(*root_, values);
    if constexpr (std::is_same_v<T, Jet>) {
      if (!out.all_finite()) fail(ErrorKind::NonFiniteValue, "expression derivative is not finite");
    }
    return out;
  }

  const std::shared_ptr<const Node>& root() const { return root_; }
  const std::string& source() const { return source_; }

 private:
  template <class T>
  static T constant_like(std::span<const T> values, double v) {
    if constexpr (std::is_same_v<T, Jet>) {
      if (values.empty()) fail(ErrorKind::ParseError, "jet evaluation needs at least one bound variable");
      return Jet(values[0].layout(), v);
    } else {
      return v;
    }
  }

  // Literal exponents, including negated literals.
  static bool constant_exponent(const Node& n, double& e) {
    if (n.kind == Kind::Number) {
      e = n.number;
      return true;
    }
    if (n.kind == Kind::Negate && n.lhs->kind == Kind::Number) {
      e = -n.lhs->number;
      return true;
    }
    return false;
  }

  template <class T>
  static T checked(T v) {
    if (!std::isfinite(value_of(v))) fail(ErrorKind::NonFiniteValue, "expression evaluated to NaN or infinity");
    return v;
  }

  template <class T>
  static T eval_node(const Node& n, std::span<const T> values) {
    using std::abs, std::cos, std::exp, std::log, std::pow, std::sin, std::sqrt;
    switch (n.kind) {
      case Kind::Number: return constant_like(values, n.number);
      case Kind::Variable:
        if (n.slot < 0 || n.slot >= static_cast<int>(values.size()))
          fail(ErrorKind::ParseError, "unbound variable '" + n.name + "'");
        return values[n.slot];
      case Kind::Negate: return checked<T>(-eval_node(*n.lhs, values));
      case Kind::Add: return checked<T>(eval_node(*n.lhs, values) + eval_node(*n.rhs, values));
      case Kind::Subtract: return checked<T>(eval_node(*n.lhs, values) - eval_node(*n.rhs, values));
      case Kind::Multiply: return checked<T>(eval_node(*n.lhs, values) * eval_node(*n.rhs, values));
      case Kind::Divide: return checked<T>(eval_node(*n.lhs, values) / eval_node(*n.rhs, values));
      case Kind::Power: {
        const T base = eval_node(*n.lhs, values);
        double e = 0.0;
        if (constant_exponent(*n.rhs, e)) {
          if (e == std::round(e) && std::abs(e) <= 64.0) {
            if constexpr (std::is_same_v<T, Jet>)
              return checked<T>(pow(base, static_cast<int>(e)));
            else
              return checked<T>(std::pow(base, e));
          }
          return checked<T>(pow(base, e));
        }
        return checked<T>(pow(base, eval_node(*n.rhs, values)));
      }
      case Kind::Call: {
        const T a = eval_node(*n.lhs, values);
        switch (n.function) {
          case Function::Sqrt: return checked<T>(sqrt(a));
          case Function::Exp: return checked<T>(exp(a));
          case Function::Log: return checked<T>(log(a));
          case Function::Sin: return checked<T>(sin(a));
          case Function::Cos: return checked<T>(cos(a));
          case Function::Abs: return checked<T>(abs(a));
        }
      }
    }
    fail(ErrorKind::ParseError, "malformed expression tree");
  }

  std::shared_ptr<const Node> root_;
  std::string source_;
};

const char* function_name(Function f);

}  // namespace finsler
