#include "finsler/expression.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <functional>

namespace finsler {

namespace {

using Node = Expression::Node;
using NodePtr = std::shared_ptr<const Node>;

struct FunctionEntry {
  const char* name;
  Function fn;
};

constexpr FunctionEntry kFunctions[] = {{"sqrt", Function::Sqrt}, {"exp", Function::Exp}, {"log", Function::Log},
                                        {"sin", Function::Sin},   {"cos", Function::Cos}, {"abs", Function::Abs}};

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? ", " : "") + items[i];
  return out;
}

NodePtr make(Expression::Kind kind, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

class Parser {
 public:
  Parser(std::string_view src, const std::vector<std::string>& vars) : src_(src), vars_(vars) {}

  NodePtr parse() {
    skip_space();
    if (pos_ >= src_.size()) error({"number", "identifier", "'('", "'-'"}, "empty expression");
    NodePtr e = expr();
    skip_space();
    if (pos_ < src_.size()) error({"operator", "end of input"}, "unexpected trailing input");
    return e;
  }

 private:
  [[noreturn]] void error(std::vector<std::string> expected, const std::string& detail) {
    throw ParseError(pos_, std::move(expected), detail);
  }

  void skip_space() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    NodePtr lhs = term();
    while (true) {
      if (accept('+'))
        lhs = make(Expression::Kind::Add, lhs, term());
      else if (accept('-'))
        lhs = make(Expression::Kind::Subtract, lhs, term());
      else
        return lhs;
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    while (true) {
      if (accept('*'))
        lhs = make(Expression::Kind::Multiply, lhs, unary());
      else if (accept('/'))
        lhs = make(Expression::Kind::Divide, lhs, unary());
      else
        return lhs;
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(Expression::Kind::Negate, unary());
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return make(Expression::Kind::Power, base, unary());
    return base;
  }

  NodePtr primary() {
    skip_space();
    const std::vector<std::string> operand{"number", "identifier", "'('", "'-'"};
    if (pos_ >= src_.size()) error(operand, "unexpected end of input");
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = expr();
      if (!accept(')')) error({"')'"}, "unbalanced parenthesis");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    error(operand, std::string("unexpected character '") + c + "'");
  }

  NodePtr number() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.')) ++pos_;
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < src_.size() && (src_[p] == '+' || src_[p] == '-')) ++p;
      if (p < src_.size() && std::isdigit(static_cast<unsigned char>(src_[p]))) {
        pos_ = p;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      }
    }
    double v = 0.0;
    const auto res = std::from_chars(src_.data() + start, src_.data() + pos_, v);
    if (res.ec != std::errc() || res.ptr != src_.data() + pos_) {
      pos_ = start;
      error({"number"}, "malformed number");
    }
    auto n = std::make_shared<Node>();
    n->kind = Expression::Kind::Number;
    n->number = v;
    return n;
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) ++pos_;
    const std::string name(src_.substr(start, pos_ - start));
    skip_space();
    if (pos_ < src_.size() && src_[pos_] == '(') {
      const auto* f = std::find_if(std::begin(kFunctions), std::end(kFunctions),
                                   [&](const FunctionEntry& e) { return name == e.name; });
      if (f == std::end(kFunctions)) {
        pos_ = start;
        std::vector<std::string> names;
        for (const auto& e : kFunctions) names.emplace_back(e.name);
        error(names, "unknown function '" + name + "'");
      }
      ++pos_;
      auto n = std::make_shared<Node>();
      n->kind = Expression::Kind::Call;
      n->function = f->fn;
      n->lhs = expr();
      if (!accept(')')) error({"')'"}, "unbalanced parenthesis");
      return n;
    }
    if (!vars_.empty() && std::find(vars_.begin(), vars_.end(), name) == vars_.end()) {
      pos_ = start;
      error(vars_, "unknown variable '" + name + "'");
    }
    auto n = std::make_shared<Node>();
    n->kind = Expression::Kind::Variable;
    n->name = name;
    return n;
  }

  std::string_view src_;
  const std::vector<std::string>& vars_;
  std::size_t pos_ = 0;
};

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void print_node(const Node& n, std::string& out) {
  using K = Expression::Kind;
  auto binary = [&](const char* op) {
    out += '(';
    print_node(*n.lhs, out);
    out += op;
    print_node(*n.rhs, out);
    out += ')';
  };
  switch (n.kind) {
    case K::Number: out += format_number(n.number); return;
    case K::Variable: out += n.name; return;
    case K::Negate:
      out += "(-";
      print_node(*n.lhs, out);
      out += ')';
      return;
    case K::Add: binary(" + "); return;
    case K::Subtract: binary(" - "); return;
    case K::Multiply: binary(" * "); return;
    case K::Divide: binary(" / "); return;
    case K::Power: binary("^"); return;
    case K::Call:
      out += function_name(n.function);
      out += '(';
      print_node(*n.lhs, out);
      out += ')';
      return;
  }
}

bool same_tree(const Node& a, const Node& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Expression::Kind::Number: return a.number == b.number || (std::isnan(a.number) && std::isnan(b.number));
    case Expression::Kind::Variable: return a.name == b.name;
    case Expression::Kind::Call: return a.function == b.function && same_tree(*a.lhs, *b.lhs);
    case Expression::Kind::Negate: return same_tree(*a.lhs, *b.lhs);
    default: return same_tree(*a.lhs, *b.lhs) && same_tree(*a.rhs, *b.rhs);
  }
}

void collect_variables(const Node& n, std::vector<std::string>& out) {
  if (n.kind == Expression::Kind::Variable && std::find(out.begin(), out.end(), n.name) == out.end())
    out.push_back(n.name);
  if (n.lhs) collect_variables(*n.lhs, out);
  if (n.rhs) collect_variables(*n.rhs, out);
}

NodePtr bind_node(const NodePtr& n, const std::vector<std::string>& names) {
  auto copy = std::make_shared<Node>(*n);
  if (n->kind == Expression::Kind::Variable) {
    const auto it = std::find(names.begin(), names.end(), n->name);
    if (it == names.end()) fail(ErrorKind::ParseError, "variable '" + n->name + "' is not one of: " + join(names));
    copy->slot = static_cast<int>(it - names.begin());
  }
  if (n->lhs) copy->lhs = bind_node(n->lhs, names);
  if (n->rhs) copy->rhs = bind_node(n->rhs, names);
  return copy;
}

}  // namespace

ParseError::ParseError(std::size_t position, std::vector<std::string> expected, const std::string& detail)
    : Error(ErrorKind::ParseError,
            "parse error at position " + std::to_string(position) + ": " + detail + " (expected " + join(expected) + ")"),
      position_(position),
      expected_(std::move(expected)) {}

const char* function_name(Function f) {
  for (const auto& e : kFunctions)
    if (e.fn == f) return e.name;
  return "?";
}

Expression Expression::parse(std::string_view src, const std::vector<std::string>& variables) {
  Expression e;
  e.root_ = Parser(src, variables).parse();
  e.source_ = std::string(src);
  return e;
}

std::string Expression::print() const {
  std::string out;
  if (root_) print_node(*root_, out);
  return out;
}

bool Expression::operator==(const Expression& other) const {
  if (!root_ || !other.root_) return !root_ && !other.root_;
  return same_tree(*root_, *other.root_);
}

std::vector<std::string> Expression::variables() const {
  std::vector<std::string> out;
  if (root_) collect_variables(*root_, out);
  return out;
}

Expression Expression::bind(const std::vector<std::string>& names) const {
  Expression e = *this;
  if (root_) e.root_ = bind_node(root_, names);
  return e;
}

}  // namespace finsler
