#include "hdgpod/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <vector>

namespace hdgpod {

struct Expression::Node {
  enum class Kind { Constant, X, Y, Z, T, Neg, Add, Sub, Mul, Div, Pow, Call } kind;
  double value = 0.0;
  double (*fn)(double) = nullptr;
  std::shared_ptr<const Node> a, b;

  double eval(const double* v) const {
    switch (kind) {
      case Kind::Constant: return value;
      case Kind::X: return v[0];
      case Kind::Y: return v[1];
      case Kind::Z: return v[2];
      case Kind::T: return v[3];
      case Kind::Neg: return -a->eval(v);
      case Kind::Add: return a->eval(v) + b->eval(v);
      case Kind::Sub: return a->eval(v) - b->eval(v);
      case Kind::Mul: return a->eval(v) * b->eval(v);
      case Kind::Div: return a->eval(v) / b->eval(v);
      case Kind::Pow: return std::pow(a->eval(v), b->eval(v));
      case Kind::Call: return fn(a->eval(v));
    }
    return 0.0;
  }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Kind = Expression::Node::Kind;

NodePtr make(Kind k, NodePtr a = {}, NodePtr b = {}) {
  auto n = std::make_shared<Expression::Node>();
  n->kind = k;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

NodePtr constant(double v) {
  auto n = std::make_shared<Expression::Node>();
  n->kind = Kind::Constant;
  n->value = v;
  return n;
}

double fn_sin(double v) { return std::sin(v); }
double fn_cos(double v) { return std::cos(v); }
double fn_tan(double v) { return std::tan(v); }
double fn_exp(double v) { return std::exp(v); }
double fn_log(double v) { return std::log(v); }
double fn_sqrt(double v) { return std::sqrt(v); }
double fn_abs(double v) { return std::abs(v); }

class Parser {
 public:
  Parser(const std::string& s, const std::map<std::string, double>& constants)
      : s_(s), constants_(constants) {}

  NodePtr parse() {
    NodePtr n = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return n;
  }

  bool uses_t = false;

 private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ExpressionError("expression '" + s_ + "' at position " + std::to_string(pos_) + ": " + msg);
  }

  NodePtr expr() {
    NodePtr n = term();
    for (;;) {
      if (accept('+')) n = make(Kind::Add, n, term());
      else if (accept('-')) n = make(Kind::Sub, n, term());
      else return n;
    }
  }
  NodePtr term() {
    NodePtr n = unary();
    for (;;) {
      if (accept('*')) n = make(Kind::Mul, n, unary());
      else if (accept('/')) n = make(Kind::Div, n, unary());
      else return n;
    }
  }
  NodePtr unary() {
    if (accept('-')) return make(Kind::Neg, unary());
    if (accept('+')) return unary();
    return power();
  }
  NodePtr power() {
    NodePtr n = atom();
    if (accept('^')) n = make(Kind::Pow, n, unary());
    return n;
  }
  NodePtr atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (accept('(')) {
      NodePtr n = expr();
      if (!accept(')')) fail("expected ')'");
      return n;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = s_.c_str() + pos_;
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end == begin) fail("bad number");
      pos_ += static_cast<std::size_t>(end - begin);
      return constant(v);
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      const std::string id = s_.substr(start, pos_ - start);
      if (id == "x") return make(Kind::X);
      if (id == "y") return make(Kind::Y);
      if (id == "z") return make(Kind::Z);
      if (id == "t") {
        uses_t = true;
        return make(Kind::T);
      }
      if (id == "pi") return constant(M_PI);
      if (id == "e") return constant(M_E);
      if (const auto it = constants_.find(id); it != constants_.end()) return constant(it->second);
      double (*fn)(double) = nullptr;
      if (id == "sin") fn = fn_sin;
      else if (id == "cos") fn = fn_cos;
      else if (id == "tan") fn = fn_tan;
      else if (id == "exp") fn = fn_exp;
      else if (id == "log") fn = fn_log;
      else if (id == "sqrt") fn = fn_sqrt;
      else if (id == "abs") fn = fn_abs;
      else fail("unknown identifier '" + id + "'");
      if (!accept('(')) fail("expected '(' after " + id);
      auto n = std::make_shared<Expression::Node>();
      n->kind = Kind::Call;
      n->fn = fn;
      n->a = expr();
      if (!accept(')')) fail("expected ')'");
      return n;
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  const std::string& s_;
  const std::map<std::string, double>& constants_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression::Expression() : Expression("0", {}) {}

Expression::Expression(const std::string& source, const std::map<std::string, double>& constants)
    : source_(source) {
  Parser p(source_, constants);
  root_ = p.parse();
  time_dependent_ = p.uses_t;
}

double Expression::operator()(double x, double y, double z, double t) const {
  const double v[4] = {x, y, z, t};
  return root_->eval(v);
}

}  // namespace hdgpod
