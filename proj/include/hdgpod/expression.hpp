#pragma once

#include <map>
#include <memory>
#include <stdexcept>
#include <string>

namespace hdgpod {

class ExpressionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Closed-form expression in x, y, z and t.
///
///   expr   := term (('+' | '-') term)*
///   term   := unary (('*' | '/') unary)*
///   unary  := ('+' | '-') unary | power
///   power  := atom ('^' unary)?
///   atom   := number | x | y | z | t | pi | e | name | func '(' expr ')' | '(' expr ')'
///   func   := sin | cos | tan | exp | log | sqrt | abs
///
/// Parsed once; evaluation is const and safe to call from several threads.
class Expression {
 public:
  Expression();
  explicit Expression(const std::string& source,
                      const std::map<std::string, double>& constants = {});

  [[nodiscard]] double operator()(double x, double y, double z, double t) const;
  [[nodiscard]] const std::string& source() const { return source_; }
  /// True if the expression mentions t.
  [[nodiscard]] bool time_dependent() const { return time_dependent_; }

  struct Node;

 private:
  std::string source_;
  std::shared_ptr<const Node> root_;
  bool time_dependent_ = false;
};

}  // namespace hdgpod
