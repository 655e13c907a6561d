#pragma once

#include "dshock/common.hpp"

#include <memory>
#include <string>

namespace dshock {

// Small arithmetic expression language used for level-set fronts and radial
// fields in scenario files.
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?
//   primary := number | name | name '(' expr ')' | '(' expr ')' | '|' expr '|'
//
// Names: t, r (= |x|), x (= x1 in scalar context), x1..x9, y (= x2), z (= x3), pi.
// Functions: sqrt, abs, exp, log, sin, cos, tanh.
// '|x|' is the Euclidean norm of the position; '|e|' for any other e is abs(e).
class Expression {
 public:
  explicit Expression(const std::string& source);

  double operator()(const Vec& x, double t) const;
  // Radial/scalar evaluation: r = |x| = x1 = s.
  double eval_scalar(double s, double t) const;

  const std::string& source() const { return source_; }

  struct Node;

 private:
  std::string source_;
  std::shared_ptr<const Node> root_;
};

}  // namespace dshock
