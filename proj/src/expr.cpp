#include "dshock/expr.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <vector>

namespace dshock {

struct Expression::Node {
  enum class Op { constant, var_t, var_r, var_x, add, sub, mul, div, pow, neg, call } op;
  double value = 0.0;
  int index = 0;  // coordinate index for var_x
  double (*fn)(double) = nullptr;
  std::shared_ptr<const Node> a, b;

  double eval(const Vec& x, double t) const {
    switch (op) {
      case Op::constant: return value;
      case Op::var_t: return t;
      case Op::var_r: return x.norm();
      case Op::var_x:
        if (index >= x.size()) throw Error(Errc::dimension_mismatch, "expression uses a coordinate beyond the dimension");
        return x[index];
      case Op::add: return a->eval(x, t) + b->eval(x, t);
      case Op::sub: return a->eval(x, t) - b->eval(x, t);
      case Op::mul: return a->eval(x, t) * b->eval(x, t);
      case Op::div: return a->eval(x, t) / b->eval(x, t);
      case Op::pow: return std::pow(a->eval(x, t), b->eval(x, t));
      case Op::neg: return -a->eval(x, t);
      case Op::call: return fn(a->eval(x, t));
    }
    return 0.0;
  }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Op = Expression::Node::Op;

NodePtr make(Op op, NodePtr a = nullptr, NodePtr b = nullptr) {
  auto n = std::make_shared<Expression::Node>();
  n->op = op;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

double fn_sqrt(double v) { return std::sqrt(v); }
double fn_abs(double v) { return std::fabs(v); }
double fn_exp(double v) { return std::exp(v); }
double fn_log(double v) { return std::log(v); }
double fn_sin(double v) { return std::sin(v); }
double fn_cos(double v) { return std::cos(v); }
double fn_tanh(double v) { return std::tanh(v); }

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  NodePtr parse() {
    NodePtr e = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(Errc::parse, msg + " at position " + std::to_string(pos_) + " in '" + s_ + "'");
  }

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

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+')) lhs = make(Op::add, lhs, term());
      else if (accept('-')) lhs = make(Op::sub, lhs, term());
      else return lhs;
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*')) lhs = make(Op::mul, lhs, unary());
      else if (accept('/')) lhs = make(Op::div, lhs, unary());
      else return lhs;
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(Op::neg, unary());
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return make(Op::pow, base, unary());
    return base;
  }

  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of expression");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = expr();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    if (c == '|') {
      ++pos_;
      skip();
      const std::size_t save = pos_;
      if (pos_ < s_.size() && s_[pos_] == 'x') {
        ++pos_;
        if (accept('|')) return make(Op::var_r);
        pos_ = save;
      }
      NodePtr inner = expr();
      if (!accept('|')) fail("expected closing '|'");
      auto n = std::make_shared<Expression::Node>();
      n->op = Op::call;
      n->fn = fn_abs;
      n->a = inner;
      return n;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return name();
    fail(std::string("unexpected character '") + c + "'");
  }

  NodePtr number() {
    const char* begin = s_.c_str() + pos_;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) fail("bad number");
    pos_ += static_cast<std::size_t>(end - begin);
    auto n = std::make_shared<Expression::Node>();
    n->op = Op::constant;
    n->value = v;
    return n;
  }

  NodePtr name() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    const std::string id = s_.substr(start, pos_ - start);
    skip();
    if (pos_ < s_.size() && s_[pos_] == '(') {
      double (*fn)(double) = nullptr;
      if (id == "sqrt") fn = fn_sqrt;
      else if (id == "abs") fn = fn_abs;
      else if (id == "exp") fn = fn_exp;
      else if (id == "log") fn = fn_log;
      else if (id == "sin") fn = fn_sin;
      else if (id == "cos") fn = fn_cos;
      else if (id == "tanh") fn = fn_tanh;
      else fail("unknown function '" + id + "'");
      ++pos_;
      NodePtr arg = expr();
      if (!accept(')')) fail("expected ')' after function argument");
      auto n = std::make_shared<Expression::Node>();
      n->op = Op::call;
      n->fn = fn;
      n->a = arg;
      return n;
    }
    auto n = std::make_shared<Expression::Node>();
    if (id == "t") {
      n->op = Op::var_t;
    } else if (id == "r") {
      n->op = Op::var_r;
    } else if (id == "pi") {
      n->op = Op::constant;
      n->value = std::numbers::pi;
    } else if (id == "x" || id == "y" || id == "z") {
      n->op = Op::var_x;
      n->index = id == "x" ? 0 : (id == "y" ? 1 : 2);
    } else if (id.size() == 2 && id[0] == 'x' && id[1] >= '1' && id[1] <= '9') {
      n->op = Op::var_x;
      n->index = id[1] - '1';
    } else {
      fail("unknown name '" + id + "'");
    }
    return n;
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression::Expression(const std::string& source) : source_(source), root_(Parser(source_).parse()) {}

double Expression::operator()(const Vec& x, double t) const { return root_->eval(x, t); }

double Expression::eval_scalar(double s, double t) const {
  // r is |x| in general; in scalar (radial) use it is the coordinate itself.
  struct Radial {
    static double eval(const Node& n, double s, double t) {
      switch (n.op) {
        case Node::Op::var_r: return s;
        case Node::Op::var_x:
          if (n.index != 0) throw Error(Errc::dimension_mismatch, "radial expression may only use r, x or t");
          return s;
        case Node::Op::var_t: return t;
        case Node::Op::constant: return n.value;
        case Node::Op::add: return eval(*n.a, s, t) + eval(*n.b, s, t);
        case Node::Op::sub: return eval(*n.a, s, t) - eval(*n.b, s, t);
        case Node::Op::mul: return eval(*n.a, s, t) * eval(*n.b, s, t);
        case Node::Op::div: return eval(*n.a, s, t) / eval(*n.b, s, t);
        case Node::Op::pow: return std::pow(eval(*n.a, s, t), eval(*n.b, s, t));
        case Node::Op::neg: return -eval(*n.a, s, t);
        case Node::Op::call: return n.fn(eval(*n.a, s, t));
      }
      return 0.0;
    }
  };
  return Radial::eval(*root_, s, t);
}

}  // namespace dshock
