#include "popuc/expr.hpp"

#include <charconv>
#include <cmath>
#include <numbers>

#include "popuc/error.hpp"

namespace popuc {

const char* to_string(Variable v) { return v == Variable::t ? "t" : "theta"; }

struct Expr::Node {
  Kind kind = Kind::constant;
  double value = 0.0;
  Variable var = Variable::t;
  Function fn = Function::sin;
  Expr a;
  Expr b;
};

namespace {

using Kind = Expr::Kind;
using Function = Expr::Function;

const char* function_name(Function f) {
  switch (f) {
    case Function::sin: return "sin";
    case Function::cos: return "cos";
    case Function::exp: return "exp";
    case Function::sqrt: return "sqrt";
    case Function::abs: return "abs";
  }
  return "?";
}

bool is_binary(Kind k) {
  return k == Kind::add || k == Kind::subtract || k == Kind::multiply || k == Kind::divide;
}

int precedence(Kind k) {
  switch (k) {
    case Kind::add:
    case Kind::subtract: return 1;
    case Kind::multiply:
    case Kind::divide: return 2;
    case Kind::negate: return 3;
    default: return 4;
  }
}

double checked(double v, const char* what) {
  if (!std::isfinite(v)) throw NonFiniteError(std::string("non-finite result in ") + what);
  return v;
}

bool is_literal(const Expr& e, double v) { return e.kind() == Kind::constant && e.value() == v; }

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  Expr run() {
    skip_ws();
    if (pos_ == src_.size()) throw ParseError("empty expression", pos_);
    Expr e = expr();
    skip_ws();
    if (pos_ != src_.size()) throw ParseError("unexpected character '" + std::string(1, src_[pos_]) + "'", pos_);
    return e;
  }

 private:
  Expr expr() {
    Expr lhs = term();
    for (;;) {
      skip_ws();
      if (accept('+')) {
        lhs = Expr::binary(Kind::add, lhs, term());
      } else if (accept('-')) {
        lhs = Expr::binary(Kind::subtract, lhs, term());
      } else {
        return lhs;
      }
    }
  }

  Expr term() {
    Expr lhs = factor();
    for (;;) {
      skip_ws();
      if (accept('*')) {
        lhs = Expr::binary(Kind::multiply, lhs, factor());
      } else if (accept('/')) {
        lhs = Expr::binary(Kind::divide, lhs, factor());
      } else {
        return lhs;
      }
    }
  }

  Expr factor() {
    skip_ws();
    if (pos_ == src_.size()) throw ParseError("unexpected end of input", pos_);
    const char c = src_[pos_];
    if (c == '-') {
      ++pos_;
      if (pos_ < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.'))
        return Expr::constant(-number().value());
      return Expr::negate(factor());
    }
    if (c == '(') {
      ++pos_;
      Expr inner = expr();
      skip_ws();
      if (!accept(')')) throw ParseError("expected ')'", pos_);
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    throw ParseError("unexpected character '" + std::string(1, c) + "'", pos_);
  }

  Expr number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    };
    digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      digits();
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t save = pos_++;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        digits();
      } else {
        pos_ = save;
      }
    }
    double v = 0.0;
    auto [end, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, v);
    if (ec != std::errc() || end != src_.data() + pos_) throw ParseError("malformed number", start);
    return Expr::constant(v);
  }

  Expr identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
      ++pos_;
    const std::string_view name = src_.substr(start, pos_ - start);
    if (name == "t") return Expr::variable(Variable::t);
    if (name == "theta") return Expr::variable(Variable::theta);
    if (name == "pi") return Expr::pi();

    static constexpr std::pair<std::string_view, Function> kFunctions[] = {
        {"sin", Function::sin}, {"cos", Function::cos},   {"exp", Function::exp},
        {"sqrt", Function::sqrt}, {"abs", Function::abs}};
    for (const auto& [fname, f] : kFunctions) {
      if (name != fname) continue;
      skip_ws();
      if (!accept('(')) throw ParseError("expected '(' after " + std::string(name), pos_);
      Expr arg = expr();
      skip_ws();
      if (!accept(')')) throw ParseError("expected ')'", pos_);
      return Expr::call(f, arg);
    }
    throw UnknownIdentifierError(std::string(name), start);
  }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

void print(const Expr& e, std::string& out);

void print_child(const Expr& child, int parent_prec, bool right, std::string& out) {
  const int p = precedence(child.kind());
  const bool parens = p < parent_prec || (right && p == parent_prec && is_binary(child.kind()));
  if (parens) out += '(';
  print(child, out);
  if (parens) out += ')';
}

void print(const Expr& e, std::string& out) {
  switch (e.kind()) {
    case Kind::constant: {
      char buf[64];
      const double v = e.value();
      auto [end, ec] = std::to_chars(buf, buf + sizeof buf, std::fabs(v));
      (void)ec;
      if (std::signbit(v)) out += "(-";
      out.append(buf, end);
      if (std::signbit(v)) out += ')';
      return;
    }
    case Kind::pi: out += "pi"; return;
    case Kind::variable: out += to_string(e.var()); return;
    case Kind::negate:
      out += '-';
      if (e.operand().kind() == Kind::constant && !std::signbit(e.operand().value())) {
        out += '(';
        print(e.operand(), out);
        out += ')';
        return;
      }
      print_child(e.operand(), precedence(Kind::negate), false, out);
      return;
    case Kind::call:
      out += function_name(e.function());
      out += '(';
      print(e.operand(), out);
      out += ')';
      return;
    default: {
      const int p = precedence(e.kind());
      print_child(e.lhs(), p, false, out);
      switch (e.kind()) {
        case Kind::add: out += " + "; break;
        case Kind::subtract: out += " - "; break;
        case Kind::multiply: out += '*'; break;
        default: out += '/'; break;
      }
      print_child(e.rhs(), p, true, out);
    }
  }
}

}  // namespace

namespace {
const Expr::Node& zero_node() {
  static const Expr::Node zero{};
  return zero;
}
}  // namespace

Expr::Expr() = default;

const Expr::Node& Expr::node() const { return node_ ? *node_ : zero_node(); }

Expr Expr::constant(double value) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::constant;
  n->value = value;
  return Expr(std::move(n));
}

Expr Expr::pi() {
  auto n = std::make_shared<Node>();
  n->kind = Kind::pi;
  n->value = std::numbers::pi;
  return Expr(std::move(n));
}

Expr Expr::variable(Variable v) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::variable;
  n->var = v;
  return Expr(std::move(n));
}

Expr Expr::negate(Expr operand) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::negate;
  n->a = std::move(operand);
  return Expr(std::move(n));
}

Expr Expr::binary(Kind op, Expr lhs, Expr rhs) {
  if (!is_binary(op)) throw std::invalid_argument("Expr::binary: not a binary operator");
  auto n = std::make_shared<Node>();
  n->kind = op;
  n->a = std::move(lhs);
  n->b = std::move(rhs);
  return Expr(std::move(n));
}

Expr Expr::call(Function f, Expr argument) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::call;
  n->fn = f;
  n->a = std::move(argument);
  return Expr(std::move(n));
}

Expr::Kind Expr::kind() const { return node().kind; }
double Expr::value() const { return node().value; }
Variable Expr::var() const { return node().var; }
Expr::Function Expr::function() const { return node().fn; }
const Expr& Expr::lhs() const { return node().a; }
const Expr& Expr::rhs() const { return node().b; }
const Expr& Expr::operand() const { return node().a; }

double Expr::eval(const Bindings& b) const {
  const Node& n = node();
  switch (n.kind) {
    case Kind::constant:
    case Kind::pi: return n.value;
    case Kind::variable: {
      const auto& slot = n.var == Variable::t ? b.t : b.theta;
      if (!slot) throw UnboundVariableError(std::string("unbound variable '") + popuc::to_string(n.var) + "'");
      return *slot;
    }
    case Kind::negate: return -n.a.eval(b);
    case Kind::add: return checked(n.a.eval(b) + n.b.eval(b), "addition");
    case Kind::subtract: return checked(n.a.eval(b) - n.b.eval(b), "subtraction");
    case Kind::multiply: return checked(n.a.eval(b) * n.b.eval(b), "multiplication");
    case Kind::divide: {
      const double num = n.a.eval(b);
      const double den = n.b.eval(b);
      if (den == 0.0) throw NonFiniteError("division by zero");
      return checked(num / den, "division");
    }
    case Kind::call: {
      const double x = n.a.eval(b);
      switch (n.fn) {
        case Function::sin: return std::sin(x);
        case Function::cos: return std::cos(x);
        case Function::exp: return checked(std::exp(x), "exp");
        case Function::sqrt:
          if (x < 0.0) throw NonFiniteError("sqrt of negative value");
          return std::sqrt(x);
        case Function::abs: return std::fabs(x);
      }
    }
  }
  return 0.0;
}

std::set<Variable> Expr::free_variables() const {
  std::set<Variable> out;
  const Node& n = node();
  if (n.kind == Kind::variable) {
    out.insert(n.var);
  } else if (n.kind == Kind::negate || n.kind == Kind::call) {
    out = n.a.free_variables();
  } else if (is_binary(n.kind)) {
    out = n.a.free_variables();
    out.merge(n.b.free_variables());
  }
  return out;
}

bool Expr::depends_on(Variable v) const { return free_variables().count(v) > 0; }

std::string Expr::to_string() const {
  std::string out;
  print(*this, out);
  return out;
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Kind::constant: return a.value() == b.value();
    case Kind::pi: return true;
    case Kind::variable: return a.var() == b.var();
    case Kind::negate: return a.operand() == b.operand();
    case Kind::call: return a.function() == b.function() && a.operand() == b.operand();
    default: return a.lhs() == b.lhs() && a.rhs() == b.rhs();
  }
}

Expr operator+(const Expr& a, const Expr& b) {
  if (is_literal(a, 0.0)) return b;
  if (is_literal(b, 0.0)) return a;
  return Expr::binary(Kind::add, a, b);
}

Expr operator-(const Expr& a, const Expr& b) {
  if (is_literal(b, 0.0)) return a;
  if (is_literal(a, 0.0)) return -b;
  return Expr::binary(Kind::subtract, a, b);
}

Expr operator*(const Expr& a, const Expr& b) {
  if (is_literal(a, 0.0) || is_literal(b, 0.0)) return Expr::constant(0.0);
  if (is_literal(a, 1.0)) return b;
  if (is_literal(b, 1.0)) return a;
  return Expr::binary(Kind::multiply, a, b);
}

Expr operator/(const Expr& a, const Expr& b) {
  if (is_literal(b, 1.0)) return a;
  if (is_literal(a, 0.0) && !is_literal(b, 0.0)) return Expr::constant(0.0);
  return Expr::binary(Kind::divide, a, b);
}

Expr operator-(const Expr& a) {
  if (is_literal(a, 0.0)) return a;
  return Expr::negate(a);
}

Expr parse(std::string_view source) { return Parser(source).run(); }

Expr differentiate(const Expr& e, Variable var) {
  if (!e.depends_on(var)) return Expr::constant(0.0);
  switch (e.kind()) {
    case Kind::constant:
    case Kind::pi: return Expr::constant(0.0);
    case Kind::variable: return Expr::constant(e.var() == var ? 1.0 : 0.0);
    case Kind::negate: return -differentiate(e.operand(), var);
    case Kind::add: return differentiate(e.lhs(), var) + differentiate(e.rhs(), var);
    case Kind::subtract: return differentiate(e.lhs(), var) - differentiate(e.rhs(), var);
    case Kind::multiply: {
      const Expr& u = e.lhs();
      const Expr& v = e.rhs();
      return differentiate(u, var) * v + u * differentiate(v, var);
    }
    case Kind::divide: {
      const Expr& u = e.lhs();
      const Expr& v = e.rhs();
      const Expr du = differentiate(u, var);
      const Expr dv = differentiate(v, var);
      if (is_literal(dv, 0.0)) return du / v;
      return (du * v - u * dv) / (v * v);
    }
    case Kind::call: {
      const Expr& u = e.operand();
      const Expr du = differentiate(u, var);
      switch (e.function()) {
        case Function::sin: return Expr::call(Function::cos, u) * du;
        case Function::cos: return -(Expr::call(Function::sin, u) * du);
        case Function::exp: return e * du;
        case Function::sqrt: return du / (Expr::constant(2.0) * e);
        case Function::abs:
          throw NotDifferentiableError("abs is not differentiable; rewrite the expression without abs");
      }
    }
  }
  return Expr::constant(0.0);
}

}  // namespace popuc
