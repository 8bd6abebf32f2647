#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>

namespace popuc {

enum class Variable { t, theta };

const char* to_string(Variable v);

/// Values for the free variables of an expression. Unset means unbound.
struct Bindings {
  std::optional<double> t;
  std::optional<double> theta;

  static Bindings at_t(double t_value) { return {t_value, std::nullopt}; }
  static Bindings at(double t_value, double theta_value) { return {t_value, theta_value}; }
};

/// Immutable scalar expression tree over the variables `t` and `theta`.
///
/// Grammar (left associative, usual precedence):
///
///     expr   := term (('+'|'-') term)*
///     term   := factor (('*'|'/') factor)*
///     factor := number | 'pi' | 't' | 'theta'
///             | func '(' expr ')' | '(' expr ')' | '-' factor
///     func   := sin | cos | exp | sqrt | abs
///
/// Copies share the underlying nodes; an Expr can be read from any number
/// of threads.
class Expr {
 public:
  enum class Kind { constant, pi, variable, negate, add, subtract, multiply, divide, call };
  enum class Function { sin, cos, exp, sqrt, abs };

  struct Node;

  /// The constant 0.
  Expr();

  static Expr constant(double value);
  static Expr pi();
  static Expr variable(Variable v);
  static Expr negate(Expr operand);
  static Expr binary(Kind op, Expr lhs, Expr rhs);
  static Expr call(Function f, Expr argument);

  Kind kind() const;
  /// Literal value of a constant node (pi nodes report pi).
  double value() const;
  Variable var() const;
  Function function() const;
  const Expr& lhs() const;
  const Expr& rhs() const;
  /// Operand of negate / argument of call.
  const Expr& operand() const;

  /// Throws UnboundVariableError or NonFiniteError. Division by zero is an
  /// error, never an infinity.
  double eval(const Bindings& b) const;
  double eval_t(double t) const { return eval(Bindings::at_t(t)); }

  std::set<Variable> free_variables() const;
  bool depends_on(Variable v) const;

  /// Text that parses back to a structurally equal tree.
  std::string to_string() const;

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  const Node& node() const;
  // Null means the literal 0.
  std::shared_ptr<const Node> node_;
};

/// Throws ParseError (with byte offset) or UnknownIdentifierError.
Expr parse(std::string_view source);

/// Exact symbolic derivative. Applies only trivial folding of literal 0 and 1
/// operands. Throws NotDifferentiableError for abs.
Expr differentiate(const Expr& e, Variable var);

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);

}  // namespace popuc
