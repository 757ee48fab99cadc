#pragma once

#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>

namespace qcv {

class ExprNode;
using Expr = std::shared_ptr<const ExprNode>;

enum class UnOp { Neg, Sin, Cos, Sinh, Cosh, Tanh, Exp, Log, Sqrt };
enum class BinOp { Add, Sub, Mul, Div, Pow };

/// Immutable expression tree over named coordinates. Nodes are shared and
/// never mutated after construction, so trees are safe to evaluate from
/// concurrent workers.
class ExprNode {
public:
  enum class Kind { Constant, Variable, Unary, Binary };

  Kind kind;
  double value = 0.0;  // Constant
  std::string name;    // Variable
  UnOp un{};
  BinOp bin{};
  Expr a, b;

  explicit ExprNode(double v) : kind(Kind::Constant), value(v) {}
  explicit ExprNode(std::string n) : kind(Kind::Variable), name(std::move(n)) {}
  ExprNode(UnOp op, Expr child) : kind(Kind::Unary), un(op), a(std::move(child)) {}
  ExprNode(BinOp op, Expr l, Expr r)
      : kind(Kind::Binary), bin(op), a(std::move(l)), b(std::move(r)) {}
};

Expr constant(double v);
Expr variable(const std::string& name);
Expr unary(UnOp op, Expr e);
Expr binary(BinOp op, Expr l, Expr r);

inline Expr operator+(Expr l, Expr r) { return binary(BinOp::Add, std::move(l), std::move(r)); }
inline Expr operator-(Expr l, Expr r) { return binary(BinOp::Sub, std::move(l), std::move(r)); }
inline Expr operator*(Expr l, Expr r) { return binary(BinOp::Mul, std::move(l), std::move(r)); }
inline Expr operator/(Expr l, Expr r) { return binary(BinOp::Div, std::move(l), std::move(r)); }
inline Expr operator-(Expr e) { return unary(UnOp::Neg, std::move(e)); }
inline Expr pow(Expr base, Expr exp) { return binary(BinOp::Pow, std::move(base), std::move(exp)); }
inline Expr pow(Expr base, double exp) { return pow(std::move(base), constant(exp)); }

struct ParseError : std::runtime_error {
  std::size_t offset;
  ParseError(const std::string& msg, std::size_t off)
      : std::runtime_error(msg + " (at byte " + std::to_string(off) + ")"), offset(off) {}
};

struct EvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Point binding: coordinate (and parameter) name -> value.
using Env = std::map<std::string, double>;

/// Parse infix text. `known` is the set of identifiers allowed as variables
/// (declared coordinates and parameters); anything else is rejected.
/// Precedence: ^ binds tightest (right-assoc), then unary -, then * /, then + -.
Expr parse(const std::string& text, const std::set<std::string>& known);

/// Evaluate at a point. Domain violations (division by zero, log/sqrt of a
/// negative argument, missing binding) throw EvalError rather than producing
/// NaN or Inf.
double eval(const Expr& e, const Env& env);

/// Exact symbolic derivative with respect to `var`.
Expr diff(const Expr& e, const std::string& var);

/// Constant folding and 0/1 identity elimination only; no CAS-style rewriting.
Expr simplify(const Expr& e);

/// Infix rendering; parse(render(e)) is eval-equivalent to e.
std::string render(const Expr& e);

/// Names of all variables occurring in e.
std::set<std::string> variables(const Expr& e);

}  // namespace qcv
