#include "quasicurv/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <vector>

namespace qcv {

Expr constant(double v) { return std::make_shared<ExprNode>(v); }
Expr variable(const std::string& name) { return std::make_shared<ExprNode>(name); }
Expr unary(UnOp op, Expr e) { return std::make_shared<ExprNode>(op, std::move(e)); }
Expr binary(BinOp op, Expr l, Expr r) {
  return std::make_shared<ExprNode>(op, std::move(l), std::move(r));
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

bool is_integer(double x) { return std::floor(x) == x && std::abs(x) < 1e15; }

double eval_pow(double base, double exp) {
  if (base == 0.0 && exp < 0.0) throw EvalError("division by zero in x^negative at x=0");
  if (base < 0.0 && !is_integer(exp))
    throw EvalError("negative base with non-integer exponent");
  double r = std::pow(base, exp);
  if (!std::isfinite(r)) throw EvalError("overflow in pow");
  return r;
}

}  // namespace

double eval(const Expr& e, const Env& env) {
  switch (e->kind) {
    case ExprNode::Kind::Constant:
      return e->value;
    case ExprNode::Kind::Variable: {
      auto it = env.find(e->name);
      if (it == env.end()) throw EvalError("unbound variable '" + e->name + "'");
      return it->second;
    }
    case ExprNode::Kind::Unary: {
      double x = eval(e->a, env);
      switch (e->un) {
        case UnOp::Neg: return -x;
        case UnOp::Sin: return std::sin(x);
        case UnOp::Cos: return std::cos(x);
        case UnOp::Sinh: return std::sinh(x);
        case UnOp::Cosh: return std::cosh(x);
        case UnOp::Tanh: return std::tanh(x);
        case UnOp::Exp: {
          double r = std::exp(x);
          if (!std::isfinite(r)) throw EvalError("overflow in exp");
          return r;
        }
        case UnOp::Log:
          if (x <= 0.0) throw EvalError("log of non-positive argument");
          return std::log(x);
        case UnOp::Sqrt:
          if (x < 0.0) throw EvalError("sqrt of negative argument");
          return std::sqrt(x);
      }
      break;
    }
    case ExprNode::Kind::Binary: {
      double l = eval(e->a, env);
      double r = eval(e->b, env);
      switch (e->bin) {
        case BinOp::Add: return l + r;
        case BinOp::Sub: return l - r;
        case BinOp::Mul: return l * r;
        case BinOp::Div:
          if (r == 0.0) throw EvalError("division by zero");
          return l / r;
        case BinOp::Pow: return eval_pow(l, r);
      }
      break;
    }
  }
  throw EvalError("corrupt expression node");
}

// ---------------------------------------------------------------------------
// Differentiation

Expr diff(const Expr& e, const std::string& var) {
  switch (e->kind) {
    case ExprNode::Kind::Constant:
      return constant(0.0);
    case ExprNode::Kind::Variable:
      return constant(e->name == var ? 1.0 : 0.0);
    case ExprNode::Kind::Unary: {
      Expr u = e->a;
      Expr du = diff(u, var);
      switch (e->un) {
        case UnOp::Neg: return -du;
        case UnOp::Sin: return unary(UnOp::Cos, u) * du;
        case UnOp::Cos: return -(unary(UnOp::Sin, u) * du);
        case UnOp::Sinh: return unary(UnOp::Cosh, u) * du;
        case UnOp::Cosh: return unary(UnOp::Sinh, u) * du;
        case UnOp::Tanh:
          return (constant(1.0) - pow(unary(UnOp::Tanh, u), 2.0)) * du;
        case UnOp::Exp: return unary(UnOp::Exp, u) * du;
        case UnOp::Log: return du / u;
        case UnOp::Sqrt: return du / (constant(2.0) * unary(UnOp::Sqrt, u));
      }
      break;
    }
    case ExprNode::Kind::Binary: {
      Expr u = e->a, v = e->b;
      Expr du = diff(u, var), dv = diff(v, var);
      switch (e->bin) {
        case BinOp::Add: return du + dv;
        case BinOp::Sub: return du - dv;
        case BinOp::Mul: return du * v + u * dv;
        case BinOp::Div: return (du * v - u * dv) / pow(v, 2.0);
        case BinOp::Pow:
          if (v->kind == ExprNode::Kind::Constant) {
            // power rule; valid at negative bases for integer exponents
            double k = v->value;
            if (k == 0.0) return constant(0.0);
            return constant(k) * pow(u, k - 1.0) * du;
          }
          // general case via exp/log rewrite: (u^v)' = u^v (v' ln u + v u'/u)
          return pow(u, v) * (dv * unary(UnOp::Log, u) + v * du / u);
      }
      break;
    }
  }
  throw EvalError("corrupt expression node");
}

// ---------------------------------------------------------------------------
// Simplification: constant folding and 0/1 identities

namespace {

bool is_const(const Expr& e, double v) {
  return e->kind == ExprNode::Kind::Constant && e->value == v;
}
bool is_const(const Expr& e) { return e->kind == ExprNode::Kind::Constant; }

}  // namespace

Expr simplify(const Expr& e) {
  switch (e->kind) {
    case ExprNode::Kind::Constant:
    case ExprNode::Kind::Variable:
      return e;
    case ExprNode::Kind::Unary: {
      Expr a = simplify(e->a);
      if (e->un == UnOp::Neg) {
        if (is_const(a)) return constant(-a->value);
        if (a->kind == ExprNode::Kind::Unary && a->un == UnOp::Neg) return a->a;
      } else if (is_const(a)) {
        try {
          return constant(eval(unary(e->un, a), {}));
        } catch (const EvalError&) {
          // leave domain violations to evaluation time
        }
      }
      return a == e->a ? e : unary(e->un, a);
    }
    case ExprNode::Kind::Binary: {
      Expr l = simplify(e->a);
      Expr r = simplify(e->b);
      if (is_const(l) && is_const(r)) {
        try {
          return constant(eval(binary(e->bin, l, r), {}));
        } catch (const EvalError&) {
        }
      }
      switch (e->bin) {
        case BinOp::Add:
          if (is_const(l, 0.0)) return r;
          if (is_const(r, 0.0)) return l;
          break;
        case BinOp::Sub:
          if (is_const(r, 0.0)) return l;
          if (is_const(l, 0.0)) return simplify(-r);
          break;
        case BinOp::Mul:
          if (is_const(l, 0.0) || is_const(r, 0.0)) return constant(0.0);
          if (is_const(l, 1.0)) return r;
          if (is_const(r, 1.0)) return l;
          if (is_const(l, -1.0)) return simplify(-r);
          if (is_const(r, -1.0)) return simplify(-l);
          break;
        case BinOp::Div:
          if (is_const(r, 1.0)) return l;
          break;
        case BinOp::Pow:
          if (is_const(r, 1.0)) return l;
          if (is_const(r, 0.0)) return constant(1.0);
          break;
      }
      return (l == e->a && r == e->b) ? e : binary(e->bin, l, r);
    }
  }
  return e;
}

// ---------------------------------------------------------------------------
// Rendering

namespace {

// precedence: Add/Sub 1, Mul/Div 2, unary Neg 3, Pow 4, atom 5
int precedence(const Expr& e) {
  switch (e->kind) {
    case ExprNode::Kind::Constant:
      return e->value < 0.0 ? 3 : 5;
    case ExprNode::Kind::Variable:
      return 5;
    case ExprNode::Kind::Unary:
      return e->un == UnOp::Neg ? 3 : 5;
    case ExprNode::Kind::Binary:
      switch (e->bin) {
        case BinOp::Add:
        case BinOp::Sub: return 1;
        case BinOp::Mul:
        case BinOp::Div: return 2;
        case BinOp::Pow: return 4;
      }
  }
  return 5;
}

const char* fn_name(UnOp op) {
  switch (op) {
    case UnOp::Sin: return "sin";
    case UnOp::Cos: return "cos";
    case UnOp::Sinh: return "sinh";
    case UnOp::Cosh: return "cosh";
    case UnOp::Tanh: return "tanh";
    case UnOp::Exp: return "exp";
    case UnOp::Log: return "log";
    case UnOp::Sqrt: return "sqrt";
    case UnOp::Neg: break;
  }
  return "?";
}

void render_rec(const Expr& e, std::string& out, int min_prec) {
  int prec = precedence(e);
  bool parens = prec < min_prec;
  if (parens) out += '(';
  switch (e->kind) {
    case ExprNode::Kind::Constant: {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", e->value);
      out += buf;
      break;
    }
    case ExprNode::Kind::Variable:
      out += e->name;
      break;
    case ExprNode::Kind::Unary:
      if (e->un == UnOp::Neg) {
        out += '-';
        render_rec(e->a, out, 3);
      } else {
        out += fn_name(e->un);
        out += '(';
        render_rec(e->a, out, 0);
        out += ')';
      }
      break;
    case ExprNode::Kind::Binary: {
      const char* op = "";
      int lp = prec, rp = prec + 1;
      switch (e->bin) {
        case BinOp::Add: op = " + "; rp = prec; break;
        case BinOp::Sub: op = " - "; break;
        case BinOp::Mul: op = "*"; rp = prec; break;
        case BinOp::Div: op = "/"; break;
        case BinOp::Pow:
          op = "^";
          lp = 5;   // left operand of ^ must be an atom
          rp = 3;   // right-assoc; allows x^-2
          break;
      }
      render_rec(e->a, out, lp);
      out += op;
      render_rec(e->b, out, rp);
      break;
    }
  }
  if (parens) out += ')';
}

}  // namespace

std::string render(const Expr& e) {
  std::string out;
  render_rec(e, out, 0);
  return out;
}

std::set<std::string> variables(const Expr& e) {
  std::set<std::string> names;
  struct Walker {
    std::set<std::string>& names;
    void walk(const Expr& n) {
      if (n->kind == ExprNode::Kind::Variable) names.insert(n->name);
      if (n->a) walk(n->a);
      if (n->b) walk(n->b);
    }
  } w{names};
  w.walk(e);
  return names;
}

// ---------------------------------------------------------------------------
// Parser: recursive descent over the grammar
//   expr  := term (('+'|'-') term)*
//   term  := unary (('*'|'/') unary)*
//   unary := '-' unary | power
//   power := atom ('^' unary)?
//   atom  := number | ident | ident '(' expr (',' expr)* ')' | '(' expr ')'

namespace {

const std::map<std::string, UnOp>& function_table() {
  static const std::map<std::string, UnOp> tbl = {
      {"sin", UnOp::Sin},   {"cos", UnOp::Cos},   {"sinh", UnOp::Sinh},
      {"cosh", UnOp::Cosh}, {"tanh", UnOp::Tanh}, {"exp", UnOp::Exp},
      {"log", UnOp::Log},   {"sqrt", UnOp::Sqrt}};
  return tbl;
}

class Parser {
public:
  Parser(const std::string& text, const std::set<std::string>& known)
      : s_(text), known_(known) {}

  Expr run() {
    Expr e = expr();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return e;
  }

private:
  const std::string& s_;
  const std::set<std::string>& known_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, pos_); }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }

  Expr expr() {
    Expr e = term();
    for (;;) {
      if (accept('+')) e = e + term();
      else if (accept('-')) e = e - term();
      else return e;
    }
  }

  Expr term() {
    Expr e = unary_expr();
    for (;;) {
      if (accept('*')) e = e * unary_expr();
      else if (accept('/')) e = e / unary_expr();
      else return e;
    }
  }

  Expr unary_expr() {
    if (accept('-')) return -unary_expr();
    return power();
  }

  Expr power() {
    Expr base = atom();
    if (accept('^')) return pow(std::move(base), unary_expr());
    return base;
  }

  Expr atom() {
    char c = peek();
    if (c == '(') {
      ++pos_;
      Expr e = expr();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    fail(pos_ >= s_.size() ? "unexpected end of input" : "unexpected character");
  }

  Expr number() {
    const char* start = s_.c_str() + pos_;
    char* end = nullptr;
    double v = std::strtod(start, &end);
    if (end == start) fail("malformed number");
    pos_ += static_cast<std::size_t>(end - start);
    return constant(v);
  }

  Expr identifier() {
    std::size_t start = pos_;
    while (pos_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
      ++pos_;
    std::string name = s_.substr(start, pos_ - start);
    if (peek() == '(') {
      ++pos_;
      std::vector<Expr> args;
      args.push_back(expr());
      while (accept(',')) args.push_back(expr());
      if (!accept(')')) fail("expected ')' after function arguments");
      auto it = function_table().find(name);
      if (it == function_table().end()) {
        pos_ = start;
        fail("unknown function '" + name + "'");
      }
      if (args.size() != 1) {
        pos_ = start;
        fail("function '" + name + "' takes 1 argument, got " +
             std::to_string(args.size()));
      }
      return unary(it->second, args[0]);
    }
    if (!known_.count(name)) {
      pos_ = start;
      fail("unknown identifier '" + name + "'");
    }
    return variable(name);
  }
};

}  // namespace

Expr parse(const std::string& text, const std::set<std::string>& known) {
  return Parser(text, known).run();
}

}  // namespace qcv
