#ifndef ULTRAJET_FUNCDSL_HPP
#define ULTRAJET_FUNCDSL_HPP

#include "ultrajet/jet.hpp"
#include "ultrajet/rational.hpp"

#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace ultrajet {

enum class Builtin { exp, sin, cos, sqrt1p, bump };

std::string to_string(Builtin b);

struct Node {
  enum class Kind { number, variable, neg, add, sub, mul, div, pow, call, vector };
  Kind kind;
  Rational number;   // number
  int index = 0;     // variable (0-based) or pow exponent
  Builtin fn{};      // call
  std::vector<std::shared_ptr<const Node>> args;
};

using NodePtr = std::shared_ptr<const Node>;

/// Expression R^arity -> R^target_dim. Variables are written x1..xn; for arity 1
/// the name x is accepted as well.
class Expr {
 public:
  Expr() = default;
  Expr(NodePtr root, int arity);

  /// Grammar, with the usual precedence (unary minus binds looser than ^):
  ///   expr   := term (('+'|'-') term)*
  ///   term   := factor (('*'|'/') factor)*
  ///   factor := '-' factor | atom ('^' ['-'] int)?
  ///   atom   := number | var | builtin '(' expr ')' | '(' expr ')' | '[' expr (',' expr)* ']'
  static Expr parse(std::string_view text, int arity);

  static Expr number(const Rational& v, int arity);
  static Expr variable(int i, int arity);
  static Expr call(Builtin fn, const Expr& arg);
  static Expr vector(const std::vector<Expr>& parts);

  int arity() const { return arity_; }
  int target_dim() const;
  const Node& root() const { return *root_; }
  const NodePtr& root_ptr() const { return root_; }
  bool valid() const { return root_ != nullptr; }

  Expr component(int i) const;
  std::string to_string() const;

 private:
  NodePtr root_;
  int arity_ = 0;
};

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr pow(const Expr& a, int exponent);

/// f(args_1, ..., args_n) where the args share one arity.
Expr substitute(const Expr& f, const std::vector<Expr>& args);

/// Raised internally when a transcendental builtin has no exact rational series
/// at the evaluation point.
class InexactEvaluation : public Error {
 public:
  explicit InexactEvaluation(const std::string& what) : Error("InexactEvaluation: " + what) {}
};

/// Jet of e at point through order K. In Rational mode throws InexactEvaluation
/// when an exact series is unavailable.
template <class T>
Jet<T> eval_jet(const Expr& e, const std::vector<T>& point, int K);

extern template Jet<double> eval_jet(const Expr&, const std::vector<double>&, int);
extern template Jet<Rational> eval_jet(const Expr&, const std::vector<Rational>&, int);

enum class ScalarMode { rational, floating };

struct EvaluatedJet {
  std::variant<Jet<Rational>, Jet<double>> jet;
  bool degraded = false;
  std::string warning;

  bool exact() const { return jet.index() == 0; }
  Jet<double> as_float() const;
};

/// Rational mode evaluates exactly where possible and otherwise falls back to
/// float, recording a warning.
EvaluatedJet evaluate(const Expr& e, const std::vector<Rational>& point, int K, ScalarMode mode);

/// Plain function value.
std::vector<double> evaluate_value(const Expr& e, const std::vector<double>& point);

}  // namespace ultrajet

#endif
