#include "ultrajet/funcdsl.hpp"

#include <cctype>
#include <cmath>
#include <unordered_map>

namespace ultrajet {

std::string to_string(Builtin b) {
  switch (b) {
    case Builtin::exp: return "exp";
    case Builtin::sin: return "sin";
    case Builtin::cos: return "cos";
    case Builtin::sqrt1p: return "sqrt1p";
    case Builtin::bump: return "bump";
  }
  return {};
}

namespace {

NodePtr make_node(Node::Kind kind, std::vector<NodePtr> args = {}) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->args = std::move(args);
  return n;
}

// ---------------------------------------------------------------- parser

class Parser {
 public:
  Parser(std::string_view text, int arity) : s_(text), arity_(arity) {}

  NodePtr parse_top() {
    skip_ws();
    NodePtr root = parse_expr(true);
    skip_ws();
    if (pos_ != s_.size()) fail({"'+'", "'-'", "'*'", "'/'", "'^'", "end of input"});
    return root;
  }

 private:
  [[noreturn]] void fail(std::vector<std::string> expected) {
    std::string found;
    if (pos_ < s_.size()) found = std::string(1, s_[pos_]);
    throw SyntaxError(pos_, std::move(expected), found);
  }

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

  void expect(char c) {
    if (!accept(c)) fail({std::string("'") + c + "'"});
  }

  NodePtr parse_expr(bool top = false) {
    NodePtr lhs = parse_term(top);
    for (;;) {
      skip_ws();
      std::size_t at = pos_;
      if (accept('+')) {
        lhs = binary(Node::Kind::add, lhs, parse_term(false), at);
      } else if (accept('-')) {
        lhs = binary(Node::Kind::sub, lhs, parse_term(false), at);
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_term(bool top) {
    NodePtr lhs = parse_factor(top);
    for (;;) {
      skip_ws();
      std::size_t at = pos_;
      if (accept('*')) {
        lhs = binary(Node::Kind::mul, lhs, parse_factor(false), at);
      } else if (accept('/')) {
        lhs = binary(Node::Kind::div, lhs, parse_factor(false), at);
      } else {
        return lhs;
      }
    }
  }

  NodePtr binary(Node::Kind k, NodePtr a, NodePtr b, std::size_t at) {
    if (a->kind == Node::Kind::vector || b->kind == Node::Kind::vector) {
      pos_ = at;
      throw SyntaxError(at, {"scalar operand (vector literals are only allowed at top level)"}, std::string(1, s_[at]));
    }
    return make_node(k, {std::move(a), std::move(b)});
  }

  NodePtr parse_factor(bool top) {
    skip_ws();
    if (accept('-')) {
      NodePtr inner = parse_factor(false);
      return make_node(Node::Kind::neg, {inner});
    }
    NodePtr base = parse_atom(top);
    skip_ws();
    if (accept('^')) {
      skip_ws();
      bool negative = accept('-');
      skip_ws();
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail({"integer exponent"});
      if (pos_ - start > 6) {
        pos_ = start;
        fail({"integer exponent below 10^6"});
      }
      int e = std::stoi(std::string(s_.substr(start, pos_ - start)));
      if (base->kind == Node::Kind::vector) throw SyntaxError(start, {"scalar base"}, "^");
      auto n = std::make_shared<Node>();
      n->kind = Node::Kind::pow;
      n->index = negative ? -e : e;
      n->args = {base};
      return n;
    }
    return base;
  }

  NodePtr parse_atom(bool top) {
    skip_ws();
    if (pos_ >= s_.size()) fail(atom_expected());
    char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
    if (c == '(') {
      ++pos_;
      NodePtr inner = parse_expr(false);
      expect(')');
      return inner;
    }
    if (c == '[') {
      std::size_t at = pos_;
      if (!top) throw SyntaxError(at, {"scalar expression (vector literals are only allowed at top level)"}, "[");
      ++pos_;
      std::vector<NodePtr> parts;
      parts.push_back(parse_expr(false));
      while (accept(',')) parts.push_back(parse_expr(false));
      if (!accept(']')) fail({"','", "']'"});
      return make_node(Node::Kind::vector, std::move(parts));
    }
    fail(atom_expected());
  }

  static std::vector<std::string> atom_expected() {
    return {"number", "variable", "builtin", "'('", "'['", "'-'"};
  }

  NodePtr parse_number() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t save = pos_;
      ++pos_;
      if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
      std::size_t digits = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (digits == pos_) pos_ = save;
    }
    auto text = s_.substr(start, pos_ - start);
    if (text == ".") {
      pos_ = start;
      fail({"number"});
    }
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::number;
    try {
      n->number = parse_rational(text);
    } catch (const std::invalid_argument&) {
      pos_ = start;
      fail({"number"});
    }
    return n;
  }

  NodePtr parse_identifier() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    std::string name(s_.substr(start, pos_ - start));
    for (Builtin b : {Builtin::exp, Builtin::sin, Builtin::cos, Builtin::sqrt1p, Builtin::bump}) {
      if (name == ultrajet::to_string(b)) {
        expect('(');
        NodePtr arg = parse_expr(false);
        expect(')');
        auto n = std::make_shared<Node>();
        n->kind = Node::Kind::call;
        n->fn = b;
        n->args = {arg};
        return n;
      }
    }
    int index = -1;
    if (name == "x" && arity_ == 1) {
      index = 0;
    } else if (name.size() >= 2 && name[0] == 'x') {
      bool digits = true;
      for (std::size_t i = 1; i < name.size(); ++i) digits = digits && std::isdigit(static_cast<unsigned char>(name[i]));
      if (digits && name.size() < 8) index = std::stoi(name.substr(1)) - 1;
      if (digits && (index < 0 || index >= arity_))
        throw ArityError("variable " + name + " at offset " + std::to_string(start) + " exceeds arity " +
                         std::to_string(arity_));
    }
    if (index < 0) {
      pos_ = start;
      fail({"variable", "builtin"});
    }
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::variable;
    n->index = index;
    return n;
  }

  std::string_view s_;
  int arity_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------- printer

int precedence(const Node& n) {
  switch (n.kind) {
    case Node::Kind::add:
    case Node::Kind::sub: return 1;
    case Node::Kind::mul:
    case Node::Kind::div: return 2;
    case Node::Kind::neg: return 3;
    case Node::Kind::pow: return 4;
    case Node::Kind::number: return n.number < 0 ? 3 : 5;
    default: return 5;
  }
}

std::string number_text(const Rational& q) {
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  Integer num = numerator(q), den = denominator(q);
  if (den == 1) return num.str();
  // Exact decimal when the denominator is 2^a 5^b.
  Integer d = den;
  int twos = 0, fives = 0;
  while (d % 2 == 0) {
    d /= 2;
    ++twos;
  }
  while (d % 5 == 0) {
    d /= 5;
    ++fives;
  }
  if (d != 1) return "(" + num.str() + "/" + den.str() + ")";
  int digits = std::max(twos, fives);
  Integer scaled = num * boost::multiprecision::pow(Integer(10), digits) / den;
  bool negative = scaled < 0;
  std::string s = (negative ? Integer(-scaled) : scaled).str();
  if (static_cast<int>(s.size()) <= digits) s = std::string(digits - s.size() + 1, '0') + s;
  s.insert(s.size() - digits, ".");
  return negative ? "-" + s : s;
}

void print(const Node& n, std::string& out) {
  auto child = [&](const Node& c, int min_prec) {
    if (precedence(c) < min_prec) {
      out += "(";
      print(c, out);
      out += ")";
    } else {
      print(c, out);
    }
  };
  switch (n.kind) {
    case Node::Kind::number: out += number_text(n.number); break;
    case Node::Kind::variable: out += "x" + std::to_string(n.index + 1); break;
    case Node::Kind::neg:
      out += "-";
      child(*n.args[0], 3);
      break;
    case Node::Kind::add:
      child(*n.args[0], 1);
      out += " + ";
      child(*n.args[1], 2);
      break;
    case Node::Kind::sub:
      child(*n.args[0], 1);
      out += " - ";
      child(*n.args[1], 2);
      break;
    case Node::Kind::mul:
      child(*n.args[0], 2);
      out += "*";
      child(*n.args[1], 3);
      break;
    case Node::Kind::div:
      child(*n.args[0], 2);
      out += "/";
      child(*n.args[1], 3);
      break;
    case Node::Kind::pow:
      child(*n.args[0], 5);
      out += "^" + std::to_string(n.index);
      break;
    case Node::Kind::call:
      out += to_string(n.fn) + "(";
      print(*n.args[0], out);
      out += ")";
      break;
    case Node::Kind::vector:
      out += "[";
      for (std::size_t i = 0; i < n.args.size(); ++i) {
        if (i) out += ", ";
        print(*n.args[i], out);
      }
      out += "]";
      break;
  }
}

// ---------------------------------------------------------------- evaluation

template <class T>
bool is_zero_value(const T& v) {
  return v == 0;
}

template <class T>
std::vector<T> builtin_series(Builtin fn, const T& u0, int K) {
  std::vector<T> c(K + 1);
  if constexpr (std::is_floating_point_v<T>) {
    switch (fn) {
      case Builtin::exp: {
        double v = std::exp(u0);
        for (int k = 0; k <= K; ++k) {
          c[k] = v;
          v /= (k + 1);
        }
        break;
      }
      case Builtin::sin:
      case Builtin::cos: {
        double s = std::sin(u0), co = std::cos(u0);
        // derivatives of sin cycle through sin, cos, -sin, -cos
        double cyc[4] = {s, co, -s, -co};
        int shift = fn == Builtin::sin ? 0 : 1;
        double inv_fact = 1;
        for (int k = 0; k <= K; ++k) {
          c[k] = cyc[(k + shift) % 4] * inv_fact;
          inv_fact /= (k + 1);
        }
        break;
      }
      case Builtin::sqrt1p: {
        double s = 1 + u0;
        if (!(s > 0)) throw EvaluationError("sqrt1p of a value <= -1");
        double b = 1, p = std::sqrt(s);
        for (int k = 0; k <= K; ++k) {
          c[k] = b * p;
          b *= (0.5 - k) / (k + 1);
          p /= s;
        }
        break;
      }
      case Builtin::bump: break;
    }
  } else {
    if (fn == Builtin::sqrt1p && u0 <= -1) throw EvaluationError("sqrt1p of a value <= -1");
    if (u0 != 0)
      throw InexactEvaluation(to_string(fn) + " has no exact rational series at " + ultrajet::to_string(u0));
    T inv_fact(1);
    switch (fn) {
      case Builtin::exp:
        for (int k = 0; k <= K; ++k) {
          c[k] = inv_fact;
          inv_fact /= (k + 1);
        }
        break;
      case Builtin::sin:
      case Builtin::cos: {
        int shift = fn == Builtin::sin ? 0 : 1;
        for (int k = 0; k <= K; ++k) {
          int phase = (k + shift) % 4;
          c[k] = phase == 1 ? inv_fact : phase == 3 ? T(-inv_fact) : T(0);
          inv_fact /= (k + 1);
        }
        break;
      }
      case Builtin::sqrt1p: {
        T b(1);
        for (int k = 0; k <= K; ++k) {
          c[k] = b;
          b *= (T(1, 2) - k) / (k + 1);
        }
        break;
      }
      case Builtin::bump: break;
    }
  }
  return c;
}

template <class T>
Jet<T> apply_builtin(Builtin fn, const Jet<T>& u) {
  const T u0 = u.at(0, 0);
  int K = u.order();
  if (fn == Builtin::bump) {
    using std::abs;
    if (abs(u0) >= 1) return Jet<T>(u.base_point(), 1, K);
    if constexpr (!std::is_floating_point_v<T>) {
      throw InexactEvaluation("bump has no exact rational series inside its support");
    } else {
      Jet<T> w = Jet<T>::constant(u.base_point(), {T(1)}, K) - mul(u, u);
      Jet<T> arg = -reciprocal(w);
      T a0 = arg.at(0, 0);
      return compose(univariate(a0, builtin_series(Builtin::exp, a0, K)), arg);
    }
  }
  return compose(univariate(u0, builtin_series(fn, u0, K)), u);
}

template <class T>
Jet<T> jet_power(const Jet<T>& base, int e) {
  if (e < 0) {
    if (is_zero_value(base.at(0, 0))) throw EvaluationError("negative power of a value that is zero");
    return jet_power(reciprocal(base), -e);
  }
  Jet<T> result = Jet<T>::constant(base.base_point(), {T(1)}, base.order());
  Jet<T> b = base;
  while (e) {
    if (e & 1) result = mul(result, b);
    e >>= 1;
    if (e) b = mul(b, b);
  }
  return result;
}

template <class T>
T number_as(const Rational& q) {
  if constexpr (std::is_floating_point_v<T>)
    return to_double(q);
  else
    return q;
}

template <class T>
class JetEvaluator {
 public:
  JetEvaluator(const std::vector<T>& point, int K) : point_(point), K_(K) {}

  Jet<T> eval(const NodePtr& n) {
    if (auto it = memo_.find(n.get()); it != memo_.end()) return it->second;
    Jet<T> r = eval_uncached(*n);
    if (n.use_count() > 1 || !n->args.empty()) memo_.emplace(n.get(), r);
    return r;
  }

 private:
  Jet<T> eval_uncached(const Node& n) {
    switch (n.kind) {
      case Node::Kind::number: return Jet<T>::constant(point_, {number_as<T>(n.number)}, K_);
      case Node::Kind::variable: return Jet<T>::variable(point_, n.index, K_);
      case Node::Kind::neg: return -eval(n.args[0]);
      case Node::Kind::add: return eval(n.args[0]) + eval(n.args[1]);
      case Node::Kind::sub: return eval(n.args[0]) - eval(n.args[1]);
      case Node::Kind::mul: return mul(eval(n.args[0]), eval(n.args[1]));
      case Node::Kind::div: {
        Jet<T> den = eval(n.args[1]);
        if (is_zero_value(den.at(0, 0))) throw EvaluationError("division by zero");
        return mul(eval(n.args[0]), reciprocal(den));
      }
      case Node::Kind::pow: return jet_power(eval(n.args[0]), n.index);
      case Node::Kind::call: return apply_builtin(n.fn, eval(n.args[0]));
      case Node::Kind::vector: {
        std::vector<Jet<T>> parts;
        for (const auto& a : n.args) parts.push_back(eval(a));
        return Jet<T>::stack(parts);
      }
    }
    throw EvaluationError("unknown node");
  }

  const std::vector<T>& point_;
  int K_;
  std::unordered_map<const Node*, Jet<T>> memo_;
};

class ValueEvaluator {
 public:
  explicit ValueEvaluator(const std::vector<double>& point) : point_(point) {}

  double eval(const NodePtr& p) {
    if (auto it = memo_.find(p.get()); it != memo_.end()) return it->second;
    double r = eval_uncached(*p);
    memo_.emplace(p.get(), r);
    return r;
  }

 private:
  double eval_uncached(const Node& n) {
    switch (n.kind) {
      case Node::Kind::number: return to_double(n.number);
      case Node::Kind::variable: return point_[n.index];
      case Node::Kind::neg: return -eval(n.args[0]);
      case Node::Kind::add: return eval(n.args[0]) + eval(n.args[1]);
      case Node::Kind::sub: return eval(n.args[0]) - eval(n.args[1]);
      case Node::Kind::mul: return eval(n.args[0]) * eval(n.args[1]);
      case Node::Kind::div: {
        double d = eval(n.args[1]);
        if (d == 0) throw EvaluationError("division by zero");
        return eval(n.args[0]) / d;
      }
      case Node::Kind::pow: {
        double b = eval(n.args[0]);
        if (n.index < 0 && b == 0) throw EvaluationError("negative power of a value that is zero");
        double r = 1, x = n.index < 0 ? 1 / b : b;
        for (int e = std::abs(n.index); e; e >>= 1) {
          if (e & 1) r *= x;
          x *= x;
        }
        return r;
      }
      case Node::Kind::call: {
        double u = eval(n.args[0]);
        switch (n.fn) {
          case Builtin::exp: return std::exp(u);
          case Builtin::sin: return std::sin(u);
          case Builtin::cos: return std::cos(u);
          case Builtin::sqrt1p:
            if (!(u > -1)) throw EvaluationError("sqrt1p of a value <= -1");
            return std::sqrt(1 + u);
          case Builtin::bump: return std::abs(u) < 1 ? std::exp(-1 / (1 - u * u)) : 0.0;
        }
        return 0;
      }
      case Node::Kind::vector: throw EvaluationError("vector node in scalar context");
    }
    return 0;
  }

  const std::vector<double>& point_;
  std::unordered_map<const Node*, double> memo_;
};

}  // namespace

// ---------------------------------------------------------------- Expr

Expr::Expr(NodePtr root, int arity) : root_(std::move(root)), arity_(arity) {}

Expr Expr::parse(std::string_view text, int arity) {
  if (arity < 0) throw ArityError("negative arity");
  Parser p(text, arity);
  return Expr(p.parse_top(), arity);
}

Expr Expr::number(const Rational& v, int arity) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::number;
  n->number = v;
  return Expr(n, arity);
}

Expr Expr::variable(int i, int arity) {
  if (i < 0 || i >= arity) throw ArityError("variable index out of range");
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::variable;
  n->index = i;
  return Expr(n, arity);
}

Expr Expr::call(Builtin fn, const Expr& arg) {
  if (arg.target_dim() != 1) throw DimensionMismatch("builtin argument must be scalar");
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::call;
  n->fn = fn;
  n->args = {arg.root_};
  return Expr(n, arg.arity_);
}

Expr Expr::vector(const std::vector<Expr>& parts) {
  if (parts.empty()) throw DimensionMismatch("empty vector expression");
  std::vector<NodePtr> args;
  for (const auto& p : parts) {
    if (p.arity() != parts[0].arity()) throw ArityError("vector components have different arities");
    if (p.target_dim() != 1) throw DimensionMismatch("vector components must be scalar");
    args.push_back(p.root_);
  }
  return Expr(make_node(Node::Kind::vector, std::move(args)), parts[0].arity());
}

int Expr::target_dim() const {
  if (!root_) return 0;
  return root_->kind == Node::Kind::vector ? static_cast<int>(root_->args.size()) : 1;
}

Expr Expr::component(int i) const {
  if (i < 0 || i >= target_dim()) throw DimensionMismatch("component index out of range");
  if (root_->kind != Node::Kind::vector) return *this;
  return Expr(root_->args[i], arity_);
}

std::string Expr::to_string() const {
  std::string out;
  if (root_) print(*root_, out);
  return out;
}

namespace {

Expr binary_expr(Node::Kind k, const Expr& a, const Expr& b) {
  if (a.arity() != b.arity()) throw ArityError("operands have different arities");
  if (a.target_dim() != 1 || b.target_dim() != 1) throw DimensionMismatch("arithmetic needs scalar operands");
  return Expr(make_node(k, {a.root_ptr(), b.root_ptr()}), a.arity());
}

NodePtr substitute_node(const NodePtr& n, const std::vector<NodePtr>& args,
                        std::unordered_map<const Node*, NodePtr>& memo) {
  if (auto it = memo.find(n.get()); it != memo.end()) return it->second;
  NodePtr out;
  if (n->kind == Node::Kind::variable) {
    out = args[n->index];
  } else if (n->args.empty()) {
    out = n;
  } else {
    auto copy = std::make_shared<Node>(*n);
    for (auto& a : copy->args) a = substitute_node(a, args, memo);
    out = copy;
  }
  memo.emplace(n.get(), out);
  return out;
}

}  // namespace

Expr operator+(const Expr& a, const Expr& b) { return binary_expr(Node::Kind::add, a, b); }
Expr operator-(const Expr& a, const Expr& b) { return binary_expr(Node::Kind::sub, a, b); }
Expr operator*(const Expr& a, const Expr& b) { return binary_expr(Node::Kind::mul, a, b); }
Expr operator/(const Expr& a, const Expr& b) { return binary_expr(Node::Kind::div, a, b); }

Expr operator-(const Expr& a) {
  if (a.target_dim() != 1) throw DimensionMismatch("negation needs a scalar operand");
  return Expr(make_node(Node::Kind::neg, {a.root_ptr()}), a.arity());
}

Expr pow(const Expr& a, int exponent) {
  if (a.target_dim() != 1) throw DimensionMismatch("power needs a scalar operand");
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::pow;
  n->index = exponent;
  n->args = {a.root_ptr()};
  return Expr(n, a.arity());
}

Expr substitute(const Expr& f, const std::vector<Expr>& args) {
  if (static_cast<int>(args.size()) != f.arity()) throw ArityError("substitution needs one expression per variable");
  if (args.empty()) return f;
  std::vector<NodePtr> nodes;
  for (const auto& a : args) {
    if (a.arity() != args[0].arity()) throw ArityError("substituted expressions have different arities");
    if (a.target_dim() != 1) throw DimensionMismatch("substituted expressions must be scalar");
    nodes.push_back(a.root_ptr());
  }
  std::unordered_map<const Node*, NodePtr> memo;
  return Expr(substitute_node(f.root_ptr(), nodes, memo), args[0].arity());
}

template <class T>
Jet<T> eval_jet(const Expr& e, const std::vector<T>& point, int K) {
  if (!e.valid()) throw EvaluationError("empty expression");
  if (static_cast<int>(point.size()) != e.arity())
    throw ArityError("point has dimension " + std::to_string(point.size()) + ", expression arity is " +
                     std::to_string(e.arity()));
  if (K < 0) throw OrderMismatch("negative order");
  JetEvaluator<T> ev(point, K);
  return ev.eval(e.root_ptr());
}

template Jet<double> eval_jet(const Expr&, const std::vector<double>&, int);
template Jet<Rational> eval_jet(const Expr&, const std::vector<Rational>&, int);

Jet<double> EvaluatedJet::as_float() const {
  if (exact()) return std::get<0>(jet).convert<double>();
  return std::get<1>(jet);
}

EvaluatedJet evaluate(const Expr& e, const std::vector<Rational>& point, int K, ScalarMode mode) {
  EvaluatedJet out{Jet<double>{}, false, {}};
  if (mode == ScalarMode::rational) {
    try {
      out.jet = eval_jet<Rational>(e, point, K);
      return out;
    } catch (const InexactEvaluation& ex) {
      out.degraded = true;
      out.warning = std::string("rational evaluation unavailable, degraded to float: ") + ex.what();
    }
  }
  std::vector<double> p;
  for (const auto& q : point) p.push_back(to_double(q));
  out.jet = eval_jet<double>(e, p, K);
  return out;
}

std::vector<double> evaluate_value(const Expr& e, const std::vector<double>& point) {
  if (static_cast<int>(point.size()) != e.arity()) throw ArityError("point dimension does not match arity");
  ValueEvaluator ev(point);
  if (e.root().kind == Node::Kind::vector) {
    std::vector<double> out;
    for (const auto& a : e.root().args) out.push_back(ev.eval(a));
    return out;
  }
  return {ev.eval(e.root_ptr())};
}

}  // namespace ultrajet
