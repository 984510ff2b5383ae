#include "ultrajet/weightseq.hpp"

#include "ultrajet/errors.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <limits>
#include <mutex>
#include <sstream>

namespace ultrajet {

namespace {

constexpr double kLogTol = 1e-12;

bool log_leq(double a, double b) { return a <= b + kLogTol * std::max(1.0, std::max(std::abs(a), std::abs(b))); }

std::string format_param(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

std::vector<Rational> parse_value_list(std::string_view text) {
  std::vector<Rational> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto comma = text.find(',', pos);
    auto item = text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
    try {
      out.push_back(parse_rational(item));
    } catch (const std::invalid_argument& e) {
      throw InvalidSequence(e.what());
    }
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

double parse_real(std::string_view text, const char* what) {
  try {
    return to_double(parse_rational(text));
  } catch (const std::invalid_argument&) {
    throw InvalidSequence(std::string("bad ") + what + " parameter '" + std::string(text) + "'");
  }
}

}  // namespace

// ---------------------------------------------------------------- WeightSequence

struct WeightSequence::State {
  SequenceKind kind;
  double param = 0;
  int integer_exponent = -1;  // gevrey with integral s
  std::vector<Rational> table;
  std::vector<double> table_logs;
  mutable std::mutex mu;
  mutable std::deque<Rational> exact_cache;

  bool exact() const {
    return kind == SequenceKind::constant_one || kind == SequenceKind::table ||
           (kind == SequenceKind::gevrey && integer_exponent >= 0);
  }
};

WeightSequence::WeightSequence(std::shared_ptr<State> s) : state_(std::move(s)) {}

WeightSequence WeightSequence::gevrey(double s) {
  if (!(s >= 0) || !std::isfinite(s)) throw InvalidSequence("gevrey exponent must be a finite real >= 0");
  auto st = std::make_shared<State>();
  st->kind = SequenceKind::gevrey;
  st->param = s;
  if (s == std::floor(s) && s <= 64) st->integer_exponent = static_cast<int>(s);
  return WeightSequence(st);
}

WeightSequence WeightSequence::qsquare(double q) {
  if (!(q > 1) || !std::isfinite(q)) throw InvalidSequence("qsquare base must be a finite real > 1");
  auto st = std::make_shared<State>();
  st->kind = SequenceKind::qsquare;
  st->param = q;
  return WeightSequence(st);
}

WeightSequence WeightSequence::constant_one() {
  auto st = std::make_shared<State>();
  st->kind = SequenceKind::constant_one;
  return WeightSequence(st);
}

WeightSequence WeightSequence::table(std::vector<Rational> values) {
  if (values.empty()) throw InvalidSequence("empty table");
  for (const auto& v : values)
    if (v <= 0) throw InvalidSequence("table values must be positive");
  if (values[0] != 1) throw InvalidSequence("M_0 must equal 1");
  if (values.size() > 1 && values[1] < 1) throw InvalidSequence("M_1 must be >= 1");
  auto st = std::make_shared<State>();
  st->kind = SequenceKind::table;
  for (const auto& v : values) st->table_logs.push_back(log_positive(v));
  st->table = std::move(values);
  return WeightSequence(st);
}

WeightSequence WeightSequence::parse(std::string_view text) {
  auto colon = text.find(':');
  std::string_view head = text.substr(0, colon);
  std::string_view rest = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
  if (head == "one" || head == "constant_one") {
    if (colon != std::string_view::npos) throw InvalidSequence("'one' takes no parameter");
    return constant_one();
  }
  if (colon == std::string_view::npos) throw InvalidSequence("unknown sequence '" + std::string(text) + "'");
  if (head == "gevrey") return gevrey(parse_real(rest, "gevrey"));
  if (head == "qsquare") return qsquare(parse_real(rest, "qsquare"));
  if (head == "table") return table(parse_value_list(rest));
  throw InvalidSequence("unknown sequence kind '" + std::string(head) + "'");
}

SequenceKind WeightSequence::kind() const { return state_->kind; }
double WeightSequence::parameter() const { return state_->param; }
bool WeightSequence::exact() const { return state_->exact(); }

std::string WeightSequence::to_string() const {
  switch (state_->kind) {
    case SequenceKind::gevrey: return "gevrey:" + format_param(state_->param);
    case SequenceKind::qsquare: return "qsquare:" + format_param(state_->param);
    case SequenceKind::constant_one: return "one";
    case SequenceKind::table: {
      std::string s = "table:";
      for (std::size_t i = 0; i < state_->table.size(); ++i) {
        if (i) s += ",";
        s += ultrajet::to_string(state_->table[i]);
      }
      return s;
    }
  }
  return {};
}

const Rational& WeightSequence::exact_value(int k) const {
  const State& s = *state_;
  if (!s.exact()) throw std::logic_error("sequence " + to_string() + " has no exact values");
  if (k < 0) throw std::out_of_range("negative index");
  std::lock_guard<std::mutex> lock(s.mu);
  if (s.exact_cache.empty()) s.exact_cache.emplace_back(1);
  while (static_cast<int>(s.exact_cache.size()) <= k) {
    int i = static_cast<int>(s.exact_cache.size());
    switch (s.kind) {
      case SequenceKind::constant_one: s.exact_cache.emplace_back(1); break;
      case SequenceKind::table:
        s.exact_cache.push_back(s.table[std::min<std::size_t>(i, s.table.size() - 1)]);
        break;
      case SequenceKind::gevrey: {
        Rational next = s.exact_cache.back();
        for (int e = 0; e < s.integer_exponent; ++e) next *= i;
        s.exact_cache.push_back(std::move(next));
        break;
      }
      case SequenceKind::qsquare: break;
    }
  }
  return s.exact_cache[k];
}

double WeightSequence::log_value(int k) const {
  const State& s = *state_;
  if (k < 0) throw std::out_of_range("negative index");
  switch (s.kind) {
    case SequenceKind::gevrey: return s.param * std::lgamma(k + 1.0);
    case SequenceKind::qsquare: return static_cast<double>(k) * k * std::log(s.param);
    case SequenceKind::constant_one: return 0;
    case SequenceKind::table: return s.table_logs[std::min<std::size_t>(k, s.table_logs.size() - 1)];
  }
  return 0;
}

double WeightSequence::value(int k) const {
  if (exact()) return to_double(exact_value(k));
  return std::exp(log_value(k));
}

double WeightSequence::log_factorial_weight(int k) const { return std::lgamma(k + 1.0) + log_value(k); }

// ---------------------------------------------------------------- properties

std::string to_string(Property p) {
  switch (p) {
    case Property::log_convex: return "log_convex";
    case Property::weakly_log_convex: return "weakly_log_convex";
    case Property::derivation_closed: return "derivation_closed";
    case Property::moderate_growth: return "moderate_growth";
  }
  return {};
}

Property parse_property(std::string_view text) {
  for (auto p : {Property::log_convex, Property::weakly_log_convex, Property::derivation_closed,
                 Property::moderate_growth})
    if (text == to_string(p)) return p;
  throw std::invalid_argument("unknown property '" + std::string(text) + "'");
}

namespace {

// a_j * a_k <= a_l * a_m style comparisons, exact when possible.
bool products_leq(const WeightSequence& m, std::initializer_list<int> lhs, std::initializer_list<int> rhs,
                  const Integer& lhs_factor = 1, const Integer& rhs_factor = 1) {
  if (m.exact()) {
    Rational a = Rational(lhs_factor), b = Rational(rhs_factor);
    for (int i : lhs) a *= m.exact_value(i);
    for (int i : rhs) b *= m.exact_value(i);
    return a <= b;
  }
  double a = log_positive(lhs_factor), b = log_positive(rhs_factor);
  for (int i : lhs) a += m.log_value(i);
  for (int i : rhs) b += m.log_value(i);
  return log_leq(a, b);
}

void finish_supremum(PropertyVerdict& v, const std::vector<Witness>& argmax, int K, const SupremumOptions& opts) {
  // running_estimates[i] is the supremum at horizon i+1 (entries below the
  // first meaningful horizon repeat the first value).
  const auto& e = v.running_estimates;
  double est = e.back();
  v.constant_estimate = est;
  int q = std::max(1, K / 4);
  int last = static_cast<int>(e.size()) - 1;
  int first = std::max(0, last - q);
  double variation = est > 0 ? (est - e[first]) / (static_cast<double>(last - first == 0 ? 1 : last - first) * est) : 0;
  v.stabilized = variation < opts.stabilization_tolerance;
  v.holds_up_to_K = v.stabilized && est <= opts.divergence_threshold;
  if (!v.holds_up_to_K) v.witness = argmax.back();
}

}  // namespace

PropertyVerdict check_property(const WeightSequence& m, Property p, int K, const SupremumOptions& opts) {
  if (K < 2) throw PreconditionFailed("check_property needs K >= 2");
  PropertyVerdict v;
  v.property = p;
  v.horizon = K;
  switch (p) {
    case Property::log_convex:
    case Property::weakly_log_convex: {
      v.holds_up_to_K = true;
      for (int k = 1; k <= K - 1; ++k) {
        bool ok = p == Property::log_convex ? products_leq(m, {k, k}, {k - 1, k + 1})
                                            : products_leq(m, {k, k}, {k - 1, k + 1}, Integer(k), Integer(k + 1));
        if (!ok) {
          v.holds_up_to_K = false;
          v.witness = Witness{k, k};
          break;
        }
      }
      return v;
    }
    case Property::derivation_closed: {
      double best = -std::numeric_limits<double>::infinity();
      Witness arg{1, 2};
      std::vector<Witness> args;
      for (int k = 1; k <= K; ++k) {
        double r = (m.log_value(k + 1) - m.log_value(k)) / k;
        if (r > best) {
          best = r;
          arg = {k, k + 1};
        }
        v.running_estimates.push_back(std::exp(best));
        args.push_back(arg);
      }
      finish_supremum(v, args, K, opts);
      return v;
    }
    case Property::moderate_growth: {
      // qsquare exponents in units of log q
      const bool q_units = m.kind() == SequenceKind::qsquare;
      auto exponent = [&](int n, int j, int k) {
        if (q_units) return static_cast<double>(n * n - j * j - k * k) / n;
        return (m.log_value(n) - m.log_value(j) - m.log_value(k)) / n;
      };
      auto estimate = [&](double e) { return q_units ? std::pow(m.parameter(), e) : std::exp(e); };
      double best = 0;  // j = 0 contributes exactly 1
      Witness arg{0, 1};
      std::vector<Witness> args;
      for (int n = 1; n <= K; ++n) {
        for (int j = 1; 2 * j <= n; ++j) {
          int k = n - j;
          double r = exponent(n, j, k);
          if (r > best) {
            best = r;
            arg = {j, k};
          }
        }
        v.running_estimates.push_back(estimate(best));
        args.push_back(arg);
      }
      finish_supremum(v, args, K, opts);
      return v;
    }
  }
  return v;
}

std::string to_string(Trend t) {
  switch (t) {
    case Trend::diverging: return "diverging";
    case Trend::converging: return "converging";
    case Trend::undecided: return "undecided";
  }
  return {};
}

PartialSumsReport quasianalytic_partial_sums(const WeightSequence& m, int K, const TrendOptions& opts) {
  if (K < 10) throw PreconditionFailed("quasianalytic_partial_sums needs K >= 10");
  PartialSumsReport r;
  double sum = 0;
  std::vector<double> xs, ys;
  for (int k = 1; k <= K; ++k) {
    double log_a = -m.log_factorial_weight(k) / k;
    sum += std::exp(log_a);
    r.partial_sums.push_back(sum);
    if (2 * k >= K) {
      xs.push_back(std::log(static_cast<double>(k)));
      ys.push_back(log_a);
    }
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= xs.size();
  my /= ys.size();
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  r.tail_slope = sxy / sxx;
  if (r.tail_slope >= opts.diverging_slope)
    r.trend = Trend::diverging;
  else if (r.tail_slope < opts.converging_slope)
    r.trend = Trend::converging;
  else
    r.trend = Trend::undecided;
  return r;
}

namespace {

// Calls visit(parts) for all compositions of k into positive parts.
void for_each_composition(int k, const std::function<bool(const std::vector<int>&)>& visit) {
  std::vector<int> parts;
  std::function<bool(int)> rec = [&](int remaining) {
    if (remaining == 0) return visit(parts);
    for (int a = 1; a <= remaining; ++a) {
      parts.push_back(a);
      bool go_on = rec(remaining - a);
      parts.pop_back();
      if (!go_on) return false;
    }
    return true;
  };
  rec(k);
}

}  // namespace

DerivedInequalities verify_derived_inequalities(const WeightSequence& m, int K) {
  if (!check_property(m, Property::log_convex, std::max(K, 2)).holds_up_to_K)
    throw PreconditionFailed("sequence is not log-convex up to K=" + std::to_string(K));
  if (!check_property(m, Property::derivation_closed, std::max(K, 2)).holds_up_to_K)
    throw PreconditionFailed("sequence is not derivation closed up to K=" + std::to_string(K));

  DerivedInequalities d;
  d.horizon = K;
  for (int n = 0; n <= K && d.algebra_ok; ++n) {
    for (int j = 0; 2 * j <= n; ++j) {
      if (!products_leq(m, {j, n - j}, {n})) {
        d.algebra_ok = false;
        d.algebra_witness = Witness{j, n - j};
        break;
      }
    }
  }

  d.composition_horizon = std::min(K, 12);
  for (int k = 1; k <= d.composition_horizon && d.composition_ok; ++k) {
    for_each_composition(k, [&](const std::vector<int>& parts) {
      int j = static_cast<int>(parts.size());
      bool ok;
      if (m.exact()) {
        Rational lhs = pow(m.exact_value(1), j) * m.exact_value(k);
        Rational rhs = m.exact_value(j);
        for (int a : parts) rhs *= m.exact_value(a);
        ok = rhs <= lhs;
      } else {
        double lhs = j * m.log_value(1) + m.log_value(k);
        double rhs = m.log_value(j);
        for (int a : parts) rhs += m.log_value(a);
        ok = log_leq(rhs, lhs);
      }
      if (!ok) {
        d.composition_ok = false;
        d.composition_witness = parts;
      }
      return ok;
    });
  }

  double c_log = 0;
  for (int k = 0; k <= K; ++k)
    for (int j = 1; j + k <= K; ++j) {
      double r = (m.log_factorial_weight(k + j) - m.log_factorial_weight(k)) / (static_cast<double>(j) * (k + j));
      c_log = std::max(c_log, r);
    }
  d.derivation_constant = std::exp(c_log);
  return d;
}

// ---------------------------------------------------------------- RateSequence

struct RateSequence::State {
  RateKind kind;
  double param = 0;
  Rational rparam;
  std::vector<Rational> table;
  mutable std::mutex mu;
  mutable std::deque<Rational> cache;
};

RateSequence::RateSequence(std::shared_ptr<State> s) : state_(std::move(s)) {}

RateSequence RateSequence::factorial_decay(double rho) {
  if (!(rho > 0) || !std::isfinite(rho)) throw InvalidSequence("factorial_decay needs rho > 0");
  auto st = std::make_shared<State>();
  st->kind = RateKind::factorial_decay;
  st->param = rho;
  st->rparam = to_rational(rho);
  return RateSequence(st);
}

RateSequence RateSequence::superexp(double c) {
  if (!(c > 0 && c < 1)) throw InvalidSequence("superexp needs c in (0,1)");
  auto st = std::make_shared<State>();
  st->kind = RateKind::superexp;
  st->param = c;
  st->rparam = to_rational(c);
  return RateSequence(st);
}

RateSequence RateSequence::geometric(double sigma) {
  if (!(sigma > 0) || !std::isfinite(sigma)) throw InvalidSequence("geometric needs sigma > 0");
  auto st = std::make_shared<State>();
  st->kind = RateKind::geometric;
  st->param = sigma;
  st->rparam = to_rational(sigma);
  return RateSequence(st);
}

RateSequence RateSequence::table(std::vector<Rational> values) {
  if (values.empty()) throw InvalidSequence("empty rate table");
  for (const auto& v : values)
    if (v <= 0) throw InvalidSequence("rate values must be positive");
  auto st = std::make_shared<State>();
  st->kind = RateKind::table;
  st->table = std::move(values);
  return RateSequence(st);
}

RateSequence RateSequence::parse(std::string_view text) {
  auto colon = text.find(':');
  if (colon == std::string_view::npos) throw InvalidSequence("rate sequence needs 'kind:param'");
  auto head = text.substr(0, colon), rest = text.substr(colon + 1);
  if (head == "factorial_decay") return factorial_decay(parse_real(rest, "factorial_decay"));
  if (head == "superexp") return superexp(parse_real(rest, "superexp"));
  if (head == "geometric") return geometric(parse_real(rest, "geometric"));
  if (head == "table") return table(parse_value_list(rest));
  throw InvalidSequence("unknown rate kind '" + std::string(head) + "'");
}

RateKind RateSequence::kind() const { return state_->kind; }
double RateSequence::parameter() const { return state_->param; }

std::string RateSequence::to_string() const {
  switch (state_->kind) {
    case RateKind::factorial_decay: return "factorial_decay:" + format_param(state_->param);
    case RateKind::superexp: return "superexp:" + format_param(state_->param);
    case RateKind::geometric: return "geometric:" + format_param(state_->param);
    case RateKind::table: {
      std::string s = "table:";
      for (std::size_t i = 0; i < state_->table.size(); ++i) {
        if (i) s += ",";
        s += ultrajet::to_string(state_->table[i]);
      }
      return s;
    }
  }
  return {};
}

const Rational& RateSequence::value(int k) const {
  const State& s = *state_;
  if (k < 0) throw std::out_of_range("negative index");
  std::lock_guard<std::mutex> lock(s.mu);
  while (static_cast<int>(s.cache.size()) <= k) {
    int i = static_cast<int>(s.cache.size());
    switch (s.kind) {
      case RateKind::factorial_decay:
        s.cache.push_back(i == 0 ? Rational(1) : Rational(s.cache.back() / (s.rparam * i)));
        break;
      case RateKind::superexp: s.cache.push_back(pow(s.rparam, i * i)); break;
      case RateKind::geometric: s.cache.push_back(i == 0 ? Rational(1) : Rational(s.cache.back() / s.rparam)); break;
      case RateKind::table: s.cache.push_back(s.table[std::min<std::size_t>(i, s.table.size() - 1)]); break;
    }
  }
  return s.cache[k];
}

double RateSequence::log_value(int k) const {
  const State& s = *state_;
  switch (s.kind) {
    case RateKind::factorial_decay: return -k * std::log(s.param) - std::lgamma(k + 1.0);
    case RateKind::superexp: return static_cast<double>(k) * k * std::log(s.param);
    case RateKind::geometric: return -k * std::log(s.param);
    case RateKind::table: return log_positive(value(k));
  }
  return 0;
}

RateVerdict rate_membership(const RateSequence& r, int K, const std::vector<double>& sigma_set) {
  if (K < 10) throw PreconditionFailed("rate_membership needs K >= 10");
  if (sigma_set.empty()) throw PreconditionFailed("empty sigma set");
  RateVerdict v;
  v.horizon = K;
  for (double sigma : sigma_set) {
    if (!(sigma > 0)) throw PreconditionFailed("sigma values must be positive");
    Rational s = to_rational(sigma);
    for (int k = K / 2; k < K; ++k) {
      if (!(r.value(k + 1) * s < r.value(k))) {
        v.in_R = false;
        v.failing_sigma = sigma;
        v.failing_index = k;
        break;
      }
    }
    if (!v.in_R) break;
  }
  for (int n = 0; n <= K && v.submultiplicative; ++n)
    for (int k = 0; 2 * k <= n; ++k)
      if (r.value(n) > r.value(k) * r.value(n - k)) {
        v.submultiplicative = false;
        v.submultiplicative_witness = Witness{k, n - k};
        break;
      }
  v.in_R_prime = v.in_R && v.submultiplicative;
  return v;
}

ProjectiveProbe projective_probe(const std::vector<std::pair<int, double>>& table, const RateSequence& r) {
  int K = 0;
  for (const auto& [order, value] : table) {
    if (order < 0) throw PreconditionFailed("negative order in table");
    if (!(value >= 0)) throw PreconditionFailed("table entries must be non-negative");
    K = std::max(K, order);
  }
  auto membership = rate_membership(r, std::max(2 * K, 40), {1.0, 2.0, 4.0, 8.0});
  if (!membership.in_R_prime) throw PreconditionFailed("rate sequence " + r.to_string() + " is not in R'");

  const double neg_inf = -std::numeric_limits<double>::infinity();
  std::vector<double> log_b(K + 1, neg_inf);
  for (const auto& [order, value] : table)
    if (value > 0) log_b[order] = std::max(log_b[order], std::log(value));

  ProjectiveProbe p;
  p.horizon = K;
  bool any = false;
  double log_sigma = neg_inf;
  for (int k = 0; k <= K; ++k) {
    if (log_b[k] == neg_inf) continue;
    any = true;
    if (k >= 1) log_sigma = std::max(log_sigma, log_b[k] / k);
  }
  if (!any) throw EmptyInput("all table entries vanish (sigma_star = 0)");
  p.sigma_star = log_sigma == neg_inf ? 0 : std::exp(log_sigma);

  auto sup_log = [&](auto&& term) {
    double best = neg_inf;
    for (int k = 0; k <= K; ++k)
      if (log_b[k] != neg_inf) best = std::max(best, term(k));
    return best;
  };
  double ls = log_sigma == neg_inf ? 0 : log_sigma;
  double log_c1 = sup_log([&](int k) { return log_b[k] - k * ls; });
  double log_c2 = sup_log([&](int k) { return r.log_value(k) + log_b[k]; });
  p.bound_by_sigma = std::exp(log_c1);
  p.bound_by_rate = std::exp(log_c2);

  // Geometric grid delta = 2^(i/8), i = -64..64.
  double best_delta = 0, best_bound = 0;
  for (int i = -64; i <= 64; ++i) {
    double log_delta = i / 8.0 * std::log(2.0);
    double b = sup_log([&](int k) { return k * log_delta + r.log_value(k) + log_b[k]; });
    if (log_leq(b, log_c1)) {
      best_delta = std::exp(log_delta);
      best_bound = std::exp(b);
    }
  }
  p.delta_star = best_delta;
  p.bound_with_delta = best_bound;
  p.implications_ok = std::isfinite(p.bound_by_sigma) && std::isfinite(p.bound_by_rate) && best_delta > 0;
  return p;
}

}  // namespace ultrajet
