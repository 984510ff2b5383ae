#include "ultrajet/classnorms.hpp"

#include "ultrajet/errors.hpp"
#include "ultrajet/linalg.hpp"
#include "ultrajet/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace ultrajet {

// ---------------------------------------------------------------- sampling

SampledFunction::SampledFunction(GridSpec grid, int order, int target_dim, std::vector<Jet<double>> jets,
                                 std::optional<Expr> source)
    : grid_(std::move(grid)), order_(order), m_(target_dim), jets_(std::move(jets)), source_(std::move(source)) {
  if (jets_.size() != grid_.node_count()) throw DimensionMismatch("one jet per grid node is required");
  for (const auto& j : jets_) {
    if (j.n() != grid_.dims() || j.m() != m_) throw DimensionMismatch("jet dimensions differ from the grid");
    if (j.order() != order_) throw OrderMismatch("jets must share one order");
  }
  support_ = detect_support(grid_, jets_);
}

bool SampledFunction::spot_check(std::uint64_t seed, int samples, double tol) const {
  if (!source_) return true;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, jets_.size() - 1);
  for (int s = 0; s < samples; ++s) {
    std::size_t node = pick(rng);
    Jet<double> fresh = eval_jet<double>(*source_, grid_.coordinates(node), order_);
    const Jet<double>& stored = jets_[node];
    for (int c = 0; c < m_; ++c)
      for (std::size_t p = 0; p < stored.size(); ++p) {
        double a = fresh.at(c, p), b = stored.at(c, p);
        if (std::abs(a - b) > tol * std::max(1.0, std::abs(b))) return false;
      }
  }
  return true;
}

std::optional<SupportInfo> detect_support(const GridSpec& grid, const std::vector<Jet<double>>& jets) {
  int n = grid.dims();
  SupportInfo info;
  std::vector<int> lo_idx(n, std::numeric_limits<int>::max()), hi_idx(n, -1);
  bool any = false;
  for (std::size_t node = 0; node < jets.size(); ++node) {
    if (jets[node].is_zero()) continue;
    any = true;
    auto idx = grid.unflatten(node);
    double r = 0;
    for (int d = 0; d < n; ++d) {
      if (idx[d] < 2 || idx[d] > grid.axis(d).points - 3) return std::nullopt;
      lo_idx[d] = std::min(lo_idx[d], idx[d]);
      hi_idx[d] = std::max(hi_idx[d], idx[d]);
      r = std::max(r, std::abs(grid.axis(d).node(idx[d])) + grid.axis(d).step());
    }
    info.radius = std::max(info.radius, r);
  }
  info.lo.resize(n);
  info.hi.resize(n);
  for (int d = 0; d < n; ++d) {
    if (any) {
      info.lo[d] = grid.axis(d).node(lo_idx[d] - 1);
      info.hi[d] = grid.axis(d).node(hi_idx[d] + 1);
    } else {
      info.lo[d] = info.hi[d] = 0;
    }
  }
  return info;
}

SampledFunction sample(const Expr& e, const GridSpec& grid, int K) {
  if (e.arity() != grid.dims())
    throw ArityError("expression arity " + std::to_string(e.arity()) + " does not match grid dimension " +
                     std::to_string(grid.dims()));
  std::vector<Jet<double>> jets(grid.node_count());
  parallel_for(jets.size(), [&](std::size_t node) {
    auto x = grid.coordinates(node);
    try {
      jets[node] = eval_jet<double>(e, x, K);
    } catch (const EvaluationError& err) {
      std::string where;
      for (std::size_t i = 0; i < x.size(); ++i) where += (i ? ", " : "") + std::to_string(x[i]);
      throw EvaluationError(std::string(err.what()) + " at node (" + where + ")");
    }
  });
  return SampledFunction(grid, K, e.target_dim(), std::move(jets), e);
}

// ---------------------------------------------------------------- class specs

std::string to_string(Family f) {
  switch (f) {
    case Family::B: return "B";
    case Family::S: return "S";
    case Family::BM: return "BM";
    case Family::SLM: return "SLM";
    case Family::Wp: return "Wp";
    case Family::WMp: return "WMp";
    case Family::D: return "D";
    case Family::DM: return "DM";
  }
  return {};
}

Family parse_family(std::string_view text) {
  std::string t;
  for (char c : text) t += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  for (auto f : {Family::B, Family::S, Family::BM, Family::SLM, Family::Wp, Family::WMp, Family::D, Family::DM}) {
    std::string name;
    for (char c : to_string(f)) name += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (t == name) return f;
  }
  throw InvalidClassSpec("unknown family '" + std::string(text) + "'");
}

std::string to_string(ClassType t) {
  switch (t) {
    case ClassType::beurling: return "beurling";
    case ClassType::roumieu: return "roumieu";
    case ClassType::plain: return "plain";
  }
  return {};
}

ClassType parse_class_type(std::string_view text) {
  for (auto t : {ClassType::beurling, ClassType::roumieu, ClassType::plain})
    if (text == to_string(t)) return t;
  throw InvalidClassSpec("unknown class type '" + std::string(text) + "'");
}

namespace {

bool is_weighted(Family f) {
  return f == Family::BM || f == Family::SLM || f == Family::WMp || f == Family::DM;
}
bool is_sobolev(Family f) { return f == Family::Wp || f == Family::WMp; }

}  // namespace

void ClassSpec::validate() const {
  bool weighted = is_weighted(family);
  if (weighted && !M) throw InvalidClassSpec(to_string(family) + " requires a weight sequence M");
  if (!weighted && (M || L)) throw InvalidClassSpec(to_string(family) + " takes no weight sequences");
  if (family == Family::SLM && !L) throw InvalidClassSpec("SLM requires a weight sequence L");
  if (family != Family::SLM && L) throw InvalidClassSpec("only SLM takes L");
  if (is_sobolev(family) && !p) throw InvalidClassSpec(to_string(family) + " requires p");
  if (!is_sobolev(family) && p) throw InvalidClassSpec(to_string(family) + " takes no p");
  if (p && !(*p >= 1 && std::isfinite(*p))) throw InvalidClassSpec("p must lie in [1, inf)");
  if (weighted && (!rho || !(*rho > 0))) throw InvalidClassSpec(to_string(family) + " requires rho > 0");
  if (!weighted && rho) throw InvalidClassSpec(to_string(family) + " takes no rho");
  if (weighted && type == ClassType::plain) throw InvalidClassSpec("weighted families are beurling or roumieu");
  if (!weighted && type != ClassType::plain) throw InvalidClassSpec("plain families have type plain");
}

ClassSpec ClassSpec::plain(Family f, std::optional<double> p) {
  ClassSpec s;
  s.family = f;
  s.p = p;
  s.validate();
  return s;
}

ClassSpec ClassSpec::weighted(Family f, ClassType t, WeightSequence M, double rho, std::optional<WeightSequence> L,
                              std::optional<double> p) {
  ClassSpec s;
  s.family = f;
  s.type = t;
  s.M = std::move(M);
  s.L = std::move(L);
  s.rho = rho;
  s.p = p;
  s.validate();
  return s;
}

// ---------------------------------------------------------------- operator norms

std::vector<std::vector<double>> sample_directions(int n) {
  if (n <= 0) return {};
  if (n == 1) return {{1.0}};
  std::size_t D = std::max(2 * n, 64);
  std::vector<std::vector<double>> dirs;
  for (int i = 0; i < n; ++i) {
    std::vector<double> e(n, 0.0);
    e[i] = 1;
    dirs.push_back(e);
  }
  dirs.push_back(std::vector<double>(n, 1 / std::sqrt(static_cast<double>(n))));
  static const int primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71};
  for (std::size_t i = 1; dirs.size() < D; ++i) {
    std::vector<double> v(n);
    double norm = 0;
    for (int d = 0; d < n; ++d) {
      int b = primes[d % 20] + (d / 20) * 2;  // beyond 20 axes the radical inverse loses quality, still deterministic
      double f = 1, r = 0;
      for (std::size_t k = i; k; k /= b) {
        f /= b;
        r += f * (k % b);
      }
      v[d] = 2 * r - 1;
      norm += v[d] * v[d];
    }
    if (norm < 1e-12) continue;
    for (auto& x : v) x /= std::sqrt(norm);
    dirs.push_back(v);
  }
  return dirs;
}

namespace {

// v^alpha for every basis monomial.
std::vector<double> monomials(const MonomialBasis& b, const std::vector<double>& v) {
  std::vector<double> mono(b.size());
  mono[0] = 1;
  for (std::size_t p = 1; p < b.size(); ++p) mono[p] = mono[b.parent(p)] * v[b.parent_var(p)];
  return mono;
}

struct NodeNorms {
  std::vector<double> lower, upper;  // per order k
};

NodeNorms node_norms(const Jet<double>& j, int K, const std::vector<std::vector<double>>& mono_tables) {
  const MonomialBasis& b = j.basis();
  NodeNorms out;
  out.lower.assign(K + 1, 0);
  out.upper.assign(K + 1, 0);
  std::vector<double> acc(j.m());
  for (int k = 0; k <= K; ++k) {
    double kf = std::tgamma(k + 1.0);
    double up = 0;
    for (std::size_t p = b.degree_begin(k); p < b.degree_begin(k + 1); ++p) {
      double s = 0;
      for (int c = 0; c < j.m(); ++c) s += j.at(c, p) * j.at(c, p);
      up += std::sqrt(s);
    }
    out.upper[k] = kf * up;
    double lo = 0;
    for (const auto& mono : mono_tables) {
      std::fill(acc.begin(), acc.end(), 0.0);
      for (std::size_t p = b.degree_begin(k); p < b.degree_begin(k + 1); ++p)
        for (int c = 0; c < j.m(); ++c) acc[c] += j.at(c, p) * mono[p];
      double s = 0;
      for (double a : acc) s += a * a;
      lo = std::max(lo, std::sqrt(s));
    }
    out.lower[k] = std::min(kf * lo, out.upper[k]);
  }
  return out;
}

std::vector<std::vector<double>> direction_tables(const MonomialBasis& b) {
  std::vector<std::vector<double>> tables;
  for (const auto& v : sample_directions(b.vars())) tables.push_back(monomials(b, v));
  return tables;
}

std::vector<NodeNorms> all_node_norms(const SampledFunction& f, int K) {
  std::vector<NodeNorms> out(f.jets().size());
  if (out.empty()) return out;
  auto tables = direction_tables(f.jet(0).basis());
  parallel_for(out.size(), [&](std::size_t i) { out[i] = node_norms(f.jet(i), K, tables); });
  return out;
}

double euclid(const std::vector<double>& x) {
  double s = 0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

// value / (rho^k k! M_k) via logs.
double weighted(double value, int k, double rho, const WeightSequence& M) {
  if (value == 0) return 0;
  return std::exp(std::log(value) - k * std::log(rho) - M.log_factorial_weight(k));
}

}  // namespace

Bracket opnorm_bracket(const Jet<double>& j, int k, const std::vector<std::vector<double>>& directions) {
  if (k > j.order() || k < 0) throw OrderMismatch("operator norm order exceeds jet order");
  if (j.n() > 1 && static_cast<int>(directions.size()) < 2 * j.n())
    throw PreconditionFailed("need at least 2n sampled directions");
  std::vector<std::vector<double>> tables;
  for (const auto& v : directions) {
    if (static_cast<int>(v.size()) != j.n()) throw DimensionMismatch("direction has wrong dimension");
    tables.push_back(monomials(j.basis(), v));
  }
  auto nn = node_norms(j, k, tables);
  return {nn.lower[k], nn.upper[k]};
}

// ---------------------------------------------------------------- L^p

void check_boundary_mass(const SampledFunction& f, const MultiIndex& alpha) {
  double interior = 0, boundary = 0;
  double af = alpha.factorial_double();
  for (std::size_t node = 0; node < f.jets().size(); ++node) {
    double s = 0;
    for (int c = 0; c < f.m(); ++c) {
      double v = f.jet(node).coeff(c, alpha) * af;
      s += v * v;
    }
    s = std::sqrt(s);
    interior = std::max(interior, s);
    if (f.grid().on_boundary(node)) boundary = std::max(boundary, s);
  }
  if (boundary > 1e-6 * interior)
    throw QuadratureBoxTooSmall("boundary value of d^" + alpha.to_string() + " f is " + std::to_string(boundary) +
                                " against interior maximum " + std::to_string(interior));
}

double lp_norm(const SampledFunction& f, const MultiIndex& alpha, double p) {
  if (alpha.order() > f.order()) throw OrderMismatch("derivative order exceeds sampled order");
  double af = alpha.factorial_double();
  std::vector<double> terms(f.jets().size());
  for (std::size_t node = 0; node < terms.size(); ++node) {
    double s = 0;
    for (int c = 0; c < f.m(); ++c) {
      double v = f.jet(node).coeff(c, alpha) * af;
      s += v * v;
    }
    double a = std::sqrt(s);
    terms[node] = f.grid().simpson_weight(node) * (p == 1 ? a : p == 2 ? a * a : std::pow(a, p));
  }
  double total = 0;
  for (double t : terms) total += t;
  return p == 1 ? total : p == 2 ? std::sqrt(total) : std::pow(total, 1 / p);
}

// ---------------------------------------------------------------- seminorms

SeminormReport seminorm(const SampledFunction& f, const ClassSpec& spec, const std::vector<std::vector<int>>& indices) {
  spec.validate();
  const int K = f.order();
  const int n = f.n();
  SeminormReport rep;
  rep.family = spec.family;
  rep.truncation = K;

  std::vector<std::vector<int>> idx = indices;
  const bool pair_family = spec.family == Family::S || spec.family == Family::SLM;
  if (idx.empty()) {
    if (is_sobolev(spec.family)) {
      for (const auto& a : multi_indices_up_to(n, K)) idx.push_back(a.values());
    } else if (pair_family) {
      for (int k = 0; k <= K; ++k)
        for (int l = 0; l <= K; ++l) idx.push_back({k, l});
    } else {
      for (int k = 0; k <= K; ++k) idx.push_back({k});
    }
  }
  for (const auto& i : idx) {
    std::size_t want = is_sobolev(spec.family) ? static_cast<std::size_t>(n) : pair_family ? 2u : 1u;
    bool ok = i.size() == want;
    for (int v : i) ok = ok && v >= 0;
    if (ok) {
      int order = is_sobolev(spec.family) ? MultiIndex(i).order() : i.back();
      ok = order <= K;
    }
    if (!ok) {
      std::string s = "(";
      for (std::size_t t = 0; t < i.size(); ++t) s += (t ? "," : "") + std::to_string(i[t]);
      throw UnsupportedIndices("index " + s + ") is not valid for family " + to_string(spec.family) +
                               " at truncation " + std::to_string(K));
    }
  }

  if (is_sobolev(spec.family)) {
    for (const auto& i : idx) {
      MultiIndex a(i);
      check_boundary_mass(f, a);
      double v = lp_norm(f, a, *spec.p);
      if (spec.family == Family::WMp) v = weighted(v, a.order(), *spec.rho, *spec.M);
      rep.entries.push_back({i, {v, v}});
    }
  } else {
    auto norms = all_node_norms(f, K);
    std::vector<double> radius(norms.size());
    if (pair_family)
      for (std::size_t node = 0; node < norms.size(); ++node) radius[node] = euclid(f.grid().coordinates(node));
    for (const auto& i : idx) {
      Bracket b;
      if (pair_family) {
        int k = i[0], l = i[1];
        for (std::size_t node = 0; node < norms.size(); ++node) {
          double w = std::pow(1 + radius[node], k);
          b.lower = std::max(b.lower, w * norms[node].lower[l]);
          b.upper = std::max(b.upper, w * norms[node].upper[l]);
        }
        if (spec.family == Family::SLM) {
          double denom_log = (k + l) * std::log(*spec.rho) + spec.L->log_factorial_weight(k) + spec.M->log_factorial_weight(l);
          b.lower = b.lower == 0 ? 0 : std::exp(std::log(b.lower) - denom_log);
          b.upper = b.upper == 0 ? 0 : std::exp(std::log(b.upper) - denom_log);
        }
      } else {
        int k = i[0];
        for (const auto& nn : norms) {
          b.lower = std::max(b.lower, nn.lower[k]);
          b.upper = std::max(b.upper, nn.upper[k]);
        }
        if (is_weighted(spec.family)) {
          b.lower = weighted(b.lower, k, *spec.rho, *spec.M);
          b.upper = weighted(b.upper, k, *spec.rho, *spec.M);
        }
      }
      rep.entries.push_back({i, b});
    }
  }

  if (is_weighted(spec.family)) {
    Bracket nb;
    for (const auto& e : rep.entries) {
      nb.lower = std::max(nb.lower, e.value.lower);
      nb.upper = std::max(nb.upper, e.value.upper);
    }
    rep.norm = nb;
  }
  for (const auto& e : rep.entries)
    rep.finite_at_truncation = rep.finite_at_truncation && std::isfinite(e.value.upper) && std::isfinite(e.value.lower);
  if (spec.family == Family::D || spec.family == Family::DM) {
    rep.support_ok = f.support().has_value();
    if (f.support()) rep.support_radius = f.support()->radius;
  }
  return rep;
}

// ---------------------------------------------------------------- type radius

std::string to_string(TypeClass t) {
  switch (t) {
    case TypeClass::beurling_like: return "beurling_like";
    case TypeClass::roumieu_like: return "roumieu_like";
    case TypeClass::outside: return "outside";
  }
  return {};
}

TypeRadiusReport type_radius(const SampledFunction& f, const WeightSequence& M, int K) {
  if (K < 6) throw PreconditionFailed("type_radius needs K >= 6");
  if (K > f.order()) throw OrderMismatch("type_radius order exceeds sampled order");
  auto norms = all_node_norms(f, K);
  TypeRadiusReport r;
  for (int k = 1; k <= K; ++k) {
    double s = 0;
    for (const auto& nn : norms) s = std::max(s, nn.upper[k]);
    r.roots.push_back(s == 0 ? 0 : std::exp((std::log(s) - M.log_factorial_weight(k)) / k));
  }
  int first = K - K / 2 + 1;
  for (int k = first; k <= K; ++k) r.rho_star = std::max(r.rho_star, r.roots[k - 1]);
  if (r.rho_star < 1e-12) {
    r.classification = TypeClass::beurling_like;
  } else {
    double last = r.roots[K - 1], start = r.roots[first - 1];
    int q = std::max(1, K - first);
    double growth = last > 0 ? (last - start) / (q * last) : 0;
    r.classification = growth > 0.01 ? TypeClass::outside : TypeClass::roumieu_like;
  }
  return r;
}

// ---------------------------------------------------------------- trace

TraceReport trace_check(const SampledFunction& f, double x0, double p) {
  if (f.n() < 2) throw DimensionMismatch("trace_check needs at least two axes");
  if (f.order() < 1) throw OrderMismatch("trace_check needs first derivatives");
  if (!(p >= 1) || !std::isfinite(p)) throw PreconditionFailed("p must lie in [1, inf)");
  const Axis& ax = f.grid().axis(0);
  if (x0 < ax.lo || x0 > ax.hi) throw QuadratureBoxTooSmall("slice coordinate lies outside the grid");
  const int n = f.n();
  check_boundary_mass(f, MultiIndex(static_cast<std::size_t>(n)));
  for (int i = 0; i < n; ++i) check_boundary_mass(f, MultiIndex::unit(n, i));

  TraceReport r;
  r.proof_constant = std::pow(std::max(1.0, p - 1), 1 / p);
  double rhs = lp_norm(f, MultiIndex(static_cast<std::size_t>(n)), p);
  for (int i = 0; i < n; ++i) rhs += lp_norm(f, MultiIndex::unit(n, i), p);
  r.rhs = rhs;

  int i0 = static_cast<int>(std::lround((x0 - ax.lo) / ax.step()));
  i0 = std::clamp(i0, 0, ax.points - 1);
  double dx = x0 - ax.node(i0);
  std::vector<int> inner_axes;
  for (int i = 1; i < n; ++i) inner_axes.push_back(i);
  GridSpec inner = f.grid().sub_grid(inner_axes);
  std::vector<std::size_t> slice_pos(f.order() + 1);
  const MonomialBasis& b = f.jet(0).basis();
  for (int a = 0; a <= f.order(); ++a) {
    MultiIndex e(static_cast<std::size_t>(n));
    e[0] = a;
    slice_pos[a] = b.position(e);
  }
  double total = 0;
  for (std::size_t q = 0; q < inner.node_count(); ++q) {
    auto idx = inner.unflatten(q);
    idx.insert(idx.begin(), i0);
    const Jet<double>& j = f.jet(f.grid().flatten(idx));
    double s = 0;
    for (int c = 0; c < f.m(); ++c) {
      double v = 0, pw = 1;
      for (int a = 0; a <= f.order(); ++a) {
        v += j.at(c, slice_pos[a]) * pw;
        pw *= dx;
      }
      s += v * v;
    }
    total += inner.simpson_weight(q) * std::pow(std::sqrt(s), p);
  }
  r.lhs = std::pow(total, 1 / p);
  r.ratio = r.rhs > 0 ? r.lhs / r.rhs : 0;
  r.within_proof_constant = r.ratio <= r.proof_constant * (1 + 1e-9);
  return r;
}

// ---------------------------------------------------------------- tensor seminorm

namespace {

struct Samples1D {
  std::vector<double> values;
  std::vector<double> weights;
};

Samples1D derivative_samples(const SampledFunction& f, int order) {
  if (f.n() != 1 || f.m() != 1) throw DimensionMismatch("tensor factors must be scalar functions of one variable");
  if (order > f.order()) throw OrderMismatch("derivative order exceeds sampled order");
  Samples1D s;
  double fact = std::tgamma(order + 1.0);
  for (std::size_t i = 0; i < f.jets().size(); ++i) {
    s.values.push_back(f.jet(i).at(0, order) * fact);
    s.weights.push_back(f.grid().simpson_weight(i));
  }
  return s;
}

double sgn_pow(double x, double e) { return x == 0 ? 0 : std::copysign(std::pow(std::abs(x), e), x); }

double lp_vec(const std::vector<double>& v, double p) {
  if (std::isinf(p)) {
    double m = 0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
  }
  double s = 0;
  for (double x : v) s += std::pow(std::abs(x), p);
  return std::pow(s, 1 / p);
}

}  // namespace

TensorReport tensor_seminorm(const std::vector<std::pair<SampledFunction, SampledFunction>>& pairs, int alpha,
                             int beta, double p) {
  if (pairs.empty()) throw EmptyRepresentation("tensor representation has no terms");
  if (!(p >= 1) || !std::isfinite(p)) throw PreconditionFailed("p must lie in [1, inf)");
  const GridSpec& gx = pairs[0].first.grid();
  const GridSpec& gy = pairs[0].second.grid();
  std::vector<Samples1D> F, G;
  for (const auto& [f, g] : pairs) {
    if (!(f.grid() == gx) || !(g.grid() == gy)) throw DimensionMismatch("tensor factors must share grids");
    F.push_back(derivative_samples(f, alpha));
    G.push_back(derivative_samples(g, beta));
  }
  const std::size_t N = pairs.size(), nx = F[0].values.size(), ny = G[0].values.size();
  const std::vector<double>& wx = F[0].weights;
  const std::vector<double>& wy = G[0].weights;

  TensorReport r;
  // l^p norm of the L^p norms of the g factors
  std::vector<double> gnorms(N);
  for (std::size_t i = 0; i < N; ++i) {
    double s = 0;
    for (std::size_t k = 0; k < ny; ++k) s += wy[k] * std::pow(std::abs(G[i].values[k]), p);
    gnorms[i] = std::pow(s, 1 / p);
  }
  r.g_norm = lp_vec(gnorms, p);

  const double q = p == 1 ? std::numeric_limits<double>::infinity() : p / (p - 1);
  auto pairing = [&](const std::vector<double>& u) {
    std::vector<double> v(N, 0.0);
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < nx; ++j) v[i] += wx[j] * F[i].values[j] * u[j];
    return v;
  };
  // u = sign(phi)|phi|^(p-1) / ||phi||_p^(p-1), the L^q-normalized dual of phi.
  auto dual_of = [&](const std::vector<double>& phi) {
    std::vector<double> u(nx, 0.0);
    double s = 0;
    for (std::size_t j = 0; j < nx; ++j) s += wx[j] * std::pow(std::abs(phi[j]), p);
    double norm = std::pow(s, 1 / p);
    if (norm == 0) return u;
    for (std::size_t j = 0; j < nx; ++j) u[j] = p == 1 ? (phi[j] > 0 ? 1.0 : phi[j] < 0 ? -1.0 : 0.0)
                                                       : sgn_pow(phi[j] / norm, p - 1);
    return u;
  };

  if (p == 2) {
    Matrix<double> gram(N, std::vector<double>(N, 0.0));
    for (std::size_t a = 0; a < N; ++a)
      for (std::size_t b = a; b < N; ++b) {
        double s = 0;
        for (std::size_t j = 0; j < nx; ++j) s += wx[j] * F[a].values[j] * F[b].values[j];
        gram[a][b] = gram[b][a] = s;
      }
    r.dual_sup = std::sqrt(std::max(0.0, top_eigenpair(gram).first));
    r.sup_exact = true;
  } else if (p == 1) {
    // q = infinity: the sup of max_i |int f_i u| over |u| <= 1 is max_i ||f_i||_1.
    for (std::size_t i = 0; i < N; ++i) r.dual_sup = std::max(r.dual_sup, lp_vec(pairing(dual_of(F[i].values)), q));
    r.sup_exact = true;
  } else {
    // Nonlinear power iteration from each single factor and from their sum.
    std::vector<std::vector<double>> starts;
    for (std::size_t i = 0; i < N; ++i) starts.push_back(F[i].values);
    std::vector<double> sum(nx, 0.0);
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < nx; ++j) sum[j] += F[i].values[j];
    starts.push_back(sum);
    for (auto phi : starts) {
      double best = 0;
      for (int it = 0; it < 200; ++it) {
        auto u = dual_of(phi);
        auto v = pairing(u);
        double val = lp_vec(v, q);
        if (val <= best * (1 + 1e-15)) {
          best = std::max(best, val);
          break;
        }
        best = val;
        // phi = sum_i w_i f_i with w the l^p-normalized dual of v
        std::vector<double> w(N);
        for (std::size_t i = 0; i < N; ++i) w[i] = sgn_pow(v[i] / val, q - 1);
        std::fill(phi.begin(), phi.end(), 0.0);
        for (std::size_t i = 0; i < N; ++i)
          for (std::size_t j = 0; j < nx; ++j) phi[j] += w[i] * F[i].values[j];
      }
      r.dual_sup = std::max(r.dual_sup, best);
    }
    r.sup_exact = N == 1;
  }
  r.value = r.g_norm * r.dual_sup;

  double total = 0;
  for (std::size_t j = 0; j < nx; ++j)
    for (std::size_t k = 0; k < ny; ++k) {
      double h = 0;
      for (std::size_t i = 0; i < N; ++i) h += F[i].values[j] * G[i].values[k];
      total += wx[j] * wy[k] * std::pow(std::abs(h), p);
    }
  r.direct_norm = std::pow(total, 1 / p);
  r.majorizes = r.value >= r.direct_norm * (1 - 1e-12);
  r.strict = r.value > r.direct_norm * (1 + 1e-9);
  return r;
}

// ---------------------------------------------------------------- Fourier

namespace {

void check_decay_1d(const std::vector<double>& values, const std::vector<bool>& boundary) {
  double interior = 0, edge = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    interior = std::max(interior, std::abs(values[i]));
    if (boundary[i]) edge = std::max(edge, std::abs(values[i]));
  }
  if (edge > 1e-8 * interior)
    throw QuadratureBoxTooSmall("function does not decay below 1e-8 at the box boundary (" + std::to_string(edge) + ")");
}

}  // namespace

SampledFunction fourier_1d(const SampledFunction& f, const GridSpec& xi_grid) {
  if (f.n() != 1 || f.m() != 1) throw DimensionMismatch("fourier_1d needs a scalar function of one variable");
  if (xi_grid.dims() != 1) throw DimensionMismatch("xi grid must be one-dimensional");
  std::vector<double> vals, xs, ws;
  std::vector<bool> bnd;
  for (std::size_t i = 0; i < f.jets().size(); ++i) {
    vals.push_back(f.jet(i).at(0, 0));
    xs.push_back(f.grid().coordinates(i)[0]);
    ws.push_back(f.grid().simpson_weight(i));
    bnd.push_back(f.grid().on_boundary(i));
  }
  check_decay_1d(vals, bnd);
  std::vector<Jet<double>> out(xi_grid.node_count());
  parallel_for(out.size(), [&](std::size_t a) {
    double xi = xi_grid.coordinates(a)[0];
    double re = 0, im = 0;
    for (std::size_t j = 0; j < vals.size(); ++j) {
      double th = 2 * std::numbers::pi * xs[j] * xi;
      re += ws[j] * vals[j] * std::cos(th);
      im -= ws[j] * vals[j] * std::sin(th);
    }
    Jet<double> jt({xi}, 2, 0);
    jt.at(0, 0) = re;
    jt.at(1, 0) = im;
    out[a] = std::move(jt);
  });
  return SampledFunction(xi_grid, 0, 2, std::move(out));
}

FactorizationReport factorization_check(const SampledFunction& f, const GridSpec& xi_grid) {
  if (f.n() != 2 || f.m() != 1) throw DimensionMismatch("factorization_check needs a scalar function on R^2");
  if (xi_grid.dims() != 2) throw DimensionMismatch("xi grid must be two-dimensional");
  const Axis& ax1 = f.grid().axis(0);
  const Axis& ax2 = f.grid().axis(1);
  const int n1 = ax1.points, n2 = ax2.points;
  const Axis& ox1 = xi_grid.axis(0);
  const Axis& ox2 = xi_grid.axis(1);
  const int m1 = ox1.points, m2 = ox2.points;
  std::vector<double> vals(f.jets().size());
  std::vector<bool> bnd(vals.size());
  for (std::size_t i = 0; i < vals.size(); ++i) {
    vals[i] = f.jet(i).at(0, 0);
    bnd[i] = f.grid().on_boundary(i);
  }
  check_decay_1d(vals, bnd);
  const double tau = 2 * std::numbers::pi;

  // F1(xi1_a, x2_k) = sum_j w_j f(x1_j, x2_k) e^{-2 pi i x1_j xi1_a}
  std::vector<double> re1(static_cast<std::size_t>(m1) * n2), im1(re1.size());
  parallel_for(static_cast<std::size_t>(m1), [&](std::size_t a) {
    double xi = ox1.node(static_cast<int>(a));
    for (int k = 0; k < n2; ++k) {
      double re = 0, im = 0;
      for (int j = 0; j < n1; ++j) {
        double th = tau * ax1.node(j) * xi;
        double v = ax1.simpson_weight(j) * vals[static_cast<std::size_t>(j) * n2 + k];
        re += v * std::cos(th);
        im -= v * std::sin(th);
      }
      re1[a * n2 + k] = re;
      im1[a * n2 + k] = im;
    }
  });

  FactorizationReport rep;
  rep.iterated.resize(static_cast<std::size_t>(m1) * m2);
  std::vector<double> disc(rep.iterated.size());
  parallel_for(rep.iterated.size(), [&](std::size_t ab) {
    int a = static_cast<int>(ab / m2), b = static_cast<int>(ab % m2);
    double xi1 = ox1.node(a), xi2 = ox2.node(b);
    double re = 0, im = 0;
    for (int k = 0; k < n2; ++k) {
      double th = tau * ax2.node(k) * xi2;
      double c = std::cos(th), s = std::sin(th), w = ax2.simpson_weight(k);
      double r1 = re1[a * n2 + k], i1 = im1[a * n2 + k];
      // (r1 + i i1)(c - i s)
      re += w * (r1 * c + i1 * s);
      im += w * (i1 * c - r1 * s);
    }
    double jre = 0, jim = 0;
    for (int j = 0; j < n1; ++j)
      for (int k = 0; k < n2; ++k) {
        double th = tau * (ax1.node(j) * xi1 + ax2.node(k) * xi2);
        double v = ax1.simpson_weight(j) * ax2.simpson_weight(k) * vals[static_cast<std::size_t>(j) * n2 + k];
        jre += v * std::cos(th);
        jim -= v * std::sin(th);
      }
    rep.iterated[ab] = {re, im};
    disc[ab] = std::hypot(re - jre, im - jim);
  });
  for (double d : disc) rep.max_discrepancy = std::max(rep.max_discrepancy, d);
  return rep;
}

}  // namespace ultrajet
