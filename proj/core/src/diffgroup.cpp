#include "ultrajet/diffgroup.hpp"

#include "ultrajet/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

namespace ultrajet {

namespace {

std::string format_point(const std::vector<double>& x) {
  std::ostringstream os;
  os.precision(17);
  os << "(";
  for (std::size_t i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
  os << ")";
  return os.str();
}

double euclid(const std::vector<double>& x) {
  double s = 0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

Matrix<double> shifted_jacobian(const Expr& f, const std::vector<double>& x) {
  Matrix<double> a = linear_part(eval_jet<double>(f, x, 1));
  for (std::size_t i = 0; i < a.size(); ++i) a[i][i] += 1;
  return a;
}

/// sup over nodes of upper_k / (k! M_k) in logs, -inf where the order vanishes.
std::vector<double> log_sup_upper(const SampledFunction& f, const WeightSequence& M, int K) {
  std::vector<double> out(K + 1, -std::numeric_limits<double>::infinity());
  std::vector<std::vector<double>> per_node(f.jets().size());
  parallel_for(per_node.size(), [&](std::size_t i) {
    const Jet<double>& j = f.jet(i);
    const MonomialBasis& b = j.basis();
    per_node[i].assign(K + 1, 0);
    for (int k = 0; k <= K; ++k) {
      double up = 0;
      for (std::size_t p = b.degree_begin(k); p < b.degree_begin(k + 1); ++p) {
        double s = 0;
        for (int c = 0; c < j.m(); ++c) s += j.at(c, p) * j.at(c, p);
        up += std::sqrt(s);
      }
      per_node[i][k] = up;  // k! cancels against the k! in the weight
    }
  });
  for (int k = 0; k <= K; ++k) {
    double s = 0;
    for (const auto& v : per_node) s = std::max(s, v[k]);
    if (s > 0) out[k] = std::log(s) - M.log_value(k);
  }
  return out;
}

/// sup over nodes of lower_k / (k! M_k), not in logs.
std::vector<double> sup_lower(const std::vector<Jet<double>>& jets, const WeightSequence& M, int K) {
  std::vector<double> out(K + 1, 0);
  if (jets.empty()) return out;
  auto dirs = sample_directions(jets[0].n());
  std::vector<std::vector<double>> per_node(jets.size(), std::vector<double>(K + 1, 0));
  parallel_for(jets.size(), [&](std::size_t i) {
    for (int k = 0; k <= K; ++k) per_node[i][k] = opnorm_bracket(jets[i], k, dirs).lower;
  });
  for (int k = 0; k <= K; ++k) {
    double s = 0;
    for (const auto& v : per_node) s = std::max(s, v[k]);
    out[k] = s == 0 ? 0 : std::exp(std::log(s) - M.log_factorial_weight(k));
  }
  return out;
}

void require_log_convex(const WeightSequence& M, int K) {
  if (!check_property(M, Property::log_convex, std::max(K, 2)).holds_up_to_K)
    throw PreconditionFailed("weight sequence " + M.to_string() + " is not log-convex up to " + std::to_string(K));
}

void check_certificate_shape(const SampledFunction& f, int from_order, int K) {
  if (from_order != 0 && from_order != 1) throw PreconditionFailed("from_order must be 0 or 1");
  if (K < from_order) throw PreconditionFailed("horizon below from_order");
  if (K > f.order()) throw OrderMismatch("certificate horizon exceeds sampled order");
}

BoundCertificate finish_certificate(const std::vector<double>& logs, const WeightSequence& M, int from_order, int K,
                                    double rho) {
  BoundCertificate c;
  c.M = M;
  c.from_order = from_order;
  c.K = K;
  c.rho = rho;
  double logC = -std::numeric_limits<double>::infinity();
  for (int k = from_order; k <= K; ++k) logC = std::max(logC, logs[k] - k * std::log(rho));
  c.C = std::isfinite(logC) ? std::exp(logC) : std::numeric_limits<double>::min();
  if (c.C == 0) c.C = std::numeric_limits<double>::min();
  for (int k = from_order; k <= K; ++k)
    if (std::isfinite(logs[k])) c.worst_ratio = std::max(c.worst_ratio, std::exp(logs[k] - k * std::log(rho) - std::log(c.C)));
  return c;
}

}  // namespace

// ---------------------------------------------------------------- maps

std::vector<double> DiffMap::apply(const std::vector<double>& x) const {
  std::vector<double> y = evaluate_value(f, x);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += x[i];
  return y;
}

ClassTag tag_class(const Expr& f, const GridSpec& grid, int order) {
  if (order < 0) throw PreconditionFailed("tag order must be non-negative");
  SampledFunction s = sample(f, grid, order);
  ClassTag t;
  t.order = order;
  t.bounded = seminorm(s, ClassSpec::plain(Family::B)).finite_at_truncation;
  t.compact = s.support().has_value();

  // slot k * (order + 1) + l holds sup of (1+|x|)^k |f^(l)|
  const std::size_t w = static_cast<std::size_t>(order) + 1;
  std::vector<double> interior(w * w, 0), ring(w * w, 0);
  for (std::size_t node = 0; node < s.jets().size(); ++node) {
    const Jet<double>& j = s.jet(node);
    double r = 1 + euclid(grid.coordinates(node));
    bool edge = grid.on_boundary(node);
    for (int l = 0; l <= order; ++l) {
      double up = 0;
      for (std::size_t p = j.basis().degree_begin(l); p < j.basis().degree_begin(l + 1); ++p) {
        double q = 0;
        for (int c = 0; c < j.m(); ++c) q += j.at(c, p) * j.at(c, p);
        up += std::sqrt(q);
      }
      for (int k = 0; k <= order; ++k) {
        double v = std::pow(r, k) * up;
        std::size_t slot = k * w + l;
        interior[slot] = std::max(interior[slot], v);
        if (edge) ring[slot] = std::max(ring[slot], v);
      }
    }
  }
  for (std::size_t i = 0; i < w * w; ++i)
    if (interior[i] > 0) t.decay_ratio = std::max(t.decay_ratio, ring[i] / interior[i]);
  t.schwartz = t.decay_ratio <= 1e-6;
  return t;
}

DiffMap make_diffmap(const Expr& f, const GridSpec& grid, int tag_order) {
  if (f.arity() != f.target_dim())
    throw DimensionMismatch("Id + f needs f: R^n -> R^n, got arity " + std::to_string(f.arity()) + " and target " +
                            std::to_string(f.target_dim()));
  if (grid.dims() != f.arity()) throw DimensionMismatch("grid dimension differs from the map's dimension");
  std::vector<double> dets(grid.node_count());
  parallel_for(dets.size(), [&](std::size_t i) { dets[i] = determinant(shifted_jacobian(f, grid.coordinates(i))); });

  DiffMap F;
  F.f = f;
  F.report_grid = grid;
  F.inf_det_estimate = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < dets.size(); ++i) {
    if (!(dets[i] > 0)) {
      std::ostringstream os;
      os.precision(17);
      os << "det(I + df) = " << dets[i] << " at node " << i << " " << format_point(grid.coordinates(i));
      throw NotADiffeo(os.str());
    }
    if (dets[i] < F.inf_det_estimate) {
      F.inf_det_estimate = dets[i];
      F.inf_det_node = i;
    }
  }
  if (tag_order >= 0) F.class_tag = tag_class(f, grid, tag_order);
  return F;
}

DiffMap parse_diffmap(std::string_view text, int n, const GridSpec& grid, int tag_order) {
  std::string_view body = text;
  while (!body.empty() && body.front() == ' ') body.remove_prefix(1);
  if (body.substr(0, 3) == "id+") body.remove_prefix(3);
  return make_diffmap(Expr::parse(body, n), grid, tag_order);
}

DiffMap compose_diff(const DiffMap& F, const DiffMap& G) {
  if (F.n() != G.n()) throw DimensionMismatch("maps act on different dimensions");
  const int n = G.n();
  std::vector<Expr> shifted;
  for (int i = 0; i < n; ++i) shifted.push_back(Expr::variable(i, n) + G.f.component(i));
  Expr fg = substitute(F.f, shifted);
  std::vector<Expr> parts;
  for (int i = 0; i < n; ++i) parts.push_back(G.f.component(i) + fg.component(i));
  Expr h = n == 1 ? parts[0] : Expr::vector(parts);
  int tag = -1;
  if (F.class_tag && G.class_tag) tag = std::min(F.class_tag->order, G.class_tag->order);
  return make_diffmap(h, G.report_grid, tag);
}

// ---------------------------------------------------------------- inversion

InverseResult invert_diff(const DiffMap& F, const InverseOptions& opts) {
  if (!(F.inf_det_estimate > 0)) throw NotADiffeo("inf det estimate is not positive");
  if (opts.order < 1) throw OrderMismatch("inverse jets need order >= 1");
  const GridSpec& grid = F.report_grid;
  const std::size_t N = grid.node_count();
  const int n = F.n();

  InverseResult r;
  r.g.assign(N, {});
  r.residual.assign(N, 0);
  r.iterations.assign(N, 0);
  r.newton_used.assign(N, false);
  r.G_jets.assign(N, {});
  std::vector<double> roundtrip(N, 0), det_err(N, 0);
  std::vector<std::string> failure(N);

  auto residual_of = [&](const std::vector<double>& x, const std::vector<double>& g) {
    std::vector<double> a(n);
    for (int i = 0; i < n; ++i) a[i] = x[i] + g[i];
    std::vector<double> fa = evaluate_value(F.f, a);
    for (int i = 0; i < n; ++i) fa[i] += g[i];
    return fa;
  };

  parallel_for(N, [&](std::size_t node) {
    std::vector<double> x = grid.coordinates(node);
    std::vector<double> g = evaluate_value(F.f, x);
    for (double& v : g) v = -v;
    std::vector<double> res = residual_of(x, g);
    double rn = euclid(res);
    int it = 0;
    bool newton = false;
    while (rn > opts.tol && it < opts.max_iterations) {
      ++it;
      std::vector<double> a(n);
      for (int i = 0; i < n; ++i) a[i] = x[i] + g[i];
      std::vector<double> cand = evaluate_value(F.f, a);
      for (double& v : cand) v = -v;
      std::vector<double> cres = residual_of(x, cand);
      double cn = euclid(cres);
      if (cn <= 0.5 * rn) {
        g = std::move(cand);
        res = std::move(cres);
        rn = cn;
        continue;
      }
      newton = true;
      Matrix<double> J = shifted_jacobian(F.f, a);
      auto Jinv = inverse(J);
      if (!Jinv || !(std::abs(determinant(J)) > kFloatSingularDet)) {
        failure[node] = "singular I + df at node " + std::to_string(node);
        return;
      }
      std::vector<double> step = mat_vec(*Jinv, res);
      double lambda = 1;
      for (int half = 0; half < 30; ++half, lambda *= 0.5) {
        std::vector<double> trial = g;
        for (int i = 0; i < n; ++i) trial[i] -= lambda * step[i];
        std::vector<double> tres = residual_of(x, trial);
        double tn = euclid(tres);
        if (tn < rn || half == 29) {
          g = std::move(trial);
          res = std::move(tres);
          rn = tn;
          break;
        }
      }
    }
    r.iterations[node] = it;
    r.newton_used[node] = newton;
    r.residual[node] = rn;
    if (!(rn <= opts.tol)) {
      std::ostringstream os;
      os.precision(17);
      os << "node " << node << " " << format_point(x) << " last residual " << rn;
      failure[node] = "!" + os.str();
      return;
    }

    std::vector<double> a(n);
    for (int i = 0; i < n; ++i) a[i] = x[i] + g[i];
    Jet<double> Fj = eval_jet<double>(F.f, a, opts.order) + Jet<double>::identity(a, opts.order);
    Jet<double> Gj;
    try {
      Gj = invert(Fj);
    } catch (const SingularDerivative& e) {
      failure[node] = e.what();
      return;
    }
    Jet<double> back = compose(Gj, Fj) - Jet<double>::identity(a, opts.order);
    double err = 0;
    for (int c = 0; c < back.m(); ++c)
      for (std::size_t p = 0; p < back.size(); ++p) err = std::max(err, std::abs(back.at(c, p)));
    roundtrip[node] = err;
    det_err[node] = std::abs(determinant(linear_part(Gj)) * determinant(linear_part(Fj)) - 1);
    r.g[node] = std::move(g);
    r.G_jets[node] = std::move(Gj);
  });

  for (std::size_t node = 0; node < N; ++node) {
    if (failure[node].empty()) continue;
    if (failure[node][0] == '!') throw NoConvergence(failure[node].substr(1));
    throw SingularDerivative(failure[node]);
  }
  for (std::size_t node = 0; node < N; ++node) {
    r.max_residual = std::max(r.max_residual, r.residual[node]);
    r.max_roundtrip_error = std::max(r.max_roundtrip_error, roundtrip[node]);
    r.max_det_identity_error = std::max(r.max_det_identity_error, det_err[node]);
  }
  return r;
}

double decay_outside(const InverseResult& r, const GridSpec& grid, double radius) {
  double worst = 0;
  for (std::size_t node = 0; node < r.g.size(); ++node) {
    auto x = grid.coordinates(node);
    double m = std::numeric_limits<double>::infinity();
    for (double v : x) m = std::min(m, std::abs(v));
    if (m >= radius) worst = std::max(worst, euclid(r.g[node]));
  }
  return worst;
}

MatrixInverseBound matrix_inverse_bound(const Matrix<double>& A) {
  const std::size_t n = A.size();
  if (n == 0) throw DimensionMismatch("empty matrix");
  for (const auto& row : A)
    if (row.size() != n) throw DimensionMismatch("matrix is not square");
  double det = determinant(A);
  auto inv = inverse(A);
  if (det == 0 || !inv) throw SingularMatrix("det A = 0");
  MatrixInverseBound b;
  b.lhs = spectral_norm(*inv);
  b.rhs = std::pow(spectral_norm(A), static_cast<double>(n - 1)) / std::abs(det);
  b.holds = b.lhs <= b.rhs * (1 + 1e-10);
  return b;
}

// ---------------------------------------------------------------- certificates

BoundCertificate certificate_estimate(const SampledFunction& f, const WeightSequence& M, int from_order, int K) {
  check_certificate_shape(f, from_order, K);
  TypeRadiusReport tr = type_radius(f, M, K);
  if (tr.classification == TypeClass::outside)
    throw DivergentAtHorizon("k-th roots still increasing at K = " + std::to_string(K) + " (last root " +
                             std::to_string(tr.roots.back()) + ")");
  auto logs = log_sup_upper(f, M, K);
  double rho = 1;
  if (tr.classification == TypeClass::beurling_like) {
    int kb = -1;
    for (int k = std::max(from_order, 1); k <= K && kb < 0; ++k)
      if (std::isfinite(logs[k])) kb = k;
    if (kb > 0) {
      double lr = -std::numeric_limits<double>::infinity();
      for (int k = kb + 1; k <= K; ++k)
        if (std::isfinite(logs[k])) lr = std::max(lr, (logs[k] - logs[kb]) / (k - kb));
      if (std::isfinite(lr)) rho = std::exp(lr);
    }
  } else {
    rho = 1.25 * tr.rho_star;
  }
  return finish_certificate(logs, M, from_order, K, rho);
}

BoundCertificate certificate_at(const SampledFunction& f, const WeightSequence& M, int from_order, int K, double rho) {
  check_certificate_shape(f, from_order, K);
  if (!(rho > 0) || !std::isfinite(rho)) throw PreconditionFailed("certificate radius must be positive");
  return finish_certificate(log_sup_upper(f, M, K), M, from_order, K, rho);
}

double certificate_ratio(const BoundCertificate& c, const SampledFunction& f, bool use_lower) {
  check_certificate_shape(f, c.from_order, c.K);
  std::vector<double> logs;
  if (use_lower) {
    auto lo = sup_lower(f.jets(), c.M, c.K);
    logs.resize(lo.size());
    for (std::size_t k = 0; k < lo.size(); ++k)
      logs[k] = lo[k] > 0 ? std::log(lo[k]) : -std::numeric_limits<double>::infinity();
  } else {
    logs = log_sup_upper(f, c.M, c.K);
  }
  double worst = 0;
  for (int k = c.from_order; k <= c.K; ++k)
    if (std::isfinite(logs[k])) worst = std::max(worst, std::exp(logs[k] - k * std::log(c.rho) - std::log(c.C)));
  return worst;
}

double compose_bound_value(double M1, double Cf, double Cg, double rho_f, double rho_g, int k) {
  if (k < 1) throw PreconditionFailed("composition bound starts at k = 1");
  return M1 * Cf * Cg * rho_f * std::pow(rho_g, k) * std::pow(1 + M1 * rho_f * Cg, k - 1);
}

ComposedCertificate propagate_compose(const BoundCertificate& cf, const BoundCertificate& cg, ComposeMode mode,
                                      double rho_target, const CompositionSources& sources) {
  if (cf.M.to_string() != cg.M.to_string())
    throw IncompatibleWeightSequences(cf.M.to_string() + " vs " + cg.M.to_string());
  const WeightSequence& M = cf.M;
  const int K = std::min(cf.K, cg.K);
  if (K < 1) throw PreconditionFailed("composition needs a horizon of at least 1");
  require_log_convex(M, K);

  ComposedCertificate out;
  out.M1 = std::exp(M.log_value(1));
  out.f_used = cf;
  out.g_used = cg;
  if (mode == ComposeMode::beurling) {
    if (!(rho_target > 0)) throw PreconditionFailed("Beurling propagation needs a positive target radius");
    if (!sources.f || !sources.g) throw PreconditionFailed("Beurling propagation re-tunes constants and needs f and g samples");
    double s = (std::sqrt(1 + 4 * rho_target) - 1) / 2;  // sqrt(sigma)
    out.sigma = s * s;
    out.g_used = certificate_at(*sources.g, M, 1, K, s);
    double rho_f = s / (out.g_used.C * out.M1);
    out.f_used = certificate_at(*sources.f, M, 1, K, rho_f);
  }
  const double Cf = out.f_used.C, Cg = out.g_used.C, rf = out.f_used.rho, rg = out.g_used.rho, M1 = out.M1;

  out.cert.M = M;
  out.cert.from_order = 1;
  out.cert.K = K;
  out.cert.C = M1 * Cf * Cg * rf;
  out.cert.rho = rg * (1 + M1 * rf * Cg);
  for (int k = 1; k <= K; ++k) out.bound_values.push_back(compose_bound_value(M1, Cf, Cg, rf, rg, k));

  if (mode == ComposeMode::roumieu) {
    BoundCertificate p;
    p.M = M;
    p.from_order = 1;
    p.K = K;
    p.C = M1 * Cf * rf / (1 + M1 * rf);
    p.rho = rg * std::max(1.0, Cg) * (1 + M1 * rf);
    out.projective = p;
  }

  if (sources.composite) {
    if (sources.composite->order() < K) throw OrderMismatch("composite sampled below the horizon");
    auto lo = sup_lower(sources.composite->jets(), M, K);
    double worst = 0;
    for (int k = 1; k <= K; ++k) {
      double bound = out.bound_values[k - 1];
      if (out.projective) bound = std::min(bound, out.projective->C * std::pow(out.projective->rho, k));
      if (lo[k] > 0) worst = std::max(worst, bound > 0 ? lo[k] / bound : std::numeric_limits<double>::infinity());
    }
    out.measured_ratio = worst;
    out.cert.worst_ratio = certificate_ratio(out.cert, *sources.composite, true);
    out.majorizes = worst <= 1 + 1e-9;
  }
  return out;
}

InverseBoundTable propagate_inverse(const BoundCertificate& cert_f, double delta, int n, int K) {
  if (!(delta > 0)) throw PreconditionFailed("inf det must be positive");
  if (n < 1) throw DimensionMismatch("dimension must be positive");
  if (K < 1) throw PreconditionFailed("horizon must be at least 1");
  if (K > cert_f.K) throw HorizonExceeded("certificate covers orders up to " + std::to_string(cert_f.K));
  if (cert_f.from_order > 1) throw PreconditionFailed("certificate must cover k >= 1");
  const WeightSequence& M = cert_f.M;
  require_log_convex(M, K);

  const double M1 = std::exp(M.log_value(1));
  const double C = cert_f.C, rho = cert_f.rho;
  InverseBoundTable t;
  t.F1_bound = 1 + C * rho * M1;
  t.T_bound = std::pow(t.F1_bound, n - 1) / delta;
  t.theta = t.T_bound * 2 * C * rho * M1;
  t.beta.assign(K + 1, 0);
  t.b.assign(K + 1, 0);
  t.beta[1] = t.T_bound;
  if (K >= 2 && t.theta >= 1) throw ContractionFailure(2, t.theta);

  // S[k][j]: sum over compositions of k into j positive parts of prod beta_{a_i}.
  std::vector<std::vector<double>> S(K + 1, std::vector<double>(K + 1, 0));
  S[1][1] = t.beta[1];
  for (int k = 2; k <= K; ++k) {
    for (int j = 2; j <= k; ++j)
      for (int a = 1; a <= k - j + 1; ++a) S[k][j] += t.beta[a] * S[k - a][j - 1];
    double R = 0;
    for (int j = 2; j <= k; ++j) R += C * std::pow(rho, j) * std::exp(M.log_value(j)) * S[k][j];
    t.beta[k] = t.T_bound * R / (1 - t.theta);
    S[k][1] = t.beta[k];
  }
  for (int k = 1; k <= K; ++k) t.b[k] = t.beta[k] / std::exp(M.log_value(k));

  double lr = -std::numeric_limits<double>::infinity();
  if (t.b[1] > 0)
    for (int k = 2; k <= K; ++k)
      if (t.b[k] > 0) lr = std::max(lr, std::log(t.b[k] / t.b[1]) / (k - 1));
  t.rho_fit = std::isfinite(lr) ? std::exp(lr) : 1;
  for (int k = 1; k <= K; ++k) t.C_fit = std::max(t.C_fit, t.b[k] / std::pow(t.rho_fit, k));
  return t;
}

double inverse_table_ratio(const InverseBoundTable& t, const WeightSequence& M, const std::vector<Jet<double>>& jets) {
  if (jets.empty()) return 0;
  int K = std::min(static_cast<int>(t.b.size()) - 1, jets[0].order());
  auto lo = sup_lower(jets, M, K);
  double worst = 0;
  for (int k = 1; k <= K; ++k)
    if (lo[k] > 0) worst = std::max(worst, t.b[k] > 0 ? lo[k] / t.b[k] : std::numeric_limits<double>::infinity());
  return worst;
}

}  // namespace ultrajet
