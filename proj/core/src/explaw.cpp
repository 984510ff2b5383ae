#include "ultrajet/explaw.hpp"

#include "ultrajet/errors.hpp"
#include "ultrajet/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace ultrajet {

// ---------------------------------------------------------------- curry / uncurry

namespace {

struct SplitTables {
  std::vector<MultiIndex> outer;            // outer multi-indices in position order
  std::vector<std::size_t> joint_to_outer;  // joint position -> outer position
  std::vector<std::size_t> joint_to_inner;  // joint position -> inner position in its slice basis
};

SplitTables split_tables(int l, int m, int K) {
  SplitTables t;
  auto outer_basis = MonomialBasis::get(l, K);
  t.outer = multi_indices_up_to(l, K);
  auto joint = MonomialBasis::get(l + m, K);
  t.joint_to_outer.resize(joint->size());
  t.joint_to_inner.resize(joint->size());
  for (const auto& alpha : multi_indices_up_to(l + m, K)) {
    std::vector<int> a(alpha.values().begin(), alpha.values().begin() + l);
    std::vector<int> b(alpha.values().begin() + l, alpha.values().end());
    MultiIndex ma(a), mb(b);
    std::size_t p = joint->position(alpha);
    t.joint_to_outer[p] = outer_basis->position(ma);
    t.joint_to_inner[p] = MonomialBasis::get(m, K - ma.order())->position(mb);
  }
  return t;
}

void check_split(int n, Split s) {
  if (s.outer < 1 || s.inner < 1 || s.outer + s.inner != n)
    throw SplitMismatch("split " + std::to_string(s.outer) + ":" + std::to_string(s.inner) +
                        " does not match dimension " + std::to_string(n));
}

std::vector<int> iota(int from, int count) {
  std::vector<int> v(count);
  for (int i = 0; i < count; ++i) v[i] = from + i;
  return v;
}

}  // namespace

std::vector<MultiIndex> CurriedFamily::outer_indices() const { return multi_indices_up_to(split.outer, order); }

CurriedFamily curry(const SampledFunction& f, Split split) {
  check_split(f.n(), split);
  const int l = split.outer, m = split.inner, K = f.order();
  CurriedFamily g;
  g.outer_grid = f.grid().sub_grid(iota(0, l));
  g.inner_grid = f.grid().sub_grid(iota(l, m));
  g.split = split;
  g.order = K;
  g.target_dim = f.m();
  auto t = split_tables(l, m, K);
  const std::size_t n_in = g.inner_grid.node_count();
  g.slices.resize(g.outer_grid.node_count());
  parallel_for(g.slices.size(), [&](std::size_t o) {
    std::vector<std::vector<Jet<double>>> jets(t.outer.size());
    for (std::size_t i = 0; i < n_in; ++i) {
      auto y = g.inner_grid.coordinates(i);
      for (std::size_t a = 0; a < t.outer.size(); ++a) jets[a].emplace_back(y, f.m(), K - t.outer[a].order());
      const Jet<double>& src = f.jet(o * n_in + i);
      for (std::size_t p = 0; p < t.joint_to_outer.size(); ++p)
        for (int c = 0; c < f.m(); ++c) jets[t.joint_to_outer[p]][i].at(c, t.joint_to_inner[p]) = src.at(c, p);
    }
    for (std::size_t a = 0; a < t.outer.size(); ++a)
      g.slices[o].emplace_back(g.inner_grid, K - t.outer[a].order(), f.m(), std::move(jets[a]));
  });
  return g;
}

SampledFunction uncurry(const CurriedFamily& g) {
  const int l = g.split.outer, m = g.split.inner, K = g.order;
  if (g.outer_grid.dims() != l || g.inner_grid.dims() != m) throw SplitMismatch("grids do not match the split");
  auto t = split_tables(l, m, K);
  if (g.slices.size() != g.outer_grid.node_count()) throw SplitMismatch("one slice set per outer node is required");
  std::vector<Axis> axes = g.outer_grid.axes();
  for (const auto& a : g.inner_grid.axes()) axes.push_back(a);
  GridSpec joint(axes);
  const std::size_t n_in = g.inner_grid.node_count();
  std::vector<Jet<double>> jets(joint.node_count());
  for (std::size_t o = 0; o < g.slices.size(); ++o) {
    if (g.slices[o].size() != t.outer.size()) throw SplitMismatch("slice count differs from the outer index count");
    for (std::size_t a = 0; a < t.outer.size(); ++a)
      if (!(g.slices[o][a].grid() == g.inner_grid) || g.slices[o][a].order() != K - t.outer[a].order())
        throw SplitMismatch("slice grid or order is inconsistent");
    auto x = g.outer_grid.coordinates(o);
    for (std::size_t i = 0; i < n_in; ++i) {
      std::vector<double> base = x;
      const auto& y = g.slices[o][0].jet(i).base_point();
      base.insert(base.end(), y.begin(), y.end());
      Jet<double> j(base, g.target_dim, K);
      for (std::size_t p = 0; p < t.joint_to_outer.size(); ++p)
        for (int c = 0; c < g.target_dim; ++c)
          j.at(c, p) = g.slices[o][t.joint_to_outer[p]].jet(i).at(c, t.joint_to_inner[p]);
      jets[o * n_in + i] = std::move(j);
    }
  }
  return SampledFunction(joint, K, g.target_dim, std::move(jets));
}

// ---------------------------------------------------------------- explaw_compare

int tau_horizon(int K) { return std::max(K, 40); }

namespace {

constexpr double kBracketSlack = 1e-12;
constexpr double kQuadratureSlack = 1e-8;

bool weighted_family(Family f) {
  return f == Family::BM || f == Family::SLM || f == Family::WMp || f == Family::DM;
}

double scaled(double value, double log_denominator) {
  return value == 0 ? 0 : std::exp(std::log(value) - log_denominator);
}

struct Comparison {
  double worst = 0;
  bool ok = true;
  std::optional<std::vector<int>> witness;
  std::size_t count = 0;

  void add(double lhs, double rhs, double slack, const std::vector<int>& index) {
    ++count;
    double ratio = lhs == 0 ? 0 : rhs > 0 ? lhs / rhs : std::numeric_limits<double>::infinity();
    worst = std::max(worst, ratio);
    if (lhs > rhs * (1 + slack) + 1e-300 && ok) {
      ok = false;
      witness = index;
    }
  }
};

struct Weights {
  bool weighted = false;
  const WeightSequence* M = nullptr;
  const WeightSequence* L = nullptr;

  double Lf(int k) const { return L ? L->log_factorial_weight(k) : std::lgamma(k + 1.0); }
  double Mf(int l) const { return M->log_factorial_weight(l); }
  double mixed(int k1, int k2, int l1, int l2, double r1, double r2) const {
    if (!weighted) return 0;
    return (k1 + l1) * std::log(r1) + (k2 + l2) * std::log(r2) + Lf(k1) + Lf(k2) + Mf(l1) + Mf(l2);
  }
  double joint(int k, int l, double r) const {
    if (!weighted) return 0;
    return (k + l) * std::log(r) + Lf(k) + Mf(l);
  }
};

double tau_for(const WeightSequence& s, int K) {
  if (!check_property(s, Property::weakly_log_convex, std::max(K, 2)).holds_up_to_K)
    throw PreconditionFailed(s.to_string() + " is not weakly log-convex up to K=" + std::to_string(K));
  auto v = check_property(s, Property::moderate_growth, tau_horizon(K));
  if (!v.stabilized || !v.constant_estimate)
    throw PreconditionFailed("moderate-growth constant of " + s.to_string() + " has not stabilized by K=" +
                             std::to_string(tau_horizon(K)));
  return *v.constant_estimate;
}

std::vector<double> monomial_table(const MonomialBasis& b, const std::vector<double>& z) {
  std::vector<double> mono(b.size());
  mono[0] = 1;
  for (std::size_t p = 1; p < b.size(); ++p) mono[p] = mono[b.parent(p)] * z[b.parent_var(p)];
  return mono;
}

double target_norm(const Jet<double>& j, std::size_t p) {
  double s = 0;
  for (int c = 0; c < j.m(); ++c) s += j.at(c, p) * j.at(c, p);
  return std::sqrt(s);
}

// Index helpers for the mixed tables: (k1, k2, l1, l2) each in [0, K].
struct Dims {
  int K;
  std::size_t at(int k1, int k2, int l1, int l2) const {
    std::size_t e = K + 1;
    return ((static_cast<std::size_t>(k1) * e + k2) * e + l1) * e + l2;
  }
  std::size_t size() const {
    std::size_t e = K + 1;
    return e * e * e * e;
  }
  std::size_t jat(int k, int l) const { return static_cast<std::size_t>(k) * (K + 1) + l; }
};

struct Tables {
  std::vector<double> mixed_up, mixed_lo, joint_up, joint_lo;
};

Tables sup_tables(const SampledFunction& f, Split split, int K, int kmax) {
  const int l = split.outer, n = f.n();
  const MonomialBasis& b = f.jet(0).basis();
  const std::size_t npos = b.degree_begin(K + 1);
  std::vector<int> l1_of(npos), l2_of(npos);
  for (const auto& alpha : multi_indices_up_to(n, K)) {
    std::size_t p = b.position(alpha);
    int s = 0;
    for (int i = 0; i < l; ++i) s += alpha[i];
    l1_of[p] = s;
    l2_of[p] = alpha.order() - s;
  }
  auto joint_dirs = sample_directions(n);
  std::vector<std::vector<double>> joint_tables, pair_tables;
  for (const auto& u : joint_dirs) {
    joint_tables.push_back(monomial_table(b, u));
    std::vector<double> z(n, 0.0);
    double n1 = 0, n2 = 0;
    for (int i = 0; i < n; ++i) (i < l ? n1 : n2) += u[i] * u[i];
    n1 = std::sqrt(n1);
    n2 = std::sqrt(n2);
    for (int i = 0; i < n; ++i) {
      double norm = i < l ? n1 : n2;
      z[i] = norm > 0 ? u[i] / norm : 0;
    }
    if (n1 == 0) z[0] = 1;
    if (n2 == 0) z[l] = 1;
    pair_tables.push_back(monomial_table(b, z));
  }
  auto d1 = sample_directions(l), d2 = sample_directions(n - l);
  if (d1.size() * d2.size() <= 4096)
    for (const auto& v : d1)
      for (const auto& w : d2) {
        std::vector<double> z = v;
        z.insert(z.end(), w.begin(), w.end());
        pair_tables.push_back(monomial_table(b, z));
      }

  Dims dims{K};
  std::vector<double> fact(K + 1);
  for (int k = 0; k <= K; ++k) fact[k] = std::tgamma(k + 1.0);

  const std::size_t nodes = f.jets().size();
  const std::size_t chunks = std::min<std::size_t>(nodes, 64);
  std::vector<Tables> partial(chunks);
  parallel_for(chunks, [&](std::size_t c) {
    Tables& t = partial[c];
    t.mixed_up.assign(dims.size(), 0);
    t.mixed_lo.assign(dims.size(), 0);
    t.joint_up.assign((K + 1) * (K + 1), 0);
    t.joint_lo.assign((K + 1) * (K + 1), 0);
    std::vector<double> Jup(K + 1), Jlo(K + 1), Aup((K + 1) * (K + 1)), Alo((K + 1) * (K + 1));
    std::vector<double> acc;
    const int m = f.m();
    for (std::size_t node = c * nodes / chunks; node < (c + 1) * nodes / chunks; ++node) {
      const Jet<double>& j = f.jet(node);
      std::fill(Jup.begin(), Jup.end(), 0.0);
      std::fill(Jlo.begin(), Jlo.end(), 0.0);
      std::fill(Aup.begin(), Aup.end(), 0.0);
      std::fill(Alo.begin(), Alo.end(), 0.0);
      for (std::size_t p = 0; p < npos; ++p) {
        double s = target_norm(j, p);
        Jup[l1_of[p] + l2_of[p]] += s;
        Aup[dims.jat(l1_of[p], l2_of[p])] += s;
      }
      for (int k = 0; k <= K; ++k) Jup[k] *= fact[k];
      for (int a = 0; a <= K; ++a)
        for (int bb = 0; a + bb <= K; ++bb) Aup[dims.jat(a, bb)] *= fact[a] * fact[bb];
      acc.assign(static_cast<std::size_t>(K + 1) * m, 0.0);
      for (const auto& mono : joint_tables) {
        std::fill(acc.begin(), acc.end(), 0.0);
        for (std::size_t p = 0; p < npos; ++p)
          for (int cc = 0; cc < m; ++cc) acc[(l1_of[p] + l2_of[p]) * m + cc] += j.at(cc, p) * mono[p];
        for (int k = 0; k <= K; ++k) {
          double s = 0;
          for (int cc = 0; cc < m; ++cc) s += acc[k * m + cc] * acc[k * m + cc];
          Jlo[k] = std::max(Jlo[k], fact[k] * std::sqrt(s));
        }
      }
      acc.assign(static_cast<std::size_t>((K + 1) * (K + 1)) * m, 0.0);
      for (const auto& mono : pair_tables) {
        std::fill(acc.begin(), acc.end(), 0.0);
        for (std::size_t p = 0; p < npos; ++p)
          for (int cc = 0; cc < m; ++cc) acc[dims.jat(l1_of[p], l2_of[p]) * m + cc] += j.at(cc, p) * mono[p];
        for (int a = 0; a <= K; ++a)
          for (int bb = 0; a + bb <= K; ++bb) {
            double s = 0;
            for (int cc = 0; cc < m; ++cc) s += acc[dims.jat(a, bb) * m + cc] * acc[dims.jat(a, bb) * m + cc];
            Alo[dims.jat(a, bb)] = std::max(Alo[dims.jat(a, bb)], fact[a] * fact[bb] * std::sqrt(s));
          }
      }
      for (int k = 0; k <= K; ++k) Jlo[k] = std::min(Jlo[k], Jup[k]);

      auto x = f.grid().coordinates(node);
      double a1 = 0, a2 = 0;
      for (int i = 0; i < n; ++i) (i < l ? a1 : a2) += x[i] * x[i];
      a1 = std::sqrt(a1);
      a2 = std::sqrt(a2);
      for (int k1 = 0; k1 <= kmax; ++k1)
        for (int k2 = 0; k1 + k2 <= kmax; ++k2) {
          double w = std::pow(1 + a1, k1) * std::pow(1 + a2, k2);
          for (int l1 = 0; l1 <= K; ++l1)
            for (int l2 = 0; l1 + l2 <= K; ++l2) {
              std::size_t at = dims.at(k1, k2, l1, l2);
              t.mixed_up[at] = std::max(t.mixed_up[at], w * Aup[dims.jat(l1, l2)]);
              t.mixed_lo[at] = std::max(t.mixed_lo[at], w * Alo[dims.jat(l1, l2)]);
            }
        }
      for (int k = 0; k <= kmax; ++k) {
        double w = std::pow(1 + a1 + a2, k);
        for (int ll = 0; ll <= K; ++ll) {
          t.joint_up[dims.jat(k, ll)] = std::max(t.joint_up[dims.jat(k, ll)], w * Jup[ll]);
          t.joint_lo[dims.jat(k, ll)] = std::max(t.joint_lo[dims.jat(k, ll)], w * Jlo[ll]);
        }
      }
    }
  });
  Tables out = partial[0];
  for (std::size_t c = 1; c < chunks; ++c)
    for (auto [dst, src] : {std::pair{&out.mixed_up, &partial[c].mixed_up}, std::pair{&out.mixed_lo, &partial[c].mixed_lo},
                            std::pair{&out.joint_up, &partial[c].joint_up}, std::pair{&out.joint_lo, &partial[c].joint_lo}})
      for (std::size_t i = 0; i < dst->size(); ++i) (*dst)[i] = std::max((*dst)[i], (*src)[i]);
  return out;
}

void compare_pointwise(const SampledFunction& f, Split split, int K, int kmax, const Weights& w, ExplawReport& r) {
  Tables t = sup_tables(f, split, K, kmax);
  Dims dims{K};
  const double rho = r.rho.value_or(1), rd = r.rho_direction2.value_or(1);
  Comparison d1, d2;
  double mixed_norm = 0, joint_norm = 0;
  for (int k1 = 0; k1 <= kmax; ++k1)
    for (int k2 = 0; k1 + k2 <= kmax; ++k2)
      for (int l1 = 0; l1 <= K; ++l1)
        for (int l2 = 0; l1 + l2 <= K; ++l2) {
          double lhs = scaled(t.mixed_up[dims.at(k1, k2, l1, l2)], w.mixed(k1, k2, l1, l2, r.rho1, r.rho2));
          double rhs = scaled(t.joint_up[dims.jat(k1 + k2, l1 + l2)], w.joint(k1 + k2, l1 + l2, rho));
          mixed_norm = std::max(mixed_norm, lhs);
          d1.add(lhs, rhs, kBracketSlack, {k1, k2, l1, l2});
        }
  for (int k = 0; k <= kmax; ++k)
    for (int l = 0; l <= K; ++l) {
      double joint_up = scaled(t.joint_up[dims.jat(k, l)], w.joint(k, l, rho));
      joint_norm = std::max(joint_norm, joint_up);
      double lhs = scaled(t.joint_lo[dims.jat(k, l)], w.joint(k, l, 2 * rd));
      double rhs = 0;
      for (int k1 = 0; k1 <= k; ++k1)
        for (int l1 = 0; l1 <= l; ++l1) {
          double coef = w.weighted ? 1.0 : std::ldexp(to_double(Rational(binomial(l, l1))), k);
          rhs += coef * scaled(t.mixed_lo[dims.at(k1, k - k1, l1, l - l1)], w.mixed(k1, k - k1, l1, l - l1, rd, rd));
        }
      d2.add(lhs, rhs, kBracketSlack, {k, l});
    }
  r.direction1_ok = d1.ok;
  r.direction2_ok = d2.ok;
  r.direction1_ratio = d1.worst;
  r.direction2_ratio = d2.worst;
  r.direction1_witness = d1.witness;
  r.direction2_witness = d2.witness;
  r.comparisons = d1.count + d2.count;
  if (w.weighted) {
    r.mixed_norm = mixed_norm;
    r.joint_norm = joint_norm;
  }
}

void compare_sobolev(const SampledFunction& f, Split split, int K, double p, const Weights& w, ExplawReport& r) {
  const int n = f.n(), l = split.outer;
  auto alphas = multi_indices_up_to(n, K);
  for (const auto& a : alphas) check_boundary_mass(f, a);
  CurriedFamily g = curry(f, split);
  auto outer_basis = MonomialBasis::get(l, K);
  const std::size_t n_in = g.inner_grid.node_count();
  std::vector<double> joint(alphas.size()), iterated(alphas.size());
  parallel_for(alphas.size(), [&](std::size_t ai) {
    const MultiIndex& alpha = alphas[ai];
    MultiIndex a1(std::vector<int>(alpha.values().begin(), alpha.values().begin() + l));
    MultiIndex a2(std::vector<int>(alpha.values().begin() + l, alpha.values().end()));
    double af = alpha.factorial_double();
    double j = 0;
    for (std::size_t node = 0; node < f.jets().size(); ++node) {
      double s = 0;
      for (int c = 0; c < f.m(); ++c) {
        double v = f.jet(node).coeff(c, alpha) * af;
        s += v * v;
      }
      j += f.grid().simpson_weight(node) * std::pow(std::sqrt(s), p);
    }
    joint[ai] = j;
    std::size_t slot = outer_basis->position(a1);
    double it = 0;
    for (std::size_t o = 0; o < g.slices.size(); ++o) {
      const SampledFunction& slice = g.slices[o][slot];
      double inner = 0;
      for (std::size_t i = 0; i < n_in; ++i) {
        double s = 0;
        for (int c = 0; c < f.m(); ++c) {
          double v = slice.jet(i).coeff(c, a2) * a1.factorial_double() * a2.factorial_double();
          s += v * v;
        }
        inner += g.inner_grid.simpson_weight(i) * std::pow(std::sqrt(s), p);
      }
      it += g.outer_grid.simpson_weight(o) * inner;
    }
    iterated[ai] = it;
  });
  Comparison d1, d2;
  double disc = 0, mixed_norm = 0, joint_norm = 0;
  const double rho = r.rho.value_or(1), rd = r.rho_direction2.value_or(1);
  for (std::size_t ai = 0; ai < alphas.size(); ++ai) {
    disc = std::max(disc, std::abs(iterated[ai] - joint[ai]) / std::max(1.0, joint[ai]));
    const MultiIndex& alpha = alphas[ai];
    int o1 = 0;
    for (int i = 0; i < l; ++i) o1 += alpha[i];
    int o2 = alpha.order() - o1;
    double mixed = std::pow(iterated[ai], 1 / p), jo = std::pow(joint[ai], 1 / p);
    double lhs1 = scaled(mixed, w.mixed(0, 0, o1, o2, r.rho1, r.rho2));
    double rhs1 = scaled(jo, w.joint(0, o1 + o2, rho));
    mixed_norm = std::max(mixed_norm, lhs1);
    joint_norm = std::max(joint_norm, rhs1);
    d1.add(lhs1, rhs1, kQuadratureSlack, alpha.values());
    d2.add(scaled(jo, w.joint(0, o1 + o2, 2 * rd)), scaled(mixed, w.mixed(0, 0, o1, o2, rd, rd)), kQuadratureSlack,
           alpha.values());
  }
  r.fubini_discrepancy = disc;
  r.direction1_ok = d1.ok && disc <= kQuadratureSlack;
  r.direction2_ok = d2.ok && disc <= kQuadratureSlack;
  r.direction1_ratio = d1.worst;
  r.direction2_ratio = d2.worst;
  r.direction1_witness = d1.witness;
  r.direction2_witness = d2.witness;
  r.comparisons = d1.count + d2.count;
  if (w.weighted) {
    r.mixed_norm = mixed_norm;
    r.joint_norm = joint_norm;
  }
}

bool support_product(const SampledFunction& f, Split split) {
  if (!f.support()) return false;
  CurriedFamily g = curry(f, split);
  const int l = split.outer, m = split.inner;
  std::vector<int> lo(l, std::numeric_limits<int>::max()), hi(l, -1);
  std::vector<double> ilo(m, std::numeric_limits<double>::infinity()), ihi(m, -std::numeric_limits<double>::infinity());
  bool any = false;
  for (std::size_t o = 0; o < g.slices.size(); ++o) {
    bool nonzero = false;
    for (const auto& s : g.slices[o]) {
      bool live = std::any_of(s.jets().begin(), s.jets().end(), [](const Jet<double>& j) { return !j.is_zero(); });
      if (!live) continue;
      if (!s.support()) return false;
      nonzero = true;
      for (int d = 0; d < m; ++d) {
        ilo[d] = std::min(ilo[d], s.support()->lo[d]);
        ihi[d] = std::max(ihi[d], s.support()->hi[d]);
      }
    }
    if (!nonzero) continue;
    any = true;
    auto idx = g.outer_grid.unflatten(o);
    for (int d = 0; d < l; ++d) {
      lo[d] = std::min(lo[d], idx[d]);
      hi[d] = std::max(hi[d], idx[d]);
    }
  }
  if (!any) return true;
  const SupportInfo& s = *f.support();
  for (int d = 0; d < l; ++d)
    if (s.lo[d] != g.outer_grid.axis(d).node(lo[d] - 1) || s.hi[d] != g.outer_grid.axis(d).node(hi[d] + 1)) return false;
  for (int d = 0; d < m; ++d)
    if (s.lo[l + d] != ilo[d] || s.hi[l + d] != ihi[d]) return false;
  return true;
}

}  // namespace

ExplawReport explaw_compare(const SampledFunction& f, Split split, const ClassSpec& spec, double rho1, double rho2,
                            int K) {
  spec.validate();
  check_split(f.n(), split);
  if (K < 0 || K > f.order()) throw OrderMismatch("K exceeds the sampled order");
  ExplawReport r;
  r.family = spec.family;
  r.split = split;
  r.K = K;
  Weights w;
  w.weighted = weighted_family(spec.family);
  if (w.weighted) {
    if (!(rho1 > 0) || !(rho2 > 0)) throw PreconditionFailed("rho1 and rho2 must be positive");
    r.rho1 = rho1;
    r.rho2 = rho2;
    w.M = &*spec.M;
    double tau = tau_for(*spec.M, K);
    if (spec.L) {
      w.L = &*spec.L;
      tau = std::max(tau, tau_for(*spec.L, K));
    }
    r.tau_used = tau;
    r.rho = std::min(rho1, rho2) / (2 * tau);
    r.rho_direction2 = std::min(rho1, rho2);
  }
  switch (spec.family) {
    case Family::Wp:
    case Family::WMp: compare_sobolev(f, split, K, *spec.p, w, r); break;
    case Family::S:
    case Family::SLM: compare_pointwise(f, split, K, K, w, r); break;
    default: compare_pointwise(f, split, K, 0, w, r); break;
  }
  if (spec.family == Family::D || spec.family == Family::DM) r.support_product_ok = support_product(f, split);
  return r;
}

// ---------------------------------------------------------------- inequality kit

std::string to_string(KitCase c) {
  switch (c) {
    case KitCase::eq_n: return "eq_n";
    case KitCase::eq_abelem: return "eq_abelem";
    case KitCase::eq_wlc: return "eq_wlc";
    case KitCase::eq_mg: return "eq_mg";
    case KitCase::eq_productnorm: return "eq_productnorm";
  }
  return {};
}

KitCase parse_kit_case(std::string_view text) {
  for (auto c : {KitCase::eq_n, KitCase::eq_abelem, KitCase::eq_wlc, KitCase::eq_mg, KitCase::eq_productnorm})
    if (text == to_string(c)) return c;
  throw PreconditionFailed("unknown inequality case '" + std::string(text) + "'");
}

KitReport kit_eq_n(const Rational& a1, const Rational& a2, int k) {
  if (a1 < 0 || a2 < 0 || k < 0) throw PreconditionFailed("eq_n needs a1, a2 >= 0 and k >= 0");
  KitReport r;
  r.kase = KitCase::eq_n;
  Rational lhs = 0, binom_sum = 0;
  for (int k1 = 0; k1 <= k; ++k1) {
    Rational t = pow(1 + a1, k1) * pow(1 + a2, k - k1);
    lhs += t;
    binom_sum += Rational(binomial(k, k1)) * t;
  }
  Rational scale = pow(Rational(1, 2), k);
  Rational middle = scale * pow(2 + a1 + a2, k);
  r.lhs = lhs;
  r.rhs = middle;
  r.slack = r.lhs - r.rhs;
  r.holds = lhs >= scale * binom_sum && scale * binom_sum == middle && middle >= scale * pow(1 + a1 + a2, k);
  return r;
}

KitReport kit_eq_abelem(const std::vector<Rational>& row) {
  if (row.empty()) throw PreconditionFailed("eq_abelem needs a non-empty row");
  KitReport r;
  r.kase = KitCase::eq_abelem;
  Rational b = 0, mx = row[0];
  bool nonneg = true;
  for (const auto& a : row) {
    nonneg = nonneg && a >= 0;
    b += a;
    mx = std::max(mx, a);
  }
  if (!nonneg) throw PreconditionFailed("eq_abelem needs non-negative entries");
  r.lhs = b;
  r.rhs = Rational(static_cast<long>(row.size())) * mx;
  r.slack = r.rhs - r.lhs;
  r.holds = mx <= b && b <= r.rhs;
  return r;
}

KitReport kit_eq_wlc(const WeightSequence& M, int k1, int k2) {
  if (k1 < 0 || k2 < 0) throw PreconditionFailed("eq_wlc needs k1, k2 >= 0");
  KitReport r;
  r.kase = KitCase::eq_wlc;
  if (M.exact()) {
    r.lhs = Rational(factorial(k1) * factorial(k2)) * M.exact_value(k1) * M.exact_value(k2);
    r.rhs = Rational(factorial(k1 + k2)) * M.exact_value(k1 + k2);
    r.slack = r.rhs - r.lhs;
    r.holds = r.lhs <= r.rhs;
  } else {
    r.exact = false;
    double lhs = M.log_factorial_weight(k1) + M.log_factorial_weight(k2), rhs = M.log_factorial_weight(k1 + k2);
    r.lhs = to_rational(lhs);
    r.rhs = to_rational(rhs);
    r.slack = r.rhs - r.lhs;
    r.holds = lhs <= rhs + 1e-12 * std::max(1.0, std::abs(rhs));
  }
  return r;
}

KitReport kit_eq_mg(const WeightSequence& M, const Rational& tau, int j, int k) {
  if (j < 0 || k < 0 || tau <= 0) throw PreconditionFailed("eq_mg needs j, k >= 0 and tau > 0");
  KitReport r;
  r.kase = KitCase::eq_mg;
  if (M.exact()) {
    r.lhs = M.exact_value(j + k);
    r.rhs = pow(tau, j + k) * M.exact_value(j) * M.exact_value(k);
    r.slack = r.rhs - r.lhs;
    r.holds = r.lhs <= r.rhs;
  } else {
    r.exact = false;
    double lhs = M.log_value(j + k), rhs = (j + k) * log_positive(tau) + M.log_value(j) + M.log_value(k);
    r.lhs = to_rational(lhs);
    r.rhs = to_rational(rhs);
    r.slack = r.rhs - r.lhs;
    r.holds = lhs <= rhs + 1e-12 * std::max(1.0, std::abs(rhs));
  }
  return r;
}

KitReport kit_eq_productnorm(const std::vector<Rational>& x1, const std::vector<Rational>& x2,
                             const std::vector<Rational>& y1, const std::vector<Rational>& y2) {
  if (x1.size() != y1.size() || x2.size() != y2.size()) throw DimensionMismatch("factor dimensions differ");
  auto l1 = [](const std::vector<Rational>& v) {
    Rational s = 0;
    for (const auto& x : v) s += abs(x);
    return s;
  };
  auto add = [](std::vector<Rational> a, const std::vector<Rational>& b) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    return a;
  };
  Rational nx = l1(x1) + l1(x2), ny = l1(y1) + l1(y2);
  Rational nsum = l1(add(x1, y1)) + l1(add(x2, y2));
  KitReport r;
  r.kase = KitCase::eq_productnorm;
  r.lhs = nsum;
  r.rhs = nx + ny;
  r.slack = r.rhs - r.lhs;
  r.holds = nsum <= nx + ny && l1(x1) <= nx && l1(x2) <= nx && l1(y1) <= ny && l1(y2) <= ny;
  return r;
}

KitSweep kit_random_sweep(KitCase c, int trials, std::uint64_t seed) {
  if (trials < 0) throw PreconditionFailed("trial count must be non-negative");
  std::mt19937_64 rng(seed);
  auto rational = [&](int num_lo, int num_hi, int den_max) {
    std::uniform_int_distribution<int> num(num_lo, num_hi), den(1, den_max);
    int a = num(rng);
    return Rational(a, den(rng));
  };
  auto index = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };

  KitSweep out;
  out.kase = c;
  out.trials = trials;
  for (int t = 0; t < trials; ++t) {
    KitReport r;
    switch (c) {
      case KitCase::eq_n: {
        Rational a1 = rational(0, 20, 7), a2 = rational(0, 20, 7);
        r = kit_eq_n(a1, a2, index(0, 12));
        break;
      }
      case KitCase::eq_abelem: {
        std::vector<Rational> row(index(0, 10) + 1);
        for (auto& a : row) a = rational(0, 50, 9);
        r = kit_eq_abelem(row);
        break;
      }
      case KitCase::eq_wlc: {
        if (t % 2 == 0) {
          int s = index(0, 3);
          int k1 = index(0, 8);
          r = kit_eq_wlc(WeightSequence::gevrey(s), k1, index(0, 8));
          break;
        }
        // log-convex table: non-decreasing ratios >= 1
        std::vector<Rational> table{Rational(1)};
        Rational q = 1;
        int n = index(3, 9);
        for (int i = 1; i < n; ++i) {
          q += rational(0, 3, 4);
          table.push_back(table.back() * q);
        }
        int k1 = index(0, n - 1);
        r = kit_eq_wlc(WeightSequence::table(table), k1, index(0, n - 1 - k1));
        break;
      }
      case KitCase::eq_mg: {
        int s = index(0, 3);
        int j = index(0, 10);
        r = kit_eq_mg(WeightSequence::gevrey(s), pow(Rational(2), s), j, index(0, 10));
        break;
      }
      case KitCase::eq_productnorm: {
        int d1 = index(1, 4), d2 = index(1, 4);
        auto vec = [&](int d) {
          std::vector<Rational> v(d);
          for (auto& x : v) x = rational(-30, 30, 8);
          return v;
        };
        auto x1 = vec(d1), x2 = vec(d2), y1 = vec(d1), y2 = vec(d2);
        r = kit_eq_productnorm(x1, x2, y1, y2);
        break;
      }
    }
    out.all_exact = out.all_exact && r.exact;
    if (!r.holds) {
      ++out.failures;
      if (!out.first_failure) out.first_failure = t;
    }
  }
  return out;
}

// ---------------------------------------------------------------- counterexample

namespace {

// log(M_{j+k}/(M_j M_k)) >= (j+k) log(needed), exactly when possible.
bool pair_holds(const WeightSequence& M, int j, int k, const std::optional<Rational>& needed, double log_needed,
                double& log_ratio) {
  log_ratio = (M.log_value(j + k) - M.log_value(j) - M.log_value(k)) / (j + k);
  if (M.exact() && needed) return M.exact_value(j + k) >= pow(*needed, j + k) * M.exact_value(j) * M.exact_value(k);
  return log_ratio >= log_needed;
}

}  // namespace

CounterexampleRun counterexample_run(const WeightSequence& M, const WeightSequence& L, int N,
                                     const std::vector<double>& sigma_set, int K_search) {
  if (N < 1 || K_search < 1) throw PreconditionFailed("N and K_search must be positive");
  if (sigma_set.empty()) throw PreconditionFailed("sigma_set must not be empty");
  for (double s : sigma_set)
    if (!(s > 0)) throw PreconditionFailed("sigma values must be positive");
  if (check_property(M, Property::moderate_growth, std::max(K_search, 2)).stabilized)
    throw PreconditionFailed(M.to_string() + " shows moderate growth up to K=" + std::to_string(K_search));
  for (int k = 0; k <= std::max(N, 2 * K_search); ++k)
    if (L.log_factorial_weight(k) < -1e-12) throw PreconditionFailed("L must satisfy k! L_k >= 1");

  CounterexampleRun run;
  run.M = M;
  run.L = L;
  run.sigma_set = sigma_set;
  for (int n = 1; n <= N; ++n) {
    std::optional<Rational> needed;
    double log_needed = 2 * std::log(n) + L.log_factorial_weight(n);
    if (L.exact()) needed = Rational(n * n) * Rational(factorial(n)) * L.exact_value(n);
    bool found = false;
    double best = -std::numeric_limits<double>::infinity();
    for (int s = n + 1; s <= 2 * K_search && !found; ++s) {
      for (int j = n; j <= std::min(s - 1, K_search) && !found; ++j) {
        int k = s - j;
        if (k > K_search) continue;
        double lr;
        bool ok = pair_holds(M, j, k, needed, log_needed, lr);
        best = std::max(best, lr);
        if (ok) {
          run.pairs.push_back({n, j, k, lr, log_needed});
          found = true;
        }
      }
    }
    if (!found) throw SearchExhausted(n, best, log_needed);
  }
  int hmax = 0;
  for (const auto& p : run.pairs) hmax = std::max(hmax, p.j + p.k);
  for (int k = 0; k <= hmax; ++k) run.log_h.push_back(M.log_factorial_weight(k));

  const std::size_t S = sigma_set.size();
  auto log_term = [&](const CounterexamplePair& p, int q) {
    // h_{j+q} / (n! j! L_n M_j n^{n+j})
    return run.log_h[p.j + q] - L.log_factorial_weight(p.n) - M.log_factorial_weight(p.j) -
           (p.n + p.j) * std::log(p.n);
  };
  for (const auto& p : run.pairs) {
    std::vector<double> lb(S), llb(S), lsum(S), lsingle(S), lafter(S);
    for (std::size_t s = 0; s < S; ++s) {
      double ls = std::log(sigma_set[s]);
      llb[s] = 2 * p.k * std::log(p.n) - p.k * ls;
      lb[s] = std::exp(llb[s]);
      double front = -p.k * ls - M.log_factorial_weight(p.k);
      // truncated functional sum at q = k_n over the pairs whose index j_n' + k_n has a prescribed h
      double mx = -std::numeric_limits<double>::infinity();
      std::vector<double> terms;
      for (const auto& p2 : run.pairs)
        if (p2.j + p.k <= hmax) terms.push_back(log_term(p2, p.k));
      for (double t : terms) mx = std::max(mx, t);
      double acc = 0;
      for (double t : terms) acc += std::exp(t - mx);
      lsum[s] = front + mx + std::log(acc);
      lsingle[s] = front + log_term(p, p.k);
      lafter[s] = (p.j + p.k) * p.log_needed - L.log_factorial_weight(p.n) - (p.n + p.j) * std::log(p.n) - p.k * ls;
      double tol = 1e-9 * std::max(1.0, std::abs(lsingle[s]));
      run.chain_ok = run.chain_ok && lsum[s] >= lsingle[s] - tol && lsingle[s] >= lafter[s] - tol &&
                     lafter[s] >= llb[s] - tol;
    }
    run.lower_bounds.push_back(lb);
    run.log_lower_bounds.push_back(llb);
    run.log_functional_sum.push_back(lsum);
    run.log_single_term.push_back(lsingle);
    run.log_after_pair_bound.push_back(lafter);
  }
  for (std::size_t i = 1; i < run.pairs.size(); ++i)
    for (std::size_t s = 0; s < S; ++s) {
      if (run.log_lower_bounds[i][s] < run.log_lower_bounds[i - 1][s]) run.monotone = false;
      if (run.pairs[i].n >= 3 && !(run.log_lower_bounds[i][s] > run.log_lower_bounds[i - 1][s]))
        run.strictly_increasing_from_2 = false;
    }
  return run;
}

}  // namespace ultrajet
