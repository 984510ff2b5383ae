#include "ultrajet/cli/commands.hpp"

#include "ultrajet/cli/config.hpp"
#include "ultrajet/errors.hpp"
#include "ultrajet/funcdsl.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace ultrajet::cli {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  return out;
}

int to_int(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    int v = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw UsageError("invalid integer '" + s + "' in " + what);
  }
}

void require(const std::string& value, const std::string& flag) {
  if (value.empty()) throw UsageError("missing required option --" + flag);
}

std::vector<std::vector<int>> parse_indices(const std::string& text) {
  std::vector<std::vector<int>> out;
  if (text.empty()) return out;
  for (const auto& part : split(text, ';')) {
    std::vector<int> idx;
    for (const auto& v : split(part, ',')) idx.push_back(to_int(v, "--indices"));
    out.push_back(std::move(idx));
  }
  return out;
}

Split parse_split(const std::string& text) {
  auto parts = split(text, ':');
  if (parts.size() != 2) throw UsageError("--split expects l:m, got '" + text + "'");
  return {to_int(parts[0], "--split"), to_int(parts[1], "--split")};
}

json class_json(const ClassArgs& c, const ClassSpec& s) {
  return json{{"family", to_string(s.family)},
              {"type", to_string(s.type)},
              {"M", s.M ? json(s.M->to_string()) : json(nullptr)},
              {"L", s.L ? json(s.L->to_string()) : json(nullptr)},
              {"rho", s.rho ? json(*s.rho) : json(nullptr)},
              {"p", s.p ? json(*s.p) : json(nullptr)},
              {"requested", c.family}};
}

bool weighted_family(Family f) { return f == Family::BM || f == Family::SLM || f == Family::WMp || f == Family::DM; }

json diffmap_json(const DiffMap& F) {
  return json{{"f", F.f.to_string()},
              {"inf_det", F.inf_det_estimate},
              {"inf_det_node", F.inf_det_node},
              {"inf_det_at", F.report_grid.coordinates(F.inf_det_node)},
              {"class_tag", F.class_tag ? to_json(*F.class_tag) : json(nullptr)}};
}

Expr identity_plus(const Expr& f) {
  const int n = f.arity();
  std::vector<Expr> parts;
  for (int i = 0; i < n; ++i) parts.push_back(Expr::variable(i, n) + f.component(i));
  return n == 1 ? parts[0] : Expr::vector(parts);
}

std::string strip_id(const std::string& text, bool& had_id) {
  std::string s = text;
  s.erase(0, s.find_first_not_of(' '));
  had_id = s.rfind("id+", 0) == 0;
  return had_id ? s.substr(3) : s;
}

}  // namespace

ClassSpec make_class_spec(const ClassArgs& c) {
  Family f = parse_family(c.family);
  std::optional<double> p = c.p;
  if ((f == Family::Wp || f == Family::WMp) && !p) p = 2.0;
  if (!weighted_family(f)) return ClassSpec::plain(f, p);
  require(c.M, "M");
  std::optional<WeightSequence> L;
  if (!c.L.empty()) L = WeightSequence::parse(c.L);
  return ClassSpec::weighted(f, parse_class_type(c.type), WeightSequence::parse(c.M), c.rho, L, p);
}

// ---------------------------------------------------------------- ws

Outcome ws_analyze(const WsAnalyzeArgs& a) {
  require(a.seq, "seq");
  if (a.K < 1) throw UsageError("--K must be positive");
  WeightSequence M = WeightSequence::parse(a.seq);
  Outcome o;
  o.results["sequence"] = M.to_string();
  o.results["exact"] = M.exact();
  o.results["K"] = a.K;
  std::vector<double> logs;
  for (int k = 0; k <= a.K; ++k) logs.push_back(M.log_value(k));
  o.results["log_values"] = logs;
  json props = json::array();
  for (Property p : {Property::log_convex, Property::weakly_log_convex, Property::derivation_closed,
                     Property::moderate_growth})
    props.push_back(to_json(check_property(M, p, a.K)));
  o.results["properties"] = std::move(props);
  o.results["quasianalytic"] = to_json(quasianalytic_partial_sums(M, a.K));
  return o;
}

// ---------------------------------------------------------------- fn

Outcome fn_norm(const FnNormArgs& a) {
  require(a.expr, "expr");
  require(a.grid, "grid");
  Expr e = Expr::parse(a.expr, a.n);
  ClassSpec spec = make_class_spec(a.cls);
  auto idx = parse_indices(a.indices);
  GridSpec grid = GridSpec::parse(a.grid);

  Outcome o;
  o.results["expr"] = e.to_string();
  o.results["grid"] = grid.to_string();
  o.results["K"] = a.K;
  o.results["class"] = class_json(a.cls, spec);
  SampledFunction f = sample(e, grid, a.K);
  o.results["seminorm"] = to_json(seminorm(f, spec, idx));
  json refinements = json::array();
  GridSpec g = grid;
  for (int r = 0; r < a.refine; ++r) {
    g = g.refined();
    SampledFunction fr = sample(e, g, a.K);
    refinements.push_back(json{{"grid", g.to_string()}, {"seminorm", to_json(seminorm(fr, spec, idx))}});
  }
  o.results["refinements"] = std::move(refinements);
  if (a.type_radius) {
    WeightSequence M = a.cls.M.empty() ? WeightSequence::constant_one() : WeightSequence::parse(a.cls.M);
    o.results["type_radius"] = to_json(type_radius(f, M, a.K));
  }
  return o;
}

// ---------------------------------------------------------------- explaw

Outcome explaw_check(const ExplawCheckArgs& a) {
  require(a.expr, "expr");
  require(a.grid, "grid");
  Split s = parse_split(a.split);
  ClassSpec spec = make_class_spec(a.cls);
  Expr e = Expr::parse(a.expr, s.outer + s.inner);
  SampledFunction f = sample(e, GridSpec::parse(a.grid), a.K);
  double r1 = a.rho1.value_or(a.cls.rho), r2 = a.rho2.value_or(a.cls.rho);
  ExplawReport rep = explaw_compare(f, s, spec, r1, r2, a.K);

  Outcome o;
  o.results["expr"] = e.to_string();
  o.results["grid"] = f.grid().to_string();
  o.results["class"] = class_json(a.cls, spec);
  o.results["report"] = to_json(rep);
  if (!rep.direction1_ok) o.failures.push_back("direction 1 (mixed <= joint) failed");
  if (!rep.direction2_ok) o.failures.push_back("direction 2 (joint <= mixed) failed");
  return o;
}

Outcome explaw_counterexample(const CounterexampleArgs& a) {
  CounterexampleRun run = counterexample_run(WeightSequence::parse(a.M), WeightSequence::parse(a.L), a.N, a.sigma,
                                             a.K_search);
  Outcome o;
  o.results["N"] = a.N;
  o.results["K_search"] = a.K_search;
  o.results["run"] = to_json(run);
  if (!run.chain_ok) o.failures.push_back("lower-bound chain failed");
  if (!run.strictly_increasing_from_2) o.failures.push_back("lower bounds not strictly increasing from n = 2");
  return o;
}

Outcome explaw_kit(const KitArgs& a) {
  KitSweep s = kit_random_sweep(parse_kit_case(a.kase), a.trials, a.seed);
  Outcome o;
  o.results["seed"] = a.seed;
  o.results["sweep"] = to_json(s);
  if (s.failures > 0) o.failures.push_back(std::to_string(s.failures) + " " + a.kase + " trials failed");
  return o;
}

// ---------------------------------------------------------------- diff

Outcome diff_compose(const DiffComposeArgs& a) {
  require(a.map, "map");
  require(a.map2, "map2");
  require(a.grid, "grid");
  GridSpec grid = GridSpec::parse(a.grid);
  DiffMap F = parse_diffmap(a.map, a.n, grid, a.tag_order);
  DiffMap G = parse_diffmap(a.map2, a.n, grid, a.tag_order);
  DiffMap H = compose_diff(F, G);

  Outcome o;
  o.results["F"] = diffmap_json(F);
  o.results["G"] = diffmap_json(G);
  o.results["H"] = diffmap_json(H);
  if (a.M.empty()) return o;

  require(a.f_grid, "f-grid");
  GridSpec fgrid = GridSpec::parse(a.f_grid);
  for (std::size_t i = 0; i < grid.node_count(); ++i) {
    auto y = G.apply(grid.coordinates(i));
    for (int d = 0; d < a.n; ++d)
      if (y[d] < fgrid.axis(d).lo || y[d] > fgrid.axis(d).hi)
        throw QuadratureBoxTooSmall("f grid does not contain G(x) at node " + std::to_string(i));
  }
  WeightSequence M = WeightSequence::parse(a.M);
  Expr Gexpr = identity_plus(G.f);
  std::vector<Expr> comps;
  for (int d = 0; d < a.n; ++d) comps.push_back(Gexpr.component(d));
  SampledFunction fs = sample(F.f, fgrid, a.K);
  SampledFunction gs = sample(Gexpr, grid, a.K);
  SampledFunction hs = sample(substitute(F.f, comps), grid, a.K);
  BoundCertificate cf = certificate_estimate(fs, M, 1, a.K);
  BoundCertificate cg = certificate_estimate(gs, M, 1, a.K);
  ComposeMode mode;
  if (a.mode == "roumieu") {
    mode = ComposeMode::roumieu;
  } else if (a.mode == "beurling") {
    mode = ComposeMode::beurling;
  } else {
    throw UsageError("--mode must be beurling or roumieu");
  }
  ComposedCertificate cc = propagate_compose(cf, cg, mode, a.rho_target, {&fs, &gs, &hs});
  o.results["propagation"] = to_json(cc);
  o.results["propagation"]["mode"] = a.mode;
  if (cc.majorizes && !*cc.majorizes) o.failures.push_back("propagated bound does not majorize the composite");
  return o;
}

Outcome diff_invert(const DiffInvertArgs& a) {
  require(a.map, "map");
  require(a.grid, "grid");
  GridSpec grid = GridSpec::parse(a.grid);
  DiffMap F = parse_diffmap(a.map, a.n, grid);
  InverseResult r = invert_diff(F, {a.tol, 200, a.order});

  Outcome o;
  o.results["F"] = diffmap_json(F);
  o.results["tol"] = a.tol;
  o.results["max_residual"] = r.max_residual;
  o.results["max_roundtrip_error"] = r.max_roundtrip_error;
  o.results["max_det_identity_error"] = r.max_det_identity_error;
  int newton = static_cast<int>(std::count(r.newton_used.begin(), r.newton_used.end(), true));
  o.results["newton_nodes"] = newton;
  if (r.max_residual > a.tol) o.failures.push_back("residual above tolerance");
  if (r.max_det_identity_error > 1e-9) o.failures.push_back("det dG * det dF(G) differs from 1");
  if (r.max_roundtrip_error > 1e-9) o.failures.push_back("jet round trip G o F = Id failed");
  if (a.decay_radius) {
    double d = decay_outside(r, grid, *a.decay_radius);
    o.results["decay"] = json{{"radius", *a.decay_radius}, {"max_abs_g", d}, {"tol", a.decay_tol}};
    if (d > a.decay_tol) o.failures.push_back("g does not decay below the tolerance");
  }
  if (!a.M.empty()) {
    WeightSequence M = WeightSequence::parse(a.M);
    BoundCertificate cert = certificate_estimate(sample(F.f, grid, a.cert_K), M, 1, a.cert_K);
    json table;
    table["f_certificate"] = to_json(cert);
    table["delta"] = F.inf_det_estimate;
    try {
      InverseBoundTable t = propagate_inverse(cert, F.inf_det_estimate, a.n, std::min(a.cert_K, a.order));
      double ratio = inverse_table_ratio(t, M, r.G_jets);
      table["table"] = to_json(t);
      table["measured_ratio"] = ratio;
      table["majorizes"] = ratio <= 1 + 1e-9;
      if (ratio > 1 + 1e-9) o.failures.push_back("inverse bound table does not majorize the jets");
    } catch (const ContractionFailure& e) {
      table["contraction_failure"] = json{{"order", e.order()}, {"factor", e.factor()}};
    }
    o.results["inverse_bounds"] = std::move(table);
  }
  if (a.include_nodes) {
    json nodes = json::array();
    for (std::size_t i = 0; i < r.g.size(); ++i)
      nodes.push_back(json{{"x", grid.coordinates(i)},
                           {"g", r.g[i]},
                           {"residual", r.residual[i]},
                           {"iterations", r.iterations[i]},
                           {"newton", static_cast<bool>(r.newton_used[i])},
                           {"jet", jet_json(r.G_jets[i])}});
    o.results["nodes"] = std::move(nodes);
  }
  return o;
}

Outcome diff_lemma(const DiffLemmaArgs& a) {
  if (a.dims.empty()) throw UsageError("--dims must list at least one dimension");
  std::mt19937_64 rng(a.seed);
  std::uniform_real_distribution<double> u(-a.entry_bound, a.entry_bound);
  int violations = 0, redraws = 0;
  double worst = 0;
  std::optional<int> first;
  for (int t = 0; t < a.trials; ++t) {
    int n = a.dims[static_cast<std::size_t>(t) % a.dims.size()];
    Matrix<double> A;
    for (;;) {
      A.assign(n, std::vector<double>(n));
      for (auto& row : A)
        for (auto& v : row) v = u(rng);
      if (std::abs(determinant(A)) >= a.min_det) break;
      ++redraws;
    }
    MatrixInverseBound b = matrix_inverse_bound(A);
    worst = std::max(worst, b.lhs / b.rhs);
    if (!b.holds) {
      ++violations;
      if (!first) first = t;
    }
  }
  Outcome o;
  o.results["trials"] = a.trials;
  o.results["dims"] = a.dims;
  o.results["seed"] = a.seed;
  o.results["redraws"] = redraws;
  o.results["violations"] = violations;
  o.results["first_violation"] = optional_json(first);
  o.results["worst_ratio"] = worst;
  if (violations > 0) o.failures.push_back(std::to_string(violations) + " matrices violate the inverse bound");
  return o;
}

// ---------------------------------------------------------------- jet

Outcome jet_invert(const JetInvertArgs& a) {
  require(a.map, "map");
  bool had_id = false;
  Expr f = Expr::parse(strip_id(a.map, had_id), a.n);
  Expr F = had_id ? identity_plus(f) : f;
  std::vector<Rational> point(a.n, Rational(0));
  if (!a.at.empty()) {
    auto parts = split(a.at, ',');
    if (static_cast<int>(parts.size()) != a.n) throw UsageError("--at needs " + std::to_string(a.n) + " coordinates");
    for (int i = 0; i < a.n; ++i) point[i] = parse_rational(parts[i]);
  }
  ScalarMode mode;
  if (a.mode == "exact") {
    mode = ScalarMode::rational;
  } else if (a.mode == "float") {
    mode = ScalarMode::floating;
  } else {
    throw UsageError("--mode must be exact or float");
  }
  EvaluatedJet ev = evaluate(F, point, a.K, mode);

  Outcome o;
  o.results["map"] = F.to_string();
  o.results["K"] = a.K;
  o.results["degraded"] = ev.degraded;
  if (ev.degraded) o.results["warning"] = ev.warning;
  if (ev.exact()) {
    const auto& Fj = std::get<Jet<Rational>>(ev.jet);
    Jet<Rational> G = invert(Fj);
    bool exact_identity = (compose(G, Fj) - Jet<Rational>::identity(point, a.K)).is_zero();
    o.results["exact"] = true;
    o.results["base_point"] = json::array();
    for (const auto& v : G.base_point()) o.results["base_point"].push_back(rational_json(v));
    o.results["inverse"] = jet_json(G);
    o.results["roundtrip_exact"] = exact_identity;
    if (!exact_identity) o.failures.push_back("G o F differs from the identity jet");
  } else {
    Jet<double> Fj = ev.as_float();
    Jet<double> G = invert(Fj);
    Jet<double> diff = compose(G, Fj) - Jet<double>::identity(Fj.base_point(), a.K);
    double err = 0;
    for (int c = 0; c < diff.m(); ++c)
      for (std::size_t p = 0; p < diff.size(); ++p) err = std::max(err, std::abs(diff.at(c, p)));
    o.results["exact"] = false;
    o.results["base_point"] = G.base_point();
    o.results["inverse"] = jet_json(G);
    o.results["roundtrip_error"] = err;
    if (err > 1e-12) o.failures.push_back("G o F differs from the identity jet");
  }
  return o;
}

Outcome jet_fdb_check(const JetFdbArgs& a) {
  if (a.K < 1 || a.K > 12) throw UsageError("--K must lie in [1, 12]");
  std::mt19937_64 rng(a.seed);
  std::uniform_int_distribution<int> num(-9, 9), den(1, 6);
  auto rnd = [&] {
    int p = num(rng);
    return Rational(p, den(rng));
  };
  int mismatches = 0, comparisons = 0;
  for (int t = 0; t < a.trials; ++t) {
    int K = 1 + t % a.K;
    std::vector<Rational> gc(K + 1), fc(K + 1);
    for (auto& v : gc) v = rnd();
    for (auto& v : fc) v = rnd();
    Jet<Rational> g = univariate(gc[0], gc);
    Jet<Rational> f = univariate(gc[0], fc);
    Jet<Rational> h = compose(f, g);
    std::vector<Rational> fd(K + 1), gd(K + 1);
    for (int j = 0; j <= K; ++j) {
      fd[j] = f.derivative(0, MultiIndex{j});
      gd[j] = g.derivative(0, MultiIndex{j});
    }
    for (int k = 1; k <= K; ++k) {
      ++comparisons;
      if (fdb_partition_sum(fd, gd, k) != h.at(0, k)) ++mismatches;
    }
  }
  Outcome o;
  o.results["trials"] = a.trials;
  o.results["K"] = a.K;
  o.results["seed"] = a.seed;
  o.results["comparisons"] = comparisons;
  o.results["mismatches"] = mismatches;
  if (mismatches > 0) o.failures.push_back("compose disagrees with the partition sum");
  return o;
}

// ---------------------------------------------------------------- fourier

Outcome fourier_check(const FourierArgs& a) {
  require(a.expr, "expr");
  require(a.grid, "grid");
  require(a.xi, "xi");
  Expr e = Expr::parse(a.expr, a.n);
  GridSpec grid = GridSpec::parse(a.grid), xi = GridSpec::parse(a.xi);
  SampledFunction f = sample(e, grid, 0);
  std::optional<Expr> expect;
  if (!a.expect.empty()) expect = Expr::parse(a.expect, a.n);

  std::vector<std::pair<double, double>> values;
  Outcome o;
  o.results["expr"] = e.to_string();
  o.results["grid"] = grid.to_string();
  o.results["xi"] = xi.to_string();
  if (a.n == 1) {
    SampledFunction F = fourier_1d(f, xi);
    for (std::size_t i = 0; i < xi.node_count(); ++i) values.emplace_back(F.jet(i).at(0, 0), F.jet(i).at(1, 0));
  } else if (a.n == 2) {
    FactorizationReport rep = factorization_check(f, xi);
    values = rep.iterated;
    o.results["factorization_discrepancy"] = rep.max_discrepancy;
    if (rep.max_discrepancy > a.factorization_tol) o.failures.push_back("iterated and joint transforms differ");
  } else {
    throw UsageError("fourier check supports n = 1 or n = 2");
  }

  double im_max = 0;
  for (const auto& v : values) im_max = std::max(im_max, std::abs(v.second));
  o.results["max_abs_imag"] = im_max;
  // node i and node P-1-i are mirror images when every axis is symmetric about 0
  bool symmetric = true;
  for (const auto& ax : xi.axes()) symmetric = symmetric && ax.lo == -ax.hi;
  if (symmetric) {
    double even = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
      const auto& v = values[i];
      const auto& w = values[values.size() - 1 - i];
      even = std::max({even, std::abs(v.first - w.first), std::abs(v.second - w.second)});
    }
    o.results["even_residual"] = even;
    o.results["symmetry_residual"] = std::max(im_max, even);
    if (a.even_real && std::max(im_max, even) > a.symmetry_tol)
      o.failures.push_back("transform of an even real function is not even and real");
  } else if (a.even_real) {
    throw UsageError("--even-real needs a xi grid symmetric about 0");
  }

  if (expect) {
    double err = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
      auto ev = evaluate_value(*expect, xi.coordinates(i));
      double re = ev.at(0), im = ev.size() > 1 ? ev[1] : 0.0;
      err = std::max(err, std::hypot(values[i].first - re, values[i].second - im));
    }
    o.results["expect"] = expect->to_string();
    o.results["max_error"] = err;
    if (err > a.tol) o.failures.push_back("transform differs from the expected closed form");
  }
  json table = json::array();
  for (std::size_t i = 0; i < values.size(); ++i)
    table.push_back(json{{"xi", xi.coordinates(i)}, {"re", values[i].first}, {"im", values[i].second}});
  o.results["transform"] = std::move(table);
  return o;
}

}  // namespace ultrajet::cli
