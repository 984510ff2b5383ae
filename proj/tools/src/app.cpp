#include "ultrajet/cli/app.hpp"

#include "ultrajet/cli/commands.hpp"
#include "ultrajet/cli/config.hpp"
#include "ultrajet/errors.hpp"
#include "ultrajet/parallel.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>

namespace ultrajet::cli {

namespace {

struct Leaf {
  CLI::App* app;
  std::string command;
  std::function<Outcome()> action;
};

CLI::Option* optional_double(CLI::App* app, const std::string& name, std::optional<double>& target,
                             const std::string& desc) {
  return app->add_option_function<double>(name, [&target](const double& v) { target = v; }, desc);
}

void add_class_options(CLI::App* s, ClassArgs& c) {
  s->add_option("--class", c.family, "Family: b, s, bm, slm, wp, wmp, d, dm");
  s->add_option("--type", c.type, "beurling or roumieu (weighted families)");
  s->add_option("--M", c.M, "Weight sequence, e.g. gevrey:1");
  s->add_option("--L", c.L, "Second weight sequence (slm)");
  s->add_option("--rho", c.rho, "Radius of the weighted norm");
  optional_double(s, "--p", c.p, "Exponent of the Sobolev families (default 2)");
}

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i];
  return s;
}

json echo_options(const CLI::App* leaf) {
  json echo = json::object();
  for (const CLI::Option* opt : leaf->get_options()) {
    if (opt->get_lnames().empty()) continue;
    const std::string& name = opt->get_lnames()[0];
    if (name == "help") continue;
    if (opt->get_expected_max() == 0) {
      echo[name] = opt->count() > 0;
    } else if (opt->count() > 0) {
      echo[name] = join(opt->results());
    } else {
      echo[name] = opt->get_default_str();
    }
  }
  return echo;
}

std::string annotate(std::string msg, const std::vector<ConfigEntry>& entries) {
  for (const auto& e : entries)
    if (msg.find("--" + e.key) != std::string::npos) msg += " (config line " + std::to_string(e.line) + ")";
  return msg;
}

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Jets, ultradifferentiable seminorms and diffeomorphism groups at desk scale", "ultrajet"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path, out_path;
  unsigned threads = 0;
  bool no_timings = false, compact = false;
  app.add_option("--config", config_path, "Flat key = value file; flags on the command line win");
  app.add_option("--threads", threads, "Worker threads (0 = hardware concurrency)");
  app.add_option("--out", out_path, "Write the report here instead of stdout");
  app.add_flag("--no-timings", no_timings, "Omit wall-clock timings from the report");
  app.add_flag("--compact", compact, "Single-line JSON");

  std::vector<Leaf> leaves;
  auto group = [&](const std::string& name, const std::string& desc) {
    CLI::App* g = app.add_subcommand(name, desc);
    g->require_subcommand(1);
    g->fallthrough();
    return g;
  };
  auto leaf = [&](CLI::App* g, const std::string& name, const std::string& desc, std::function<Outcome()> action) {
    CLI::App* s = g->add_subcommand(name, desc);
    s->fallthrough();
    s->option_defaults()->always_capture_default();
    leaves.push_back({s, g->get_name() + " " + name, std::move(action)});
    return s;
  };

  WsAnalyzeArgs ws;
  {
    CLI::App* g = group("ws", "Weight sequences");
    CLI::App* s = leaf(g, "analyze", "Structural properties and quasianalyticity", [&] { return ws_analyze(ws); });
    s->add_option("--seq", ws.seq, "gevrey:s | qsquare:q | one | table:m0,m1,...")->required();
    s->add_option("--K", ws.K, "Horizon");
  }

  FnNormArgs fn;
  {
    CLI::App* g = group("fn", "Sampled functions");
    CLI::App* s = leaf(g, "norm", "Seminorm report on a grid", [&] { return fn_norm(fn); });
    s->add_option("--expr", fn.expr, "Expression in x1..xn")->required();
    s->add_option("--n", fn.n, "Number of variables");
    s->add_option("--grid", fn.grid, "lo:hi:points per axis, comma separated")->required();
    s->add_option("--K", fn.K, "Truncation order");
    add_class_options(s, fn.cls);
    s->add_option("--indices", fn.indices, "Index list k,l;k,l (default: all)");
    s->add_option("--refine", fn.refine, "Also report this many halved-step grids");
    s->add_flag("--type-radius", fn.type_radius, "Report the type radius against --M");
  }

  ExplawCheckArgs ec;
  CounterexampleArgs cx;
  KitArgs kit;
  {
    CLI::App* g = group("explaw", "Exponential law");
    CLI::App* s = leaf(g, "check", "Mixed versus joint seminorms of a curried function", [&] { return explaw_check(ec); });
    s->add_option("--expr", ec.expr, "Expression in x1..x(l+m)")->required();
    s->add_option("--grid", ec.grid, "Joint grid")->required();
    s->add_option("--split", ec.split, "l:m");
    add_class_options(s, ec.cls);
    optional_double(s, "--rho1", ec.rho1, "Outer radius (default --rho)");
    optional_double(s, "--rho2", ec.rho2, "Inner radius (default --rho)");
    s->add_option("--K", ec.K, "Truncation order");

    CLI::App* c = leaf(g, "counterexample", "Divergence construction for non-moderate sequences",
                       [&] { return explaw_counterexample(cx); });
    c->add_option("--M", cx.M, "Weight sequence");
    c->add_option("--L", cx.L, "Second weight sequence");
    c->add_option("--N", cx.N, "Number of pairs");
    c->add_option("--sigma", cx.sigma, "Comma separated sigma values")->delimiter(',');
    c->add_option("--K-search", cx.K_search, "Search horizon for j and k");

    CLI::App* k = leaf(g, "kit", "Random exact checks of one inequality", [&] { return explaw_kit(kit); });
    k->add_option("--case", kit.kase, "eq_n | eq_abelem | eq_wlc | eq_mg | eq_productnorm");
    k->add_option("--trials", kit.trials, "Number of random inputs");
    k->add_option("--seed", kit.seed, "Generator seed");
  }

  DiffComposeArgs dc;
  DiffInvertArgs di;
  DiffLemmaArgs dl;
  {
    CLI::App* g = group("diff", "Maps Id + f");
    CLI::App* c = leaf(g, "compose", "F o G with class tags and bound propagation", [&] { return diff_compose(dc); });
    c->add_option("--map", dc.map, "F as id+<expr-vector>")->required();
    c->add_option("--map2", dc.map2, "G as id+<expr-vector>")->required();
    c->add_option("--n", dc.n, "Dimension");
    c->add_option("--grid", dc.grid, "Report grid")->required();
    c->add_option("--tag-order", dc.tag_order, "Order of the class tags (-1 skips them)");
    c->add_option("--M", dc.M, "Weight sequence for certificate propagation");
    c->add_option("--K", dc.K, "Certificate horizon (>= 6)");
    c->add_option("--f-grid", dc.f_grid, "Grid for the certificate of f; must contain G(grid)");
    c->add_option("--mode", dc.mode, "roumieu or beurling");
    c->add_option("--rho-target", dc.rho_target, "Beurling target radius");

    CLI::App* i = leaf(g, "invert", "Nodewise inverse with jets", [&] { return diff_invert(di); });
    i->add_option("--map", di.map, "F as id+<expr-vector>")->required();
    i->add_option("--n", di.n, "Dimension");
    i->add_option("--grid", di.grid, "Report grid")->required();
    i->add_option("--tol", di.tol, "Residual tolerance");
    i->add_option("--order", di.order, "Order of the inverse jets");
    optional_double(i, "--decay-radius", di.decay_radius, "Check max |g| for min |x_i| >= radius");
    i->add_option("--decay-tol", di.decay_tol, "Bound for the decay check");
    i->add_option("--M", di.M, "Weight sequence for the inverse bound table");
    i->add_option("--cert-K", di.cert_K, "Certificate horizon (>= 6)");
    i->add_flag("!--no-nodes", di.include_nodes, "Omit the per-node table");

    CLI::App* l = leaf(g, "lemma", "Inverse-norm bound on random matrices", [&] { return diff_lemma(dl); });
    l->add_option("--trials", dl.trials, "Number of matrices");
    l->add_option("--dims", dl.dims, "Comma separated dimensions, cycled")->delimiter(',');
    l->add_option("--entry-bound", dl.entry_bound, "Entries uniform in [-b, b]");
    l->add_option("--min-det", dl.min_det, "Redraw matrices with |det| below this");
    l->add_option("--seed", dl.seed, "Generator seed");
  }

  JetInvertArgs ji;
  JetFdbArgs jf;
  {
    CLI::App* g = group("jet", "Truncated Taylor expansions");
    CLI::App* i = leaf(g, "invert", "Local inverse of a map R^n -> R^n", [&] { return jet_invert(ji); });
    i->add_option("--map", ji.map, "F, or id+<expr-vector>")->required();
    i->add_option("--n", ji.n, "Dimension");
    i->add_option("--at", ji.at, "Base point, comma separated rationals (default 0)");
    i->add_option("--K", ji.K, "Order");
    i->add_option("--mode", ji.mode, "exact or float");

    CLI::App* f = leaf(g, "fdb-check", "compose against the partition sum on random exact jets",
                       [&] { return jet_fdb_check(jf); });
    f->add_option("--trials", jf.trials, "Number of random jet pairs");
    f->add_option("--K", jf.K, "Largest order (orders cycle 1..K)");
    f->add_option("--seed", jf.seed, "Generator seed");
  }

  FourierArgs fa;
  {
    CLI::App* g = group("fourier", "Quadrature Fourier transform");
    CLI::App* c = leaf(g, "check", "Transform on a xi grid with optional closed form", [&] { return fourier_check(fa); });
    c->add_option("--expr", fa.expr, "Expression in x1..xn")->required();
    c->add_option("--n", fa.n, "1 or 2");
    c->add_option("--grid", fa.grid, "Quadrature grid")->required();
    c->add_option("--xi", fa.xi, "Frequency grid")->required();
    c->add_option("--expect", fa.expect, "Closed form in the frequency variables; [re, im] or re");
    c->add_option("--tol", fa.tol, "Tolerance for --expect");
    c->add_flag("--even-real", fa.even_real, "Assert the transform is even and real");
    c->add_option("--symmetry-tol", fa.symmetry_tol, "Tolerance for --even-real");
    c->add_option("--factorization-tol", fa.factorization_tol, "Tolerance for the 2-D iterated transform");
  }

  std::vector<ConfigEntry> entries;
  std::vector<std::string> args = raw_args;
  try {
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (args[i] == "--config" && i + 1 < args.size()) config_path = args[i + 1];
      if (args[i].rfind("--config=", 0) == 0) config_path = args[i].substr(9);
    }
    if (!config_path.empty()) {
      entries = read_config(config_path);
      args = merge_config(args, entries);
    }
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    const CLI::App* target = &app;
    for (const auto& l : leaves)
      if (l.app->parsed()) target = l.app;
    out << target->help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << annotate(e.what(), entries) << "\n";
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  const Leaf* chosen = nullptr;
  for (const auto& l : leaves)
    if (l.app->parsed()) chosen = &l;
  if (!chosen) {
    err << "usage error: no command given\n";
    return kExitUsage;
  }
  set_thread_count(threads);

  json env;
  env["schema"] = kSchema;
  env["tool_version"] = kToolVersion;
  env["command"] = chosen->command;
  env["config_echo"] = echo_options(chosen->app);
  int code = kExitOk;
  auto start = std::chrono::steady_clock::now();
  try {
    Outcome o = chosen->action();
    code = o.failures.empty() ? kExitOk : kExitAssertion;
    env["status"] = o.failures.empty() ? "ok" : "assertion_failed";
    env["failures"] = o.failures;
    env["results"] = std::move(o.results);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    env["status"] = "error";
    env["error"] = e.what();
    code = kExitUsage;
    err << "error: " << e.what() << "\n";
  }
  double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!no_timings) env["timings"] = json{{"wall_seconds", elapsed}};

  std::string text = dump(env, compact ? -1 : 2) + "\n";
  if (out_path.empty()) {
    out << text;
  } else {
    std::ofstream f(out_path);
    if (!f) {
      err << "usage error: cannot write " << out_path << "\n";
      return kExitUsage;
    }
    f << text;
  }
  return code;
}

}  // namespace ultrajet::cli
