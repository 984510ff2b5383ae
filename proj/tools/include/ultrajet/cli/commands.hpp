#ifndef ULTRAJET_CLI_COMMANDS_HPP
#define ULTRAJET_CLI_COMMANDS_HPP

#include "ultrajet/cli/report.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ultrajet::cli {

/// Results payload plus the assertions that failed (non-empty means exit 2).
struct Outcome {
  json results = json::object();
  std::vector<std::string> failures;
};

struct WsAnalyzeArgs {
  std::string seq;
  int K = 30;
};
Outcome ws_analyze(const WsAnalyzeArgs& a);

struct ClassArgs {
  std::string family = "b";
  std::string type = "beurling";
  std::string M;
  std::string L;
  double rho = 1;
  std::optional<double> p;
};
ClassSpec make_class_spec(const ClassArgs& c);

struct FnNormArgs {
  std::string expr;
  int n = 1;
  std::string grid;
  int K = 2;
  ClassArgs cls;
  /// "k,l;k,l" style list of indices; empty selects all.
  std::string indices;
  /// Number of successive grid refinements to report as well.
  int refine = 0;
  /// Report the type radius against cls.M (or constant_one).
  bool type_radius = false;
};
Outcome fn_norm(const FnNormArgs& a);

struct ExplawCheckArgs {
  std::string expr;
  std::string grid;
  std::string split = "1:1";
  ClassArgs cls;
  std::optional<double> rho1, rho2;
  int K = 8;
};
Outcome explaw_check(const ExplawCheckArgs& a);

struct CounterexampleArgs {
  std::string M = "qsquare:2";
  std::string L = "one";
  int N = 5;
  std::vector<double> sigma{1, 2, 4, 8};
  int K_search = 40;
};
Outcome explaw_counterexample(const CounterexampleArgs& a);

struct KitArgs {
  std::string kase = "eq_n";
  int trials = 1000;
  std::uint64_t seed = 1;
};
Outcome explaw_kit(const KitArgs& a);

struct DiffComposeArgs {
  std::string map;   // F
  std::string map2;  // G
  int n = 1;
  std::string grid;
  int tag_order = 2;
  /// Weight sequence for the certificate propagation; empty skips it.
  std::string M;
  int K = 8;
  /// Grid carrying the certificate of f; must contain G(grid).
  std::string f_grid;
  std::string mode = "roumieu";
  double rho_target = 1;
};
Outcome diff_compose(const DiffComposeArgs& a);

struct DiffInvertArgs {
  std::string map;
  int n = 1;
  std::string grid;
  double tol = 1e-12;
  int order = 4;
  std::optional<double> decay_radius;
  double decay_tol = 1e-8;
  /// Weight sequence for the inverse bound table; empty skips it.
  std::string M;
  int cert_K = 8;
  bool include_nodes = true;
};
Outcome diff_invert(const DiffInvertArgs& a);

struct DiffLemmaArgs {
  int trials = 10000;
  std::vector<int> dims{2, 3, 4};
  double entry_bound = 2;
  double min_det = 1e-3;
  std::uint64_t seed = 1;
};
Outcome diff_lemma(const DiffLemmaArgs& a);

struct JetInvertArgs {
  std::string map;
  int n = 1;
  std::string at;
  int K = 6;
  std::string mode = "exact";
};
Outcome jet_invert(const JetInvertArgs& a);

struct JetFdbArgs {
  int trials = 200;
  int K = 8;
  std::uint64_t seed = 1;
};
Outcome jet_fdb_check(const JetFdbArgs& a);

struct FourierArgs {
  std::string expr;
  int n = 1;
  std::string grid;
  std::string xi;
  /// Closed form of the transform in xi (variables x1..xn); empty skips the comparison.
  std::string expect;
  double tol = 1e-6;
  bool even_real = false;
  double symmetry_tol = 1e-10;
  double factorization_tol = 1e-8;
};
Outcome fourier_check(const FourierArgs& a);

}  // namespace ultrajet::cli

#endif
