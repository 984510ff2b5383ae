#ifndef ULTRAJET_EXPLAW_HPP
#define ULTRAJET_EXPLAW_HPP

#include "ultrajet/classnorms.hpp"
#include "ultrajet/rational.hpp"
#include "ultrajet/weightseq.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ultrajet {

struct Split {
  int outer = 0;  // l
  int inner = 0;  // m
};

/// f^v: for each outer node x and each outer multi-index a (graded-lex position in
/// MonomialBasis(l, K)), the function y -> c_{(a, .)}(x, y) sampled on the inner grid
/// as a jet of order K - |a|. Coefficients are copied, never recomputed.
struct CurriedFamily {
  GridSpec outer_grid;
  GridSpec inner_grid;
  Split split;
  int order = 0;
  int target_dim = 0;
  /// slices[outer node][outer index position]
  std::vector<std::vector<SampledFunction>> slices;

  /// Outer multi-indices in position order.
  std::vector<MultiIndex> outer_indices() const;
};

CurriedFamily curry(const SampledFunction& f, Split split);
SampledFunction uncurry(const CurriedFamily& g);

struct ExplawReport {
  Family family = Family::B;
  Split split;
  int K = 0;
  double rho1 = 0, rho2 = 0;
  /// Joint radius min(rho1, rho2) / (2 tau) for direction 1 (weighted families).
  std::optional<double> rho;
  /// Radius r with direction 2 comparing joint(2r) against mixed(r, r).
  std::optional<double> rho_direction2;
  std::optional<double> tau_used;
  /// Weighted families: sup of the mixed terms at (rho1, rho2) and of the joint terms at rho.
  std::optional<double> mixed_norm;
  std::optional<double> joint_norm;
  bool direction1_ok = true;
  bool direction2_ok = true;
  /// Largest lhs/rhs ratio seen per direction (<= 1 up to rounding slack when ok).
  double direction1_ratio = 0;
  double direction2_ratio = 0;
  std::optional<std::vector<int>> direction1_witness;
  std::optional<std::vector<int>> direction2_witness;
  std::size_t comparisons = 0;
  /// Sobolev families: max |iterated - joint| over p-th powers, relative to max(1, joint).
  std::optional<double> fubini_discrepancy;
  /// D and DM: joint support box equals outer box times inner box.
  std::optional<bool> support_product_ok;
};

/// Compares the mixed seminorms of f^v with the joint seminorms of f using the
/// constants of the exponential-law proof. Throws PreconditionFailed if M (or L)
/// is not weakly log-convex up to K or its moderate-growth constant has not
/// stabilized.
ExplawReport explaw_compare(const SampledFunction& f, Split split, const ClassSpec& spec, double rho1, double rho2,
                            int K);

/// Horizon used to estimate the moderate-growth constant for a truncation K.
int tau_horizon(int K);

enum class KitCase { eq_n, eq_abelem, eq_wlc, eq_mg, eq_productnorm };
std::string to_string(KitCase c);
KitCase parse_kit_case(std::string_view text);

struct KitReport {
  KitCase kase = KitCase::eq_n;
  bool holds = true;
  Rational lhs, rhs;
  /// rhs - lhs for "lhs <= rhs" cases (eq_n is stated as lhs >= rhs and reports lhs - rhs).
  Rational slack;
  /// False when a weight sequence has no exact values and the comparison ran in logs.
  bool exact = true;
};

/// sum_{k1+k2=k} (1+a1)^k1 (1+a2)^k2 >= 2^-k (2+a1+a2)^k >= 2^-k (1+a1+a2)^k;
/// rhs is the middle term.
KitReport kit_eq_n(const Rational& a1, const Rational& a2, int k);
/// a_{k1,k2} <= b_k <= (k+1) max a for the row a = (a_{0,k}, ..., a_{k,0}).
KitReport kit_eq_abelem(const std::vector<Rational>& row);
/// k1! k2! M_k1 M_k2 <= (k1+k2)! M_{k1+k2}.
KitReport kit_eq_wlc(const WeightSequence& M, int k1, int k2);
/// M_{j+k} <= tau^{j+k} M_j M_k.
KitReport kit_eq_mg(const WeightSequence& M, const Rational& tau, int j, int k);
/// ||.||_1 + ||.||_1 on a product is a norm dominating both factor norms: checks the
/// triangle inequality for x + y and max(||x1||, ||x2||) <= ||(x1, x2)||.
KitReport kit_eq_productnorm(const std::vector<Rational>& x1, const std::vector<Rational>& x2,
                             const std::vector<Rational>& y1, const std::vector<Rational>& y2);

struct KitSweep {
  KitCase kase = KitCase::eq_n;
  int trials = 0;
  int failures = 0;
  /// Trial number of the first failure.
  std::optional<int> first_failure;
  bool all_exact = true;
};

/// Runs a case on seeded random exact inputs: rationals for eq_n, eq_abelem and
/// eq_productnorm; gevrey(s) or random log-convex tables for eq_wlc; gevrey(s)
/// with tau = 2^s for eq_mg.
KitSweep kit_random_sweep(KitCase c, int trials, std::uint64_t seed);

struct CounterexamplePair {
  int n = 0;
  int j = 0;
  int k = 0;
  /// log of (M_{j+k}/(M_j M_k))^{1/(j+k)} and of n^2 n! L_n.
  double log_ratio = 0;
  double log_needed = 0;
};

struct CounterexampleRun {
  WeightSequence M = WeightSequence::constant_one();
  WeightSequence L = WeightSequence::constant_one();
  std::vector<CounterexamplePair> pairs;
  /// log h_k = log(k! M_k) for k up to max(j_n + k_n).
  std::vector<double> log_h;
  std::vector<double> sigma_set;
  /// lower_bounds[n-1][s] = n^{2 k_n} / sigma^{k_n}; log_lower_bounds in logs.
  std::vector<std::vector<double>> lower_bounds;
  std::vector<std::vector<double>> log_lower_bounds;
  /// Logs of the proof's chain at q = k_n: the truncated functional sum over all
  /// found pairs, the single-term bound, and the bound after inserting the pair inequality.
  std::vector<std::vector<double>> log_functional_sum;
  std::vector<std::vector<double>> log_single_term;
  std::vector<std::vector<double>> log_after_pair_bound;
  bool chain_ok = true;
  /// n -> lower_bounds[n][s] is non-decreasing for every sigma over n <= N.
  bool monotone = true;
  /// Strictly increasing from n = 2 onward for every sigma.
  bool strictly_increasing_from_2 = true;
};

/// Searches, for n = 1..N, the pair with j >= n of smallest j + k (then smallest j),
/// j, k <= K_search, satisfying the pair inequality. Throws SearchExhausted.
CounterexampleRun counterexample_run(const WeightSequence& M, const WeightSequence& L, int N,
                                     const std::vector<double>& sigma_set, int K_search);

}  // namespace ultrajet

#endif
