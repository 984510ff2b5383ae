#ifndef ULTRAJET_WEIGHTSEQ_HPP
#define ULTRAJET_WEIGHTSEQ_HPP

#include "ultrajet/rational.hpp"

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ultrajet {

enum class SequenceKind { gevrey, qsquare, constant_one, table };

/// A positive sequence M_0 = 1, M_1 >= 1, M_2, ... Values are produced lazily and
/// cached. Kinds with rational values (integer Gevrey exponent, the constant
/// sequence, tables) are compared exactly; the others in the log domain.
class WeightSequence {
 public:
  static WeightSequence gevrey(double s);
  static WeightSequence qsquare(double q);
  static WeightSequence constant_one();
  /// Entries beyond the table repeat the last value.
  static WeightSequence table(std::vector<Rational> values);
  /// "gevrey:<s>", "qsquare:<q>", "one", "table:<v0>,<v1>,..."
  static WeightSequence parse(std::string_view text);

  SequenceKind kind() const;
  double parameter() const;
  bool exact() const;
  std::string to_string() const;

  /// Exact M_k; only valid when exact().
  const Rational& exact_value(int k) const;
  double log_value(int k) const;
  double value(int k) const;
  /// log(k! M_k)
  double log_factorial_weight(int k) const;

 private:
  struct State;
  explicit WeightSequence(std::shared_ptr<State> s);
  std::shared_ptr<State> state_;
};

enum class Property { log_convex, weakly_log_convex, derivation_closed, moderate_growth };

std::string to_string(Property p);
Property parse_property(std::string_view text);

struct Witness {
  int j = 0;
  int k = 0;
};

/// Outcome of checking one structural property up to a finite horizon. For the
/// pairwise properties the witness is the first violating index pair. For the
/// supremum properties (derivation-closed, moderate growth) the witness is the
/// index pair where the running supremum is attained when the property fails.
struct PropertyVerdict {
  Property property{};
  int horizon = 0;
  bool holds_up_to_K = false;
  std::optional<Witness> witness;
  std::optional<double> constant_estimate;
  /// Running supremum indexed by horizon, for the supremum properties.
  std::vector<double> running_estimates;
  bool stabilized = true;
};

struct SupremumOptions {
  /// Mean per-order relative growth of the running supremum over the last quarter
  /// of the horizon must stay below this for the supremum to count as stable.
  double stabilization_tolerance = 0.01;
  /// Estimates above this are reported as diverging regardless of stabilization.
  double divergence_threshold = 1e6;
};

PropertyVerdict check_property(const WeightSequence& m, Property p, int K, const SupremumOptions& opts = {});

enum class Trend { diverging, converging, undecided };
std::string to_string(Trend t);

struct PartialSumsReport {
  /// S_K' for K' = 1..K of sum_k (k! M_k)^(-1/k).
  std::vector<double> partial_sums;
  Trend trend = Trend::undecided;
  /// Slope of log a_k against log k over the upper half of the range.
  double tail_slope = 0;
};

struct TrendOptions {
  double diverging_slope = -1.2;
  double converging_slope = -1.5;
};

PartialSumsReport quasianalytic_partial_sums(const WeightSequence& m, int K, const TrendOptions& opts = {});

struct DerivedInequalities {
  int horizon = 0;
  /// M_j M_k <= M_{j+k}.
  bool algebra_ok = true;
  std::optional<Witness> algebra_witness;
  /// M_1^j M_k >= M_j M_{a_1} ... M_{a_j} over all compositions of k with j parts.
  bool composition_ok = true;
  int composition_horizon = 0;
  std::optional<std::vector<int>> composition_witness;
  /// Smallest C with ((j+k)! M_{j+k} / (k! M_k))^(1/(j(j+k))) <= C over the horizon.
  double derivation_constant = 1;
};

/// Requires log-convexity and derivation-closedness up to K.
DerivedInequalities verify_derived_inequalities(const WeightSequence& m, int K);

enum class RateKind { factorial_decay, superexp, geometric, table };

/// Decreasing sequences r_k used to describe projective weight systems.
class RateSequence {
 public:
  static RateSequence factorial_decay(double rho);
  static RateSequence superexp(double c);
  static RateSequence geometric(double sigma);
  static RateSequence table(std::vector<Rational> values);
  static RateSequence parse(std::string_view text);

  RateKind kind() const;
  double parameter() const;
  std::string to_string() const;
  const Rational& value(int k) const;
  double log_value(int k) const;

 private:
  struct State;
  explicit RateSequence(std::shared_ptr<State> s);
  std::shared_ptr<State> state_;
};

struct RateVerdict {
  int horizon = 0;
  /// r_k sigma^k decreasing over the tail, for every sigma tested.
  bool in_R = true;
  std::optional<double> failing_sigma;
  std::optional<int> failing_index;
  /// r_{k+l} <= r_k r_l for k+l <= K.
  bool submultiplicative = true;
  std::optional<Witness> submultiplicative_witness;
  bool in_R_prime = true;
};

RateVerdict rate_membership(const RateSequence& r, int K, const std::vector<double>& sigma_set);

struct ProjectiveProbe {
  int horizon = 0;
  double sigma_star = 0;
  double bound_by_sigma = 0;
  double bound_by_rate = 0;
  double delta_star = 1;
  double bound_with_delta = 0;
  bool implications_ok = false;
};

/// `table` holds |d^alpha f(x0)| bounded over alpha of each order: entries (order, value).
ProjectiveProbe projective_probe(const std::vector<std::pair<int, double>>& table, const RateSequence& r);

}  // namespace ultrajet

#endif
