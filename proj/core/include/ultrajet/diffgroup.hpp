#ifndef ULTRAJET_DIFFGROUP_HPP
#define ULTRAJET_DIFFGROUP_HPP

#include "ultrajet/classnorms.hpp"
#include "ultrajet/funcdsl.hpp"
#include "ultrajet/grid.hpp"
#include "ultrajet/jet.hpp"
#include "ultrajet/linalg.hpp"
#include "ultrajet/weightseq.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace ultrajet {

/// Class membership of f read off its sampled seminorms.
struct ClassTag {
  int order = 0;
  bool bounded = false;
  /// (1+|x|)^k |f^(l)| on the outer ring of the grid is below 1e-6 of its interior sup, k, l <= order.
  bool schwartz = false;
  bool compact = false;
  double decay_ratio = 0;
};

ClassTag tag_class(const Expr& f, const GridSpec& grid, int order);

/// F = Id + f with inf det(I + df) > 0 on the report grid.
struct DiffMap {
  Expr f;
  GridSpec report_grid;
  double inf_det_estimate = 1;
  std::size_t inf_det_node = 0;
  std::optional<ClassTag> class_tag;

  int n() const { return f.arity(); }
  /// F(x) = x + f(x).
  std::vector<double> apply(const std::vector<double>& x) const;
};

/// tag_order < 0 skips the class tag.
DiffMap make_diffmap(const Expr& f, const GridSpec& grid, int tag_order = -1);

/// Accepts "id+<expr>" or a bare expression for f.
DiffMap parse_diffmap(std::string_view text, int n, const GridSpec& grid, int tag_order = -1);

/// F o G = Id + h with h(x) = g(x) + f(x + g(x)), on G's report grid.
DiffMap compose_diff(const DiffMap& F, const DiffMap& G);

struct InverseOptions {
  double tol = 1e-12;
  int max_iterations = 200;
  /// Order of the jets of G returned at each node.
  int order = 4;
};

struct InverseResult {
  /// Per node x: g(x) with x + g(x) = F^{-1}(x).
  std::vector<std::vector<double>> g;
  /// |F(x + g(x)) - x| per node.
  std::vector<double> residual;
  std::vector<int> iterations;
  std::vector<bool> newton_used;
  /// Jet of G at F(a), a = x + g(x), from inverting the jet of F at a.
  std::vector<Jet<double>> G_jets;
  double max_residual = 0;
  /// max |G o F - Id| over jet coefficients, over nodes.
  double max_roundtrip_error = 0;
  /// max |det dG * det dF(G) - 1| over nodes.
  double max_det_identity_error = 0;
};

/// Solves g(x) = -f(x + g(x)) per node, starting from -f(x), by fixed-point steps
/// and Newton steps with I + df whenever a fixed-point step fails to halve the residual.
InverseResult invert_diff(const DiffMap& F, const InverseOptions& opts = {});

/// max |g| over nodes with min_i |x_i| >= radius (0 when there are none).
double decay_outside(const InverseResult& r, const GridSpec& grid, double radius);

struct MatrixInverseBound {
  double lhs = 0;  // |A^{-1}|
  double rhs = 0;  // |det A|^{-1} |A|^{n-1}
  bool holds = false;
};

MatrixInverseBound matrix_inverse_bound(const Matrix<double>& A);

/// |f^(k)(x)| <= C rho^k k! M_k for from_order <= k <= K at every node.
struct BoundCertificate {
  double C = 1;
  double rho = 1;
  WeightSequence M = WeightSequence::constant_one();
  int from_order = 1;
  int K = 0;
  /// max over nodes and orders of upper bracket / (C rho^k k! M_k) at construction;
  /// for propagated certificates the lower-bracket ratio of the measured composite, 0 if none.
  double worst_ratio = 0;
};

/// rho = 1.25 times the type radius; polynomial-like inputs (type radius 0) take the
/// smallest rho for which the first nonzero order dominates. Needs K >= 6.
BoundCertificate certificate_estimate(const SampledFunction& f, const WeightSequence& M, int from_order, int K);

/// Smallest C valid at the given rho.
BoundCertificate certificate_at(const SampledFunction& f, const WeightSequence& M, int from_order, int K, double rho);

/// Largest measured ratio against the certificate: lower brackets when use_lower, else upper.
double certificate_ratio(const BoundCertificate& c, const SampledFunction& f, bool use_lower = false);

/// M1 Cf Cg rho_f rho_g^k (1 + M1 rho_f Cg)^(k-1).
double compose_bound_value(double M1, double Cf, double Cg, double rho_f, double rho_g, int k);

enum class ComposeMode { beurling, roumieu };

struct CompositionSources {
  const SampledFunction* f = nullptr;
  const SampledFunction* g = nullptr;
  /// f o g on g's grid, for the majorization check.
  const SampledFunction* composite = nullptr;
};

struct ComposedCertificate {
  /// C' = M1 Cf Cg rho_f, rho' = rho_g (1 + M1 rho_f Cg).
  BoundCertificate cert;
  /// The f and g certificates the bound was built from (re-tuned in Beurling mode).
  BoundCertificate f_used, g_used;
  double M1 = 1;
  std::optional<double> sigma;
  /// bound_values[k-1] for k = 1..K.
  std::vector<double> bound_values;
  /// Roumieu mode: the bound through the geometric rate r_k = (2 rho_g max(1, Cg))^-k,
  /// C = M1 Cf rho_f / (1 + M1 rho_f), rho = rho_g max(1, Cg) (1 + M1 rho_f).
  std::optional<BoundCertificate> projective;
  /// Largest lower-bracket measurement of the composite over bound_values.
  std::optional<double> measured_ratio;
  std::optional<bool> majorizes;
};

/// Beurling mode needs sources.f and sources.g to re-tune the constants at
/// rho_g = sqrt(sigma), rho_f = sqrt(sigma) / (Cg M1) with sqrt(sigma) + sigma = rho_target.
ComposedCertificate propagate_compose(const BoundCertificate& cf, const BoundCertificate& cg, ComposeMode mode,
                                      double rho_target = 0, const CompositionSources& sources = {});

struct InverseBoundTable {
  double F1_bound = 0;  // 1 + C rho M1
  double T_bound = 0;   // delta^-1 F1_bound^(n-1)
  double theta = 0;     // T_bound * 2 C rho M1
  /// beta[k] bounds |G^(k)|/k!, b[k] = beta[k] / M_k; entry 0 unused.
  std::vector<double> beta;
  std::vector<double> b;
  double C_fit = 0;
  double rho_fit = 0;
};

/// Recursion G^(k)/k! = (I - T F'(G)) G^(k)/k! - T sum_{j>=2} F^(j)(G)/j! (G^(a_1)/a_1!, ...):
/// beta_k <= theta beta_k + T_bound R_k. Throws ContractionFailure when theta >= 1.
InverseBoundTable propagate_inverse(const BoundCertificate& cert_f, double delta, int n, int K);

/// Largest lower bracket of |G^(k)|/(k! M_k) over the table entry, across jets and 1 <= k <= K.
double inverse_table_ratio(const InverseBoundTable& t, const WeightSequence& M, const std::vector<Jet<double>>& jets);

}  // namespace ultrajet

#endif
