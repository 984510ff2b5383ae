#ifndef ULTRAJET_CLASSNORMS_HPP
#define ULTRAJET_CLASSNORMS_HPP

#include "ultrajet/funcdsl.hpp"
#include "ultrajet/grid.hpp"
#include "ultrajet/jet.hpp"
#include "ultrajet/weightseq.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ultrajet {

struct SupportInfo {
  /// max over nonzero nodes of max_i(|x_i| + h_i); 0 for the zero function.
  double radius = 0;
  /// Bounding box of the nonzero nodes widened by one step, per axis.
  std::vector<double> lo, hi;
};

/// Jets of a function at every node of a grid.
class SampledFunction {
 public:
  SampledFunction() = default;
  SampledFunction(GridSpec grid, int order, int target_dim, std::vector<Jet<double>> jets,
                  std::optional<Expr> source = std::nullopt);

  const GridSpec& grid() const { return grid_; }
  int order() const { return order_; }
  int n() const { return grid_.dims(); }
  int m() const { return m_; }
  const std::vector<Jet<double>>& jets() const { return jets_; }
  const Jet<double>& jet(std::size_t node) const { return jets_[node]; }
  const std::optional<Expr>& source() const { return source_; }
  /// Present when every nonzero node sits at least two steps inside the box.
  const std::optional<SupportInfo>& support() const { return support_; }

  /// Re-evaluates the source expression at `samples` pseudo-random nodes and
  /// compares with the stored jets. True when no source is attached.
  bool spot_check(std::uint64_t seed = 1, int samples = 5, double tol = 1e-12) const;

 private:
  GridSpec grid_;
  int order_ = 0;
  int m_ = 0;
  std::vector<Jet<double>> jets_;
  std::optional<Expr> source_;
  std::optional<SupportInfo> support_;
};

SampledFunction sample(const Expr& e, const GridSpec& grid, int K);

std::optional<SupportInfo> detect_support(const GridSpec& grid, const std::vector<Jet<double>>& jets);

enum class Family { B, S, BM, SLM, Wp, WMp, D, DM };
enum class ClassType { beurling, roumieu, plain };

std::string to_string(Family f);
Family parse_family(std::string_view text);
std::string to_string(ClassType t);
ClassType parse_class_type(std::string_view text);

struct ClassSpec {
  Family family = Family::B;
  ClassType type = ClassType::plain;
  std::optional<WeightSequence> M;
  std::optional<WeightSequence> L;
  std::optional<double> rho;
  std::optional<double> p;

  /// Throws InvalidClassSpec when the fields do not fit the family.
  void validate() const;

  static ClassSpec plain(Family f, std::optional<double> p = std::nullopt);
  static ClassSpec weighted(Family f, ClassType t, WeightSequence M, double rho, std::optional<WeightSequence> L = {},
                            std::optional<double> p = std::nullopt);
};

struct Bracket {
  double lower = 0;
  double upper = 0;
};

/// Bounds for ||f^(k)(x0)|| as a symmetric k-linear map. Vector-valued jets use
/// the Euclidean norm on the target.
Bracket opnorm_bracket(const Jet<double>& j, int k, const std::vector<std::vector<double>>& directions);
/// max(2n, 64) unit vectors: coordinate axes, the main diagonal, then a Halton
/// sequence mapped to the sphere. For n = 1 the single direction 1.
std::vector<std::vector<double>> sample_directions(int n);

struct SeminormEntry {
  std::vector<int> index;
  Bracket value;
};

struct SeminormReport {
  Family family = Family::B;
  int truncation = 0;
  std::vector<SeminormEntry> entries;
  /// Supremum over the entries, for the weighted families.
  std::optional<Bracket> norm;
  bool finite_at_truncation = true;
  /// D and DM only.
  std::optional<bool> support_ok;
  std::optional<double> support_radius;
};

/// Empty `indices` selects every index up to the truncation order.
SeminormReport seminorm(const SampledFunction& f, const ClassSpec& spec, const std::vector<std::vector<int>>& indices = {});

/// Composite Simpson L^p norm of d^alpha f over the grid box.
double lp_norm(const SampledFunction& f, const MultiIndex& alpha, double p);

/// Throws QuadratureBoxTooSmall if the boundary values of d^alpha f exceed
/// 1e-6 of its interior maximum.
void check_boundary_mass(const SampledFunction& f, const MultiIndex& alpha);

enum class TypeClass { beurling_like, roumieu_like, outside };
std::string to_string(TypeClass t);

struct TypeRadiusReport {
  double rho_star = 0;
  TypeClass classification = TypeClass::roumieu_like;
  /// (sup_x upper_k / (k! M_k))^(1/k) for k = 1..K.
  std::vector<double> roots;
};

TypeRadiusReport type_radius(const SampledFunction& f, const WeightSequence& M, int K);

struct TraceReport {
  double lhs = 0;
  double rhs = 0;
  double ratio = 0;
  /// max(1, p-1)^(1/p), the constant delivered by the Young-inequality argument.
  double proof_constant = 1;
  bool within_proof_constant = true;
};

/// Slice along the first axis at x0 versus the W^{1,p} norm over the full grid.
TraceReport trace_check(const SampledFunction& f, double x0, double p);

struct TensorReport {
  double value = 0;
  double g_norm = 0;
  double dual_sup = 0;
  double direct_norm = 0;
  bool majorizes = true;
  bool strict = false;
  /// The dual supremum is exact for p in {1, 2} or a single pair.
  bool sup_exact = false;
};

TensorReport tensor_seminorm(const std::vector<std::pair<SampledFunction, SampledFunction>>& pairs, int alpha,
                             int beta, double p);

/// Quadrature of int f(x) exp(-2 pi i x xi) dx on a 1-D xi grid; target (Re, Im).
SampledFunction fourier_1d(const SampledFunction& f, const GridSpec& xi_grid);

struct FactorizationReport {
  double max_discrepancy = 0;
  /// Iterated transform values (Re, Im) at the xi nodes, last axis fastest.
  std::vector<std::pair<double, double>> iterated;
};

/// Transforms a 2-D sample in x1 then x2 and compares with the joint transform.
FactorizationReport factorization_check(const SampledFunction& f, const GridSpec& xi_grid);

}  // namespace ultrajet

#endif
