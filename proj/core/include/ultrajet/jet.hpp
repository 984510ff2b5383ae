#ifndef ULTRAJET_JET_HPP
#define ULTRAJET_JET_HPP

#include "ultrajet/errors.hpp"
#include "ultrajet/linalg.hpp"
#include "ultrajet/multi_index.hpp"
#include "ultrajet/rational.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>
#include <type_traits>
#include <vector>

namespace ultrajet {

/// Truncated Taylor expansion of f: R^n -> R^m at a base point. Coefficient
/// (c, alpha) stores d^alpha f_c(x0) / alpha!. T is double or Rational.
template <class T>
class Jet {
 public:
  Jet() = default;

  /// Zero jet.
  Jet(std::vector<T> base_point, int target_dim, int order)
      : base_(std::move(base_point)), m_(target_dim), basis_(MonomialBasis::get(static_cast<int>(base_.size()), order)) {
    if (target_dim < 0) throw DimensionMismatch("negative target dimension");
    coeffs_.assign(static_cast<std::size_t>(m_) * basis_->size(), T(0));
  }

  static Jet constant(std::vector<T> base_point, const std::vector<T>& values, int order) {
    Jet j(std::move(base_point), static_cast<int>(values.size()), order);
    for (int c = 0; c < j.m(); ++c) j.at(c, 0) = values[c];
    return j;
  }

  /// The coordinate function x_i.
  static Jet variable(std::vector<T> base_point, int i, int order) {
    Jet j(std::move(base_point), 1, order);
    j.at(0, 0) = j.base_[i];
    if (order >= 1) j.at(0, j.basis_->position(MultiIndex::unit(j.base_.size(), i))) = T(1);
    return j;
  }

  static Jet identity(std::vector<T> base_point, int order) {
    int n = static_cast<int>(base_point.size());
    Jet j(std::move(base_point), n, order);
    for (int c = 0; c < n; ++c) {
      j.at(c, 0) = j.base_[c];
      if (order >= 1) j.at(c, j.basis_->position(MultiIndex::unit(n, c))) = T(1);
    }
    return j;
  }

  int n() const { return static_cast<int>(base_.size()); }
  int m() const { return m_; }
  int order() const { return basis_ ? basis_->order() : 0; }
  const std::vector<T>& base_point() const { return base_; }
  const MonomialBasis& basis() const { return *basis_; }
  const std::shared_ptr<const MonomialBasis>& basis_ptr() const { return basis_; }
  std::size_t size() const { return basis_->size(); }

  T& at(int c, std::size_t pos) { return coeffs_[static_cast<std::size_t>(c) * basis_->size() + pos]; }
  const T& at(int c, std::size_t pos) const { return coeffs_[static_cast<std::size_t>(c) * basis_->size() + pos]; }
  T* component_data(int c) { return coeffs_.data() + static_cast<std::size_t>(c) * basis_->size(); }
  const T* component_data(int c) const { return coeffs_.data() + static_cast<std::size_t>(c) * basis_->size(); }

  /// Coefficient at alpha; zero for |alpha| > K.
  T coeff(int c, const MultiIndex& alpha) const {
    std::size_t p = basis_->position(alpha);
    return p == MonomialBasis::npos ? T(0) : at(c, p);
  }
  void set_coeff(int c, const MultiIndex& alpha, T v) {
    std::size_t p = basis_->position(alpha);
    if (p == MonomialBasis::npos) throw OrderMismatch("index " + alpha.to_string() + " exceeds jet order");
    at(c, p) = std::move(v);
  }
  /// d^alpha f_c(x0).
  T derivative(int c, const MultiIndex& alpha) const {
    if (alpha.order() > order()) throw OrderMismatch("derivative order exceeds jet order");
    return coeff(c, alpha) * T(alpha.factorial());
  }

  std::vector<T> value() const {
    std::vector<T> v(m_);
    for (int c = 0; c < m_; ++c) v[c] = at(c, 0);
    return v;
  }

  Jet component(int c) const {
    Jet out(base_, 1, order());
    std::copy(component_data(c), component_data(c) + size(), out.component_data(0));
    return out;
  }

  static Jet stack(const std::vector<Jet>& parts) {
    if (parts.empty()) throw DimensionMismatch("cannot stack zero jets");
    int m = 0;
    for (const auto& p : parts) {
      parts[0].require_compatible(p);
      m += p.m();
    }
    Jet out(parts[0].base_, m, parts[0].order());
    int c = 0;
    for (const auto& p : parts)
      for (int pc = 0; pc < p.m(); ++pc, ++c) std::copy(p.component_data(pc), p.component_data(pc) + p.size(), out.component_data(c));
    return out;
  }

  Jet truncate(int K) const {
    if (K > order()) throw OrderMismatch("cannot raise jet order by truncation");
    if (K == order()) return *this;
    Jet out(base_, m_, K);
    for (int c = 0; c < m_; ++c) std::copy(component_data(c), component_data(c) + out.size(), out.component_data(c));
    return out;
  }

  /// Same coefficients, different base point label.
  Jet rebased(std::vector<T> base_point) const {
    if (base_point.size() != base_.size()) throw DimensionMismatch("base point dimension differs");
    Jet out(*this);
    out.base_ = std::move(base_point);
    return out;
  }

  template <class U>
  Jet<U> convert() const {
    std::vector<U> base;
    for (const auto& x : base_) base.push_back(convert_scalar<U>(x));
    Jet<U> out(std::move(base), m_, order());
    for (int c = 0; c < m_; ++c)
      for (std::size_t p = 0; p < size(); ++p) out.at(c, p) = convert_scalar<U>(at(c, p));
    return out;
  }

  bool is_zero() const {
    for (const auto& v : coeffs_)
      if (v != 0) return false;
    return true;
  }

  bool operator==(const Jet& o) const {
    return base_ == o.base_ && m_ == o.m_ && order() == o.order() && coeffs_ == o.coeffs_;
  }

  void require_compatible(const Jet& o) const {
    if (n() != o.n() || m_ != o.m_) throw DimensionMismatch("jet dimensions differ");
    if (order() != o.order()) throw OrderMismatch("jet orders differ");
    if (base_ != o.base_) throw BasePointMismatch("jets expanded at different base points");
  }

  Jet& operator+=(const Jet& o) {
    require_compatible(o);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    require_compatible(o);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    return *this;
  }
  Jet& operator*=(const T& s) {
    for (auto& v : coeffs_) v *= s;
    return *this;
  }

  template <class U, class V>
  static U convert_scalar(const V& v) {
    if constexpr (std::is_same_v<U, V>)
      return v;
    else if constexpr (std::is_same_v<U, double>)
      return as_double(v);
    else
      return to_rational(v);
  }

 private:
  std::vector<T> base_;
  int m_ = 0;
  std::shared_ptr<const MonomialBasis> basis_;
  std::vector<T> coeffs_;
};

template <class T>
Jet<T> operator+(Jet<T> a, const Jet<T>& b) {
  return a += b;
}
template <class T>
Jet<T> operator-(Jet<T> a, const Jet<T>& b) {
  return a -= b;
}
template <class T>
Jet<T> operator-(Jet<T> a) {
  return a *= T(-1);
}
template <class T>
Jet<T> scale(Jet<T> a, const T& s) {
  return a *= s;
}

namespace detail {

// out += a * b for scalar coefficient arrays over one basis, skipping terms of a
// below degree a_min.
template <class T>
void mul_accumulate(const MonomialBasis& basis, const T* a, const T* b, T* out, int a_min = 0) {
  const auto& prods = basis.products();
  for (std::size_t p = basis.degree_begin(std::min(a_min, basis.order() + 1)); p < basis.size(); ++p) {
    const T& ap = a[p];
    if (ap == 0) continue;
    for (const auto& pr : prods[p]) {
      const T& bq = b[pr.q];
      if (bq == 0) continue;
      out[pr.r] += ap * bq;
    }
  }
}

}  // namespace detail

/// Truncated product. Scalar jets multiply a jet of any target dimension
/// componentwise; otherwise target dimensions must agree (pointwise pairing).
template <class T>
Jet<T> mul(const Jet<T>& a, const Jet<T>& b) {
  if (a.n() != b.n()) throw DimensionMismatch("jet source dimensions differ");
  if (a.order() != b.order()) throw OrderMismatch("jet orders differ");
  if (a.base_point() != b.base_point()) throw BasePointMismatch("jets expanded at different base points");
  if (a.m() != b.m() && a.m() != 1 && b.m() != 1) throw DimensionMismatch("mul needs scalar jets or equal target dimensions");
  int m = std::max(a.m(), b.m());
  Jet<T> out(a.base_point(), m, a.order());
  for (int c = 0; c < m; ++c)
    detail::mul_accumulate(a.basis(), a.component_data(a.m() == 1 ? 0 : c), b.component_data(b.m() == 1 ? 0 : c),
                           out.component_data(c));
  return out;
}

template <class T>
Jet<T> operator*(const Jet<T>& a, const Jet<T>& b) {
  return mul(a, b);
}

namespace detail {

template <class T>
bool base_matches(const T& a, const T& b) {
  if constexpr (std::is_floating_point_v<T>) {
    return std::abs(a - b) <= 1e-12 * std::max(1.0, std::max(std::abs(a), std::abs(b)));
  } else {
    return a == b;
  }
}

}  // namespace detail

/// Jet of f o g at g's base point, to order min(f.K, g.K).
template <class T>
Jet<T> compose(const Jet<T>& f, const Jet<T>& g) {
  if (g.m() != f.n()) throw DimensionMismatch("inner jet target dimension must equal outer source dimension");
  for (int i = 0; i < f.n(); ++i)
    if (!detail::base_matches(g.at(i, 0), f.base_point()[i]))
      throw BasePointMismatch("inner jet value does not match outer base point");
  int K = std::min(f.order(), g.order());
  Jet<T> inner = g.truncate(K);
  for (int i = 0; i < inner.m(); ++i) inner.at(i, 0) = T(0);
  const MonomialBasis& gb = inner.basis();
  const MonomialBasis& fb = f.basis();
  std::size_t nf = fb.degree_begin(K + 1);
  std::size_t ng = gb.size();

  // powers[p] = u^alpha_p for the monomials of f up to order K.
  std::vector<std::vector<T>> powers(nf);
  powers[0].assign(ng, T(0));
  powers[0][0] = T(1);
  for (std::size_t p = 1; p < nf; ++p) {
    powers[p].assign(ng, T(0));
    const auto& prev = powers[fb.parent(p)];
    detail::mul_accumulate(gb, prev.data(), inner.component_data(fb.parent_var(p)), powers[p].data(),
                           fb.index(fb.parent(p)).order());
  }

  Jet<T> out(g.base_point(), f.m(), K);
  for (int c = 0; c < f.m(); ++c) {
    T* o = out.component_data(c);
    for (std::size_t p = 0; p < nf; ++p) {
      const T& fc = f.at(c, p);
      if (fc == 0) continue;
      std::size_t start = gb.degree_begin(fb.index(p).order());
      for (std::size_t q = start; q < ng; ++q)
        if (powers[p][q] != 0) o[q] += fc * powers[p][q];
    }
  }
  return out;
}

/// Linear part as a matrix, rows = components.
template <class T>
Matrix<T> linear_part(const Jet<T>& f) {
  Matrix<T> a(f.m(), std::vector<T>(f.n(), T(0)));
  if (f.order() < 1) return a;
  for (int c = 0; c < f.m(); ++c)
    for (int j = 0; j < f.n(); ++j) a[c][j] = f.at(c, f.basis().position(MultiIndex::unit(f.n(), j)));
  return a;
}

/// Applies a constant matrix to the components of a jet.
template <class T>
Jet<T> apply_matrix(const Matrix<T>& a, const Jet<T>& f) {
  Jet<T> out(f.base_point(), static_cast<int>(a.size()), f.order());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (int j = 0; j < f.m(); ++j) {
      if (a[i][j] == 0) continue;
      const T* src = f.component_data(j);
      T* dst = out.component_data(static_cast<int>(i));
      for (std::size_t p = 0; p < f.size(); ++p) dst[p] += a[i][j] * src[p];
    }
  return out;
}

constexpr double kFloatSingularDet = 1e-10;

/// Jet at F(x0) of the local inverse of F.
template <class T>
Jet<T> invert(const Jet<T>& F) {
  if (F.n() != F.m()) throw DimensionMismatch("only maps R^n -> R^n can be inverted");
  if (F.order() < 1) throw OrderMismatch("inversion needs order >= 1");
  int n = F.n(), K = F.order();
  Matrix<T> A = linear_part(F);
  T det = determinant(A);
  bool singular;
  if constexpr (std::is_floating_point_v<T>)
    singular = !(std::abs(det) > kFloatSingularDet);
  else
    singular = det == 0;
  if (singular) throw SingularDerivative("det dF(x0) = " + std::to_string(as_double(det)));
  Matrix<T> Tm = *inverse(A);

  std::vector<T> y0 = F.value();
  Jet<T> id_y = Jet<T>::identity(y0, K);
  // G = x0 + T (y - y0), then chord iterations G <- G - T (F o G - Id).
  Jet<T> G(y0, n, K);
  for (int i = 0; i < n; ++i) {
    G.at(i, 0) = F.base_point()[i];
    for (int j = 0; j < n; ++j) G.at(i, G.basis().position(MultiIndex::unit(n, j))) = Tm[i][j];
  }
  for (int iter = 1; iter < K; ++iter) {
    Jet<T> residual = compose(F, G) - id_y;
    if (residual.is_zero()) break;
    G -= apply_matrix(Tm, residual);
    for (int i = 0; i < n; ++i) G.at(i, 0) = F.base_point()[i];
  }
  return G;
}

/// d_v^k f(x0) = k! sum_{|alpha|=k} c_alpha v^alpha, per component.
template <class T>
std::vector<T> directional_derivative(const Jet<T>& f, const std::vector<T>& v, int k) {
  if (k > f.order() || k < 0) throw OrderMismatch("directional derivative order exceeds jet order");
  if (static_cast<int>(v.size()) != f.n()) throw DimensionMismatch("direction has wrong dimension");
  const MonomialBasis& b = f.basis();
  std::vector<T> out(f.m(), T(0));
  for (std::size_t p = b.degree_begin(k); p < b.degree_begin(k + 1); ++p) {
    T mono(1);
    const MultiIndex& a = b.index(p);
    for (int i = 0; i < f.n(); ++i)
      for (int e = 0; e < a[i]; ++e) mono *= v[i];
    for (int c = 0; c < f.m(); ++c) out[c] += f.at(c, p) * mono;
  }
  T kf(factorial(k));
  for (auto& x : out) x *= kf;
  return out;
}

/// Jet of d f / d x_i, one order lower.
template <class T>
Jet<T> partial_derivative(const Jet<T>& f, int i) {
  if (f.order() < 1) throw OrderMismatch("cannot differentiate an order-0 jet");
  Jet<T> out(f.base_point(), f.m(), f.order() - 1);
  const MonomialBasis& ob = out.basis();
  const MonomialBasis& fb = f.basis();
  for (std::size_t p = 0; p < ob.size(); ++p) {
    MultiIndex up = ob.index(p);
    int e = ++up[i];
    std::size_t q = fb.position(up);
    for (int c = 0; c < f.m(); ++c) out.at(c, p) = f.at(c, q) * T(e);
  }
  return out;
}

/// Taylor polynomial evaluated at x0 + h.
template <class T>
std::vector<T> evaluate_polynomial(const Jet<T>& f, const std::vector<T>& h) {
  const MonomialBasis& b = f.basis();
  std::vector<T> mono(b.size());
  mono[0] = T(1);
  for (std::size_t p = 1; p < b.size(); ++p) mono[p] = mono[b.parent(p)] * h[b.parent_var(p)];
  std::vector<T> out(f.m(), T(0));
  for (int c = 0; c < f.m(); ++c)
    for (std::size_t p = 0; p < b.size(); ++p) out[c] += f.at(c, p) * mono[p];
  return out;
}

/// Jet of 1/u; u must be scalar with nonzero value.
template <class T>
Jet<T> reciprocal(const Jet<T>& u);

/// One-variable jet at u0 from Taylor coefficients c_k.
template <class T>
Jet<T> univariate(const T& u0, std::vector<T> coeffs) {
  Jet<T> j({u0}, 1, static_cast<int>(coeffs.size()) - 1);
  for (std::size_t k = 0; k < coeffs.size(); ++k) j.at(0, k) = std::move(coeffs[k]);
  return j;
}

template <class T>
Jet<T> reciprocal(const Jet<T>& u) {
  if (u.m() != 1) throw DimensionMismatch("reciprocal needs a scalar jet");
  const T u0 = u.at(0, 0);
  if (u0 == 0) throw EvaluationError("division by zero");
  int K = u.order();
  std::vector<T> c(K + 1);
  T inv = T(1) / u0, p = inv;
  for (int k = 0; k <= K; ++k) {
    c[k] = (k % 2 == 0) ? p : T(-p);
    p *= inv;
  }
  return compose(univariate(u0, std::move(c)), u);
}

/// Right side of the ordered Faa di Bruno formula,
///   sum_{j>=1} sum_{a_1+...+a_j=k, a_i>=1} f_j/j! prod g_{a_i}/a_i!,
/// with f_derivs[j] = f^(j) and g_derivs[a] = g^(a). For actual derivatives this
/// is the k-th Taylor coefficient (f o g)^(k)/k!.
template <class T>
T fdb_partition_sum(const std::vector<T>& f_derivs, const std::vector<T>& g_derivs, int k) {
  if (k > 12) throw HorizonExceeded("composition enumeration is limited to k <= 12");
  if (k < 1) throw PreconditionFailed("k must be >= 1");
  if (static_cast<int>(f_derivs.size()) <= k || static_cast<int>(g_derivs.size()) <= k)
    throw PreconditionFailed("derivative lists must have entries up to index k");
  std::vector<T> g_scaled(k + 1);
  for (int a = 1; a <= k; ++a) g_scaled[a] = g_derivs[a] / T(factorial(a));
  T total(0);
  std::vector<int> parts;
  // Depth-first enumeration of ordered compositions.
  auto rec = [&](auto&& self, int remaining, const T& prod) -> void {
    if (remaining == 0) {
      int j = static_cast<int>(parts.size());
      total += f_derivs[j] / T(factorial(j)) * prod;
      return;
    }
    for (int a = 1; a <= remaining; ++a) {
      parts.push_back(a);
      self(self, remaining - a, prod * g_scaled[a]);
      parts.pop_back();
    }
  };
  rec(rec, k, T(1));
  return total;
}

}  // namespace ultrajet

#endif
