#ifndef ULTRAJET_LINALG_HPP
#define ULTRAJET_LINALG_HPP

#include <cmath>
#include <cstddef>
#include <optional>
#include <type_traits>
#include <utility>
#include <vector>

namespace ultrajet {

template <class T>
using Matrix = std::vector<std::vector<T>>;

template <class T>
Matrix<T> identity_matrix(std::size_t n) {
  Matrix<T> m(n, std::vector<T>(n, T(0)));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = T(1);
  return m;
}

namespace detail {

// Index of the pivot row for column c at or below row r: the largest |a| for
// floating types, the first nonzero entry otherwise. Returns n if none.
template <class T>
std::size_t pick_pivot(const Matrix<T>& a, std::size_t r, std::size_t c) {
  using std::abs;
  std::size_t n = a.size();
  std::size_t best = n;
  if constexpr (std::is_floating_point_v<T>) {
    T best_abs = 0;
    for (std::size_t i = r; i < n; ++i) {
      T v = abs(a[i][c]);
      if (v > best_abs) {
        best_abs = v;
        best = i;
      }
    }
  } else {
    for (std::size_t i = r; i < n; ++i) {
      if (a[i][c] != 0) return i;
    }
  }
  return best;
}

}  // namespace detail

template <class T>
T determinant(Matrix<T> a) {
  std::size_t n = a.size();
  T det(1);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = detail::pick_pivot(a, c, c);
    if (p == n) return T(0);
    if (p != c) {
      std::swap(a[p], a[c]);
      det = -det;
    }
    det *= a[c][c];
    for (std::size_t i = c + 1; i < n; ++i) {
      if (a[i][c] == 0) continue;
      T f = a[i][c] / a[c][c];
      for (std::size_t j = c; j < n; ++j) a[i][j] -= f * a[c][j];
    }
  }
  return det;
}

/// Gauss-Jordan inverse; std::nullopt when a zero pivot is met.
template <class T>
std::optional<Matrix<T>> inverse(Matrix<T> a) {
  std::size_t n = a.size();
  Matrix<T> inv = identity_matrix<T>(n);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = detail::pick_pivot(a, c, c);
    if (p == n) return std::nullopt;
    std::swap(a[p], a[c]);
    std::swap(inv[p], inv[c]);
    T d = a[c][c];
    for (std::size_t j = 0; j < n; ++j) {
      a[c][j] /= d;
      inv[c][j] /= d;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || a[i][c] == 0) continue;
      T f = a[i][c];
      for (std::size_t j = 0; j < n; ++j) {
        a[i][j] -= f * a[c][j];
        inv[i][j] -= f * inv[c][j];
      }
    }
  }
  return inv;
}

template <class T>
std::vector<T> mat_vec(const Matrix<T>& a, const std::vector<T>& v) {
  std::vector<T> out(a.size(), T(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) out[i] += a[i][j] * v[j];
  return out;
}

template <class T>
Matrix<T> mat_mul(const Matrix<T>& a, const Matrix<T>& b) {
  std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
  Matrix<T> out(n, std::vector<T>(m, T(0)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t l = 0; l < k; ++l)
      for (std::size_t j = 0; j < m; ++j) out[i][j] += a[i][l] * b[l][j];
  return out;
}

template <class T>
Matrix<T> transpose(const Matrix<T>& a) {
  if (a.empty()) return {};
  Matrix<T> out(a[0].size(), std::vector<T>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[0].size(); ++j) out[j][i] = a[i][j];
  return out;
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
std::vector<double> symmetric_eigenvalues(Matrix<double> a);

/// Largest eigenvalue and a unit eigenvector of a symmetric matrix.
std::pair<double, std::vector<double>> top_eigenpair(Matrix<double> a);

/// Operator norm induced by the Euclidean norm.
double spectral_norm(const Matrix<double>& a);

}  // namespace ultrajet

#endif
