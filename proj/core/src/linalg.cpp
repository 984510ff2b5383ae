#include "ultrajet/linalg.hpp"

#include <algorithm>
#include <numeric>

namespace ultrajet {

namespace {

// Cyclic Jacobi sweeps; on return `a` is (numerically) diagonal and `v` holds the
// accumulated rotations as columns.
void jacobi(Matrix<double>& a, Matrix<double>& v) {
  std::size_t n = a.size();
  v = identity_matrix<double>(n);
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0, diag = 0;
    for (std::size_t i = 0; i < n; ++i) {
      diag += a[i][i] * a[i][i];
      for (std::size_t j = i + 1; j < n; ++j) off += a[i][j] * a[i][j];
    }
    if (off <= 1e-32 * std::max(diag, 1e-300)) return;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (a[p][q] == 0) continue;
        double theta = (a[q][q] - a[p][p]) / (2 * a[p][q]);
        double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1));
        double c = 1 / std::sqrt(t * t + 1), s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          double vkp = v[k][p], vkq = v[k][q];
          v[k][p] = c * vkp - s * vkq;
          v[k][q] = s * vkp + c * vkq;
        }
      }
    }
  }
}

}  // namespace

std::vector<double> symmetric_eigenvalues(Matrix<double> a) {
  Matrix<double> v;
  jacobi(a, v);
  std::vector<double> ev(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) ev[i] = a[i][i];
  std::sort(ev.begin(), ev.end());
  return ev;
}

std::pair<double, std::vector<double>> top_eigenpair(Matrix<double> a) {
  std::size_t n = a.size();
  if (n == 0) return {0.0, {}};
  Matrix<double> v;
  jacobi(a, v);
  std::size_t best = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (a[i][i] > a[best][best]) best = i;
  std::vector<double> vec(n);
  for (std::size_t k = 0; k < n; ++k) vec[k] = v[k][best];
  return {a[best][best], vec};
}

double spectral_norm(const Matrix<double>& a) {
  if (a.empty()) return 0;
  auto ata = mat_mul(transpose(a), a);
  auto ev = symmetric_eigenvalues(ata);
  return std::sqrt(std::max(0.0, ev.back()));
}

}  // namespace ultrajet
