#ifndef ULTRAJET_MULTI_INDEX_HPP
#define ULTRAJET_MULTI_INDEX_HPP

#include "ultrajet/rational.hpp"

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

namespace ultrajet {

class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::size_t n) : a_(n, 0) {}
  MultiIndex(std::initializer_list<int> a) : a_(a) {}
  explicit MultiIndex(std::vector<int> a) : a_(std::move(a)) {}

  static MultiIndex unit(std::size_t n, std::size_t i);

  std::size_t size() const { return a_.size(); }
  int operator[](std::size_t i) const { return a_[i]; }
  int& operator[](std::size_t i) { return a_[i]; }
  const std::vector<int>& values() const { return a_; }

  int order() const;
  Integer factorial() const;
  double factorial_double() const;
  /// Componentwise alpha <= beta.
  bool leq(const MultiIndex& other) const;

  MultiIndex operator+(const MultiIndex& o) const;
  MultiIndex operator-(const MultiIndex& o) const;
  bool operator==(const MultiIndex& o) const = default;

  /// Graded lexicographic: lower total order first, then larger leading entries first.
  std::strong_ordering operator<=>(const MultiIndex& o) const;

  std::string to_string() const;

 private:
  std::vector<int> a_;
};

/// Monomials x^alpha with |alpha| <= order in a fixed number of variables, in
/// graded lexicographic order, with lookup tables for truncated arithmetic.
/// Bases are shared: get() returns the same instance for equal (vars, order).
class MonomialBasis {
 public:
  static std::shared_ptr<const MonomialBasis> get(int vars, int order);

  int vars() const { return vars_; }
  int order() const { return order_; }
  std::size_t size() const { return indices_.size(); }
  const MultiIndex& index(std::size_t pos) const { return indices_[pos]; }
  const std::vector<MultiIndex>& indices() const { return indices_; }
  /// Position of alpha, or npos when |alpha| > order.
  std::size_t position(const MultiIndex& alpha) const;
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  /// First position of the monomials of total degree d (d may equal order+1).
  std::size_t degree_begin(int d) const { return degree_begin_[d]; }

  /// For each position p > 0: a position q and a variable v with alpha_p = alpha_q + e_v.
  std::size_t parent(std::size_t pos) const { return parent_[pos]; }
  int parent_var(std::size_t pos) const { return parent_var_[pos]; }

  /// Position of alpha_p + alpha_q, or npos when the sum exceeds the order.
  std::size_t sum_position(std::size_t p, std::size_t q) const;

  /// All (p, q, r) with alpha_p + alpha_q = alpha_r, grouped by p.
  struct Product {
    std::size_t q;
    std::size_t r;
  };
  const std::vector<std::vector<Product>>& products() const { return products_; }

  /// factorial of each index, as double.
  double factorial(std::size_t pos) const { return factorials_[pos]; }

 private:
  MonomialBasis(int vars, int order);
  std::size_t encode(const MultiIndex& a) const;

  int vars_;
  int order_;
  std::vector<MultiIndex> indices_;
  std::vector<std::size_t> degree_begin_;
  std::vector<std::size_t> parent_;
  std::vector<int> parent_var_;
  std::vector<double> factorials_;
  std::unordered_map<std::size_t, std::size_t> lookup_;
  std::vector<std::vector<Product>> products_;
};

/// All multi-indices of n variables with |alpha| <= K, graded lexicographic.
std::vector<MultiIndex> multi_indices_up_to(int n, int K);
/// All multi-indices of n variables with |alpha| == k, lexicographic (largest first).
std::vector<MultiIndex> multi_indices_of_order(int n, int k);

}  // namespace ultrajet

#endif
