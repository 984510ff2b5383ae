#include "ultrajet/multi_index.hpp"

#include "ultrajet/errors.hpp"

#include <map>
#include <mutex>
#include <numeric>

namespace ultrajet {

MultiIndex MultiIndex::unit(std::size_t n, std::size_t i) {
  MultiIndex a(n);
  a[i] = 1;
  return a;
}

int MultiIndex::order() const { return std::accumulate(a_.begin(), a_.end(), 0); }

Integer MultiIndex::factorial() const {
  Integer r = 1;
  for (int v : a_) r *= ultrajet::factorial(v);
  return r;
}

double MultiIndex::factorial_double() const {
  double r = 1;
  for (int v : a_)
    for (int i = 2; i <= v; ++i) r *= i;
  return r;
}

bool MultiIndex::leq(const MultiIndex& o) const {
  if (o.size() != size()) throw DimensionMismatch("multi-index lengths differ");
  for (std::size_t i = 0; i < size(); ++i)
    if (a_[i] > o.a_[i]) return false;
  return true;
}

MultiIndex MultiIndex::operator+(const MultiIndex& o) const {
  if (o.size() != size()) throw DimensionMismatch("multi-index lengths differ");
  MultiIndex r(*this);
  for (std::size_t i = 0; i < size(); ++i) r.a_[i] += o.a_[i];
  return r;
}

MultiIndex MultiIndex::operator-(const MultiIndex& o) const {
  if (o.size() != size()) throw DimensionMismatch("multi-index lengths differ");
  MultiIndex r(*this);
  for (std::size_t i = 0; i < size(); ++i) r.a_[i] -= o.a_[i];
  return r;
}

std::strong_ordering MultiIndex::operator<=>(const MultiIndex& o) const {
  if (auto c = order() <=> o.order(); c != 0) return c;
  if (auto c = size() <=> o.size(); c != 0) return c;
  for (std::size_t i = 0; i < size(); ++i)
    if (a_[i] != o.a_[i]) return o.a_[i] <=> a_[i];
  return std::strong_ordering::equal;
}

std::string MultiIndex::to_string() const {
  std::string s = "(";
  for (std::size_t i = 0; i < size(); ++i) {
    if (i) s += ",";
    s += std::to_string(a_[i]);
  }
  return s + ")";
}

namespace {

void append_order(int n, int k, std::vector<MultiIndex>& out) {
  MultiIndex a(static_cast<std::size_t>(n));
  if (n == 0) {
    if (k == 0) out.push_back(a);
    return;
  }
  // Lexicographic with larger leading entries first.
  auto rec = [&](auto&& self, int pos, int remaining) -> void {
    if (pos == n - 1) {
      a[pos] = remaining;
      out.push_back(a);
      return;
    }
    for (int v = remaining; v >= 0; --v) {
      a[pos] = v;
      self(self, pos + 1, remaining - v);
    }
  };
  rec(rec, 0, k);
}

}  // namespace

std::vector<MultiIndex> multi_indices_of_order(int n, int k) {
  std::vector<MultiIndex> out;
  append_order(n, k, out);
  return out;
}

std::vector<MultiIndex> multi_indices_up_to(int n, int K) {
  std::vector<MultiIndex> out;
  for (int k = 0; k <= K; ++k) append_order(n, k, out);
  return out;
}

MonomialBasis::MonomialBasis(int vars, int order) : vars_(vars), order_(order) {
  if (vars < 0 || order < 0) throw DimensionMismatch("negative basis size");
  degree_begin_.reserve(order + 2);
  for (int k = 0; k <= order; ++k) {
    degree_begin_.push_back(indices_.size());
    append_order(vars, k, indices_);
  }
  degree_begin_.push_back(indices_.size());
  for (std::size_t p = 0; p < indices_.size(); ++p) lookup_.emplace(encode(indices_[p]), p);
  parent_.assign(indices_.size(), 0);
  parent_var_.assign(indices_.size(), -1);
  factorials_.resize(indices_.size());
  for (std::size_t p = 0; p < indices_.size(); ++p) {
    factorials_[p] = indices_[p].factorial_double();
    if (p == 0) continue;
    for (int v = 0; v < vars; ++v) {
      if (indices_[p][v] > 0) {
        MultiIndex q = indices_[p];
        --q[v];
        parent_[p] = position(q);
        parent_var_[p] = v;
        break;
      }
    }
  }
  products_.resize(indices_.size());
  for (std::size_t p = 0; p < indices_.size(); ++p) {
    int dp = indices_[p].order();
    for (std::size_t q = 0; q < degree_begin_[order - dp + 1]; ++q)
      products_[p].push_back({q, position(indices_[p] + indices_[q])});
  }
}

std::size_t MonomialBasis::encode(const MultiIndex& a) const {
  std::size_t code = 0;
  for (std::size_t i = 0; i < a.size(); ++i) code = code * static_cast<std::size_t>(order_ + 1) + a[i];
  return code;
}

std::size_t MonomialBasis::position(const MultiIndex& alpha) const {
  if (static_cast<int>(alpha.size()) != vars_) throw DimensionMismatch("multi-index length does not match basis");
  for (std::size_t i = 0; i < alpha.size(); ++i)
    if (alpha[i] < 0) return npos;
  if (alpha.order() > order_) return npos;
  return lookup_.at(encode(alpha));
}

std::size_t MonomialBasis::sum_position(std::size_t p, std::size_t q) const {
  if (indices_[p].order() + indices_[q].order() > order_) return npos;
  return position(indices_[p] + indices_[q]);
}

std::shared_ptr<const MonomialBasis> MonomialBasis::get(int vars, int order) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const MonomialBasis>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{vars, order}];
  if (!slot) slot = std::shared_ptr<const MonomialBasis>(new MonomialBasis(vars, order));
  return slot;
}

}  // namespace ultrajet
