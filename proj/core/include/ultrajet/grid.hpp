#ifndef ULTRAJET_GRID_HPP
#define ULTRAJET_GRID_HPP

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace ultrajet {

struct Axis {
  double lo = 0;
  double hi = 0;
  int points = 0;

  double step() const { return (hi - lo) / (points - 1); }
  double node(int i) const { return i == points - 1 ? hi : lo + (hi - lo) * i / (points - 1); }
  /// Composite Simpson weight of node i.
  double simpson_weight(int i) const;
  bool operator==(const Axis&) const = default;
};

/// Tensor grid with an odd number (>= 3) of uniformly spaced points per axis.
/// Nodes are numbered with the last axis running fastest.
class GridSpec {
 public:
  GridSpec() = default;
  explicit GridSpec(std::vector<Axis> axes);

  /// "a:b:points" per axis, axes separated by ','.
  static GridSpec parse(std::string_view text);

  int dims() const { return static_cast<int>(axes_.size()); }
  const Axis& axis(int i) const { return axes_[i]; }
  const std::vector<Axis>& axes() const { return axes_; }
  std::size_t node_count() const { return count_; }

  /// Per-axis indices of a flat node number.
  std::vector<int> unflatten(std::size_t node) const;
  std::size_t flatten(const std::vector<int>& idx) const;
  std::vector<double> coordinates(std::size_t node) const;
  double simpson_weight(std::size_t node) const;
  /// True if node lies on the boundary of the box.
  bool on_boundary(std::size_t node) const;

  /// Grid on the given subset of axes, in order.
  GridSpec sub_grid(const std::vector<int>& axes) const;
  /// Same box with 2*(points-1)+1 points per axis.
  GridSpec refined() const;

  std::string to_string() const;
  bool operator==(const GridSpec&) const = default;

 private:
  std::vector<Axis> axes_;
  std::size_t count_ = 0;
};

}  // namespace ultrajet

#endif
