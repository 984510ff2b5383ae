#include "ultrajet/grid.hpp"

#include "ultrajet/errors.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace ultrajet {

double Axis::simpson_weight(int i) const {
  double h = step();
  if (i == 0 || i == points - 1) return h / 3;
  return (i % 2 == 1 ? 4.0 : 2.0) * h / 3;
}

GridSpec::GridSpec(std::vector<Axis> axes) : axes_(std::move(axes)) {
  if (axes_.empty()) throw InvalidGrid("grid needs at least one axis");
  count_ = 1;
  for (const auto& a : axes_) {
    if (!(a.lo < a.hi) || !std::isfinite(a.lo) || !std::isfinite(a.hi))
      throw InvalidGrid("axis bounds must satisfy a < b");
    if (a.points < 3 || a.points % 2 == 0) throw InvalidGrid("points per axis must be odd and >= 3");
    count_ *= static_cast<std::size_t>(a.points);
  }
}

GridSpec GridSpec::parse(std::string_view text) {
  std::vector<Axis> axes;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto comma = text.find(',', pos);
    std::string item(text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
    Axis a;
    char tail = 0;
    if (std::sscanf(item.c_str(), " %lf : %lf : %d %c", &a.lo, &a.hi, &a.points, &tail) != 3)
      throw InvalidGrid("expected 'a:b:points', got '" + item + "'");
    axes.push_back(a);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return GridSpec(std::move(axes));
}

std::vector<int> GridSpec::unflatten(std::size_t node) const {
  std::vector<int> idx(axes_.size());
  for (std::size_t d = axes_.size(); d-- > 0;) {
    idx[d] = static_cast<int>(node % axes_[d].points);
    node /= axes_[d].points;
  }
  return idx;
}

std::size_t GridSpec::flatten(const std::vector<int>& idx) const {
  std::size_t node = 0;
  for (std::size_t d = 0; d < axes_.size(); ++d) node = node * axes_[d].points + idx[d];
  return node;
}

std::vector<double> GridSpec::coordinates(std::size_t node) const {
  auto idx = unflatten(node);
  std::vector<double> x(axes_.size());
  for (std::size_t d = 0; d < axes_.size(); ++d) x[d] = axes_[d].node(idx[d]);
  return x;
}

double GridSpec::simpson_weight(std::size_t node) const {
  auto idx = unflatten(node);
  double w = 1;
  for (std::size_t d = 0; d < axes_.size(); ++d) w *= axes_[d].simpson_weight(idx[d]);
  return w;
}

bool GridSpec::on_boundary(std::size_t node) const {
  auto idx = unflatten(node);
  for (std::size_t d = 0; d < axes_.size(); ++d)
    if (idx[d] == 0 || idx[d] == axes_[d].points - 1) return true;
  return false;
}

GridSpec GridSpec::sub_grid(const std::vector<int>& which) const {
  std::vector<Axis> axes;
  for (int i : which) axes.push_back(axes_.at(i));
  return GridSpec(std::move(axes));
}

GridSpec GridSpec::refined() const {
  std::vector<Axis> axes = axes_;
  for (auto& a : axes) a.points = 2 * (a.points - 1) + 1;
  return GridSpec(std::move(axes));
}

std::string GridSpec::to_string() const {
  std::string s;
  char buf[96];
  for (std::size_t d = 0; d < axes_.size(); ++d) {
    std::snprintf(buf, sizeof buf, "%s%.17g:%.17g:%d", d ? "," : "", axes_[d].lo, axes_[d].hi, axes_[d].points);
    s += buf;
  }
  return s;
}

}  // namespace ultrajet
