#include "varsel/pwfun.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace varsel {

namespace {

void validate_grid01(const std::vector<double>& grid) {
  if (grid.size() < 2 || grid.front() != 0.0 || grid.back() != 1.0)
    throw std::invalid_argument("function grid must run from 0 to 1");
  for (std::size_t i = 0; i + 1 < grid.size(); ++i)
    if (!(grid[i] < grid[i + 1]))
      throw std::invalid_argument("function grid not strictly increasing");
}

void validate_values(const std::vector<double>& v) {
  for (double x : v)
    if (!std::isfinite(x))
      throw std::invalid_argument("function values must be finite");
}

}  // namespace

PiecewiseFunction PiecewiseFunction::continuous(std::vector<double> grid,
                                                std::vector<double> node_values) {
  validate_grid01(grid);
  validate_values(node_values);
  if (node_values.size() != grid.size())
    throw std::invalid_argument("need one value per grid node");
  PiecewiseFunction f;
  f.grid_ = std::move(grid);
  f.node_values_ = std::move(node_values);
  f.piece_starts_.assign(f.node_values_.begin(), f.node_values_.end() - 1);
  f.mode_ = FunctionMode::ContinuousPWA;
  return f;
}

PiecewiseFunction PiecewiseFunction::left_step(std::vector<double> grid,
                                               std::vector<double> piece_values,
                                               double value_at_zero) {
  validate_grid01(grid);
  validate_values(piece_values);
  if (piece_values.size() + 1 != grid.size())
    throw std::invalid_argument("need one value per piece");
  PiecewiseFunction f;
  f.grid_ = std::move(grid);
  f.piece_starts_ = piece_values;
  f.node_values_.resize(f.grid_.size());
  f.node_values_[0] = value_at_zero;
  for (std::size_t k = 0; k < piece_values.size(); ++k)
    f.node_values_[k + 1] = piece_values[k];
  f.mode_ = FunctionMode::LeftStep;
  return f;
}

PiecewiseFunction PiecewiseFunction::left_pwa(std::vector<double> grid,
                                              std::vector<double> node_values,
                                              std::vector<double> piece_starts) {
  validate_grid01(grid);
  validate_values(node_values);
  validate_values(piece_starts);
  if (node_values.size() != grid.size())
    throw std::invalid_argument("need one value per grid node");
  if (piece_starts.size() + 1 != grid.size())
    throw std::invalid_argument("need one start value per piece");
  PiecewiseFunction f;
  f.grid_ = std::move(grid);
  f.node_values_ = std::move(node_values);
  f.piece_starts_ = std::move(piece_starts);
  f.mode_ = FunctionMode::LeftPWAJumps;
  return f;
}

double PiecewiseFunction::piece_value(std::size_t k, double t) const {
  double t0 = grid_[k], t1 = grid_[k + 1];
  double y0 = piece_starts_[k], y1 = node_values_[k + 1];
  if (t1 == t0) return y1;
  double lambda = (t - t0) / (t1 - t0);
  return y0 + lambda * (y1 - y0);
}

double PiecewiseFunction::value_at(double t) const {
  if (t < grid_.front() || t > grid_.back())
    throw std::invalid_argument("evaluation outside [0,1]");
  auto it = std::lower_bound(grid_.begin(), grid_.end(), t);
  if (it != grid_.end() && *it == t)
    return node_values_[static_cast<std::size_t>(it - grid_.begin())];
  std::size_t k = static_cast<std::size_t>(it - grid_.begin()) - 1;
  return piece_value(k, t);
}

PiecewiseFunction PiecewiseFunction::refined(
    const std::vector<double>& supergrid) const {
  for (double t : grid_)
    if (!std::binary_search(supergrid.begin(), supergrid.end(), t))
      throw std::invalid_argument("supergrid does not refine function grid");
  std::vector<double> nodes(supergrid.size());
  std::vector<double> starts(supergrid.size() - 1);
  for (std::size_t i = 0; i < supergrid.size(); ++i) {
    double t = supergrid[i];
    if (std::binary_search(grid_.begin(), grid_.end(), t)) {
      auto it = std::lower_bound(grid_.begin(), grid_.end(), t);
      nodes[i] = node_values_[static_cast<std::size_t>(it - grid_.begin())];
    } else {
      auto it = std::upper_bound(grid_.begin(), grid_.end(), t);
      std::size_t k = static_cast<std::size_t>(it - grid_.begin()) - 1;
      nodes[i] = piece_value(k, t);
    }
  }
  for (std::size_t i = 0; i + 1 < supergrid.size(); ++i) {
    double t = supergrid[i];
    auto it = std::lower_bound(grid_.begin(), grid_.end(), t);
    if (it != grid_.end() && *it == t) {
      std::size_t k = static_cast<std::size_t>(it - grid_.begin());
      starts[i] = k < piece_starts_.size() ? piece_starts_[k] : nodes[i];
    } else {
      starts[i] = nodes[i];  // interior split point: continuous there
    }
  }
  PiecewiseFunction f;
  f.grid_ = supergrid;
  f.node_values_ = std::move(nodes);
  f.piece_starts_ = std::move(starts);
  f.mode_ = mode_ == FunctionMode::ContinuousPWA ? FunctionMode::ContinuousPWA
                                                 : FunctionMode::LeftPWAJumps;
  return f;
}

}  // namespace varsel
