#include "varsel/integrand.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "varsel/tolerance.hpp"

namespace varsel {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

void check_tgrid(const std::vector<double>& grid) {
  if (grid.size() < 2 || grid.front() != 0.0 || grid.back() != 1.0)
    throw std::invalid_argument("time grid must run from 0 to 1");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1]))
      throw std::invalid_argument("time grid must increase");
}
}  // namespace

NormalIntegrand::NormalIntegrand(std::vector<double> tgrid,
                                 std::vector<PLQFunction> piece_fns,
                                 std::vector<PLQFunction> break_fns)
    : grid_(std::move(tgrid)),
      piece_fns_(std::move(piece_fns)),
      break_fns_(std::move(break_fns)) {
  check_tgrid(grid_);
  if (piece_fns_.size() != grid_.size() - 1)
    throw std::invalid_argument("one integrand per open piece required");
  if (break_fns_.size() != grid_.size())
    throw std::invalid_argument("one integrand per grid point required");
}

NormalIntegrand NormalIntegrand::constant(const PLQFunction& f) {
  return NormalIntegrand({0.0, 1.0}, {f}, {f, f});
}

const PLQFunction& NormalIntegrand::at(double t) const {
  auto it = std::lower_bound(grid_.begin(), grid_.end(), t);
  if (it != grid_.end() && *it == t)
    return break_fns_[static_cast<std::size_t>(it - grid_.begin())];
  if (it == grid_.begin() || it == grid_.end())
    throw std::out_of_range("time outside [0,1]");
  return piece_fns_[static_cast<std::size_t>(it - grid_.begin()) - 1];
}

NormalIntegrand NormalIntegrand::refined(
    const std::vector<double>& supergrid) const {
  for (double t : grid_)
    if (!std::binary_search(supergrid.begin(), supergrid.end(), t))
      throw std::invalid_argument("refinement must keep existing grid points");
  std::vector<PLQFunction> pf, bf;
  std::size_t old = 0;
  for (std::size_t i = 0; i < supergrid.size(); ++i) {
    double t = supergrid[i];
    while (old + 1 < grid_.size() && grid_[old + 1] <= t) ++old;
    if (grid_[old] == t)
      bf.push_back(break_fns_[old]);
    else
      bf.push_back(piece_fns_[old]);
    if (i + 1 < supergrid.size()) pf.push_back(piece_fns_[old]);
  }
  return NormalIntegrand(supergrid, std::move(pf), std::move(bf));
}

PiecewiseSetMap domain_map(const NormalIntegrand& h) {
  std::vector<std::vector<AffineComponent>> pieces;
  std::vector<IntervalUnion> values;
  for (const PLQFunction& f : h.piece_functions()) {
    Interval d = f.domain();
    pieces.push_back({AffineComponent{d.lo, 0.0, d.hi, 0.0}});
  }
  for (const PLQFunction& f : h.break_functions()) {
    Interval d = f.domain();
    values.push_back(IntervalUnion::single(d.lo, d.hi));
  }
  return PiecewiseSetMap(h.grid(), std::move(pieces), std::move(values));
}

double eval_Ih(const NormalIntegrand& h, const PiecewiseFunction& y,
               const Measure& mu) {
  std::vector<double> grid = merge_grids({h.grid(), y.grid(), mu.grid()});
  NormalIntegrand hh = h.refined(grid);
  PiecewiseFunction yy = y.refined(grid);
  Measure mm = mu.refined(grid);

  double total = 0.0;
  for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
    double rho = mm.densities()[k];
    if (rho == 0.0) continue;
    double t0 = grid[k], t1 = grid[k + 1];
    double v = plq_integral_along(hh.piece_functions()[k], t0, t1,
                                  yy.piece_value(k, t0),
                                  yy.piece_value(k, t1));
    if (v == kInf) return kInf;
    total += rho * v;
  }
  for (const Atom& a : mm.atoms()) {
    double v = hh.at(a.location).value(yy.value_at(a.location));
    if (v == kInf) return kInf;
    total += a.weight * v;
  }
  return total;
}

}  // namespace varsel
