#include "varsel/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "varsel/tolerance.hpp"

namespace varsel {

namespace {

void validate_grid(const std::vector<double>& grid) {
  if (grid.size() < 2 || grid.front() != 0.0 || grid.back() != 1.0)
    throw std::invalid_argument("grid must run from 0 to 1");
  for (std::size_t i = 0; i + 1 < grid.size(); ++i)
    if (!(grid[i] < grid[i + 1]))
      throw std::invalid_argument("grid not strictly increasing");
}

void validate_atoms(const std::vector<Atom>& atoms, bool signed_weights) {
  for (const Atom& a : atoms) {
    if (!(a.location >= 0.0 && a.location <= 1.0))
      throw std::invalid_argument("atom outside [0,1]");
    if (signed_weights) {
      if (a.weight == 0.0)
        throw std::invalid_argument("atom with zero weight");
    } else if (!(a.weight > 0.0)) {
      throw std::invalid_argument("atom weight must be positive");
    }
  }
  for (std::size_t i = 0; i + 1 < atoms.size(); ++i)
    if (atoms[i].location == atoms[i + 1].location)
      throw std::invalid_argument("duplicate atom location");
}

std::vector<Atom> sorted_atoms(std::vector<Atom> atoms) {
  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& a, const Atom& b) { return a.location < b.location; });
  return atoms;
}

// Index of the piece (g_k, g_{k+1}) containing t; grid points resolve to the
// right piece except at 1.
std::size_t piece_index(const std::vector<double>& grid, double t) {
  auto it = std::upper_bound(grid.begin(), grid.end(), t);
  std::size_t k = static_cast<std::size_t>(it - grid.begin());
  if (k == 0) return 0;
  if (k >= grid.size()) return grid.size() - 2;
  return k - 1;
}

template <typename M>
double atom_weight_impl(const M& m, double t) {
  for (const Atom& a : m.atoms())
    if (a.location == t) return a.weight;
  return 0.0;
}

// Density integral of m over the open interval (lo, hi).
template <typename M>
double density_mass(const M& m, double lo, double hi) {
  if (!(lo < hi)) return 0.0;
  const auto& g = m.grid();
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < g.size(); ++k) {
    double a = std::max(lo, g[k]);
    double b = std::min(hi, g[k + 1]);
    if (a < b) total += m.densities()[k] * (b - a);
  }
  return total;
}

// Merge to disjoint spans so unions given with overlaps are not counted
// twice; endpoint flags are irrelevant for the density part.
std::vector<std::pair<double, double>> merged_spans(const BorelSet& s) {
  std::vector<std::pair<double, double>> spans;
  for (const SetPiece& p : s)
    if (p.lo < p.hi) spans.emplace_back(p.lo, p.hi);
  std::sort(spans.begin(), spans.end());
  std::vector<std::pair<double, double>> out;
  for (const auto& sp : spans) {
    if (!out.empty() && sp.first <= out.back().second)
      out.back().second = std::max(out.back().second, sp.second);
    else
      out.push_back(sp);
  }
  return out;
}

template <typename M>
double measure_of_impl(const M& m, const BorelSet& s) {
  validate_borel_set(s);
  double total = 0.0;
  for (const auto& sp : merged_spans(s)) total += density_mass(m, sp.first, sp.second);
  for (const Atom& a : m.atoms()) {
    for (const SetPiece& p : s) {
      bool inside = (a.location > p.lo && a.location < p.hi) ||
                    (a.location == p.lo && p.lo_closed) ||
                    (a.location == p.hi && p.hi_closed);
      if (inside) {
        total += a.weight;
        break;
      }
    }
  }
  return total;
}

template <typename M>
M refined_impl(const M& m, const std::vector<double>& supergrid) {
  const auto& g = m.grid();
  for (double t : g)
    if (!std::binary_search(supergrid.begin(), supergrid.end(), t))
      throw std::invalid_argument("supergrid does not refine measure grid");
  std::vector<double> densities(supergrid.size() - 1);
  for (std::size_t k = 0; k + 1 < supergrid.size(); ++k) {
    double mid = 0.5 * (supergrid[k] + supergrid[k + 1]);
    densities[k] = m.densities()[piece_index(g, mid)];
  }
  return M(supergrid, densities, m.atoms());
}

}  // namespace

Measure::Measure(std::vector<double> grid, std::vector<double> densities,
                 std::vector<Atom> atoms)
    : grid_(std::move(grid)),
      densities_(std::move(densities)),
      atoms_(sorted_atoms(std::move(atoms))) {
  validate_grid(grid_);
  if (densities_.size() != grid_.size() - 1)
    throw std::invalid_argument("density count must match piece count");
  for (double d : densities_)
    if (std::isnan(d) || d < 0.0)
      throw std::invalid_argument("densities must be nonnegative");
  validate_atoms(atoms_, /*signed_weights=*/false);
}

Measure Measure::lebesgue() { return Measure({0.0, 1.0}, {1.0}, {}); }

double Measure::density_at(double t) const {
  return densities_[piece_index(grid_, t)];
}

double Measure::atom_weight_at(double t) const { return atom_weight_impl(*this, t); }

double Measure::total_mass() const {
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < grid_.size(); ++k)
    total += densities_[k] * (grid_[k + 1] - grid_[k]);
  for (const Atom& a : atoms_) total += a.weight;
  return total;
}

Measure Measure::refined(const std::vector<double>& supergrid) const {
  return refined_impl(*this, supergrid);
}

SignedMeasure::SignedMeasure(std::vector<double> grid,
                             std::vector<double> densities,
                             std::vector<Atom> atoms)
    : grid_(std::move(grid)),
      densities_(std::move(densities)),
      atoms_(sorted_atoms(std::move(atoms))) {
  validate_grid(grid_);
  if (densities_.size() != grid_.size() - 1)
    throw std::invalid_argument("density count must match piece count");
  for (double d : densities_)
    if (std::isnan(d)) throw std::invalid_argument("density is NaN");
  validate_atoms(atoms_, /*signed_weights=*/true);
}

double SignedMeasure::atom_weight_at(double t) const {
  return atom_weight_impl(*this, t);
}

SignedMeasure SignedMeasure::refined(const std::vector<double>& supergrid) const {
  return refined_impl(*this, supergrid);
}

double measure_of(const Measure& m, const BorelSet& s) {
  return measure_of_impl(m, s);
}

double measure_of(const SignedMeasure& m, const BorelSet& s) {
  return measure_of_impl(m, s);
}

bool is_strictly_positive(const Measure& m) {
  for (double d : m.densities())
    if (!(d > 0.0)) return false;
  return true;
}

Measure total_variation(const SignedMeasure& m) {
  std::vector<double> densities = m.densities();
  for (double& d : densities) d = std::fabs(d);
  std::vector<Atom> atoms = m.atoms();
  for (Atom& a : atoms) a.weight = std::fabs(a.weight);
  return Measure(m.grid(), densities, atoms);
}

Decomposition lebesgue_decompose(const SignedMeasure& theta, const Measure& mu) {
  if (!is_strictly_positive(mu))
    throw std::invalid_argument(
        "decomposition requires a strictly positive base measure");
  std::vector<double> grid = merge_grids({theta.grid(), mu.grid()});
  SignedMeasure th = theta.refined(grid);
  Measure base = mu.refined(grid);

  Decomposition out;
  out.grid = grid;
  out.piece_ratio.resize(grid.size() - 1);
  for (std::size_t k = 0; k + 1 < grid.size(); ++k)
    out.piece_ratio[k] = th.densities()[k] / base.densities()[k];

  std::vector<Atom> singular;
  for (const Atom& a : th.atoms())
    if (base.atom_weight_at(a.location) == 0.0) singular.push_back(a);
  for (const Atom& a : base.atoms()) {
    double w = th.atom_weight_at(a.location);
    out.atom_ratio.push_back(Atom{a.location, w / a.weight});
  }
  out.singular = SignedMeasure(grid, std::vector<double>(grid.size() - 1, 0.0),
                               singular);
  return out;
}

Measure add_atoms(const Measure& mu, const std::vector<Atom>& atoms) {
  std::vector<Atom> merged = mu.atoms();
  for (const Atom& a : atoms) {
    bool found = false;
    for (Atom& b : merged) {
      if (b.location == a.location) {
        b.weight += std::fabs(a.weight);
        found = true;
        break;
      }
    }
    if (!found) merged.push_back(Atom{a.location, std::fabs(a.weight)});
  }
  return Measure(mu.grid(), mu.densities(), merged);
}

std::vector<double> merge_grids(const std::vector<std::vector<double>>& grids) {
  std::vector<double> out;
  for (const auto& g : grids) out.insert(out.end(), g.begin(), g.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void validate_borel_set(const BorelSet& s) {
  for (const SetPiece& p : s) {
    if (std::isnan(p.lo) || std::isnan(p.hi))
      throw std::invalid_argument("set piece endpoint is NaN");
    if (p.lo < 0.0 || p.hi > 1.0 || p.lo > p.hi)
      throw std::invalid_argument("set piece must satisfy 0 <= lo <= hi <= 1");
    if (p.lo == p.hi && !(p.lo_closed && p.hi_closed))
      throw std::invalid_argument("degenerate open set piece");
  }
}

}  // namespace varsel
