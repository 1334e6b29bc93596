#pragma once

#include <vector>

namespace varsel {

struct Atom {
  double location = 0.0;
  double weight = 0.0;
};

// Borel subset of [0,1] given as a finite union of intervals and points.
// A point is lo == hi with both flags closed.
struct SetPiece {
  double lo = 0.0;
  double hi = 0.0;
  bool lo_closed = true;
  bool hi_closed = true;
};
using BorelSet = std::vector<SetPiece>;

// Nonnegative measure on [0,1]: piecewise-constant density against Lebesgue
// measure plus finitely many atoms. grid is 0 = g0 < ... < gm = 1 and
// densities[k] applies on (g_k, g_{k+1}).
class Measure {
 public:
  Measure() = default;
  Measure(std::vector<double> grid, std::vector<double> densities,
          std::vector<Atom> atoms);

  static Measure lebesgue();

  const std::vector<double>& grid() const { return grid_; }
  const std::vector<double>& densities() const { return densities_; }
  const std::vector<Atom>& atoms() const { return atoms_; }

  double density_at(double t) const;  // value on the piece containing t
  double atom_weight_at(double t) const;
  double total_mass() const;

  // Same measure represented on a refinement of its grid.
  Measure refined(const std::vector<double>& supergrid) const;

 private:
  std::vector<double> grid_{0.0, 1.0};
  std::vector<double> densities_{0.0};
  std::vector<Atom> atoms_;
};

// Signed counterpart: densities may be negative, atom weights nonzero.
class SignedMeasure {
 public:
  SignedMeasure() = default;
  SignedMeasure(std::vector<double> grid, std::vector<double> densities,
                std::vector<Atom> atoms);

  const std::vector<double>& grid() const { return grid_; }
  const std::vector<double>& densities() const { return densities_; }
  const std::vector<Atom>& atoms() const { return atoms_; }

  double atom_weight_at(double t) const;
  SignedMeasure refined(const std::vector<double>& supergrid) const;

 private:
  std::vector<double> grid_{0.0, 1.0};
  std::vector<double> densities_{0.0};
  std::vector<Atom> atoms_;
};

double measure_of(const Measure& m, const BorelSet& s);
double measure_of(const SignedMeasure& m, const BorelSet& s);

bool is_strictly_positive(const Measure& m);

Measure total_variation(const SignedMeasure& m);

// Lebesgue decomposition of theta against a strictly positive mu.
// theta = ac . mu + singular, with the absolutely continuous part stored as
// piece ratios on the common grid plus ratios at the atoms of mu, and the
// singular part carrying the atoms of theta away from atoms of mu.
struct Decomposition {
  std::vector<double> grid;
  std::vector<double> piece_ratio;   // d(theta)/d(mu) on each piece
  std::vector<Atom> atom_ratio;      // ratio at each atom of mu (0 if none)
  SignedMeasure singular;
};

Decomposition lebesgue_decompose(const SignedMeasure& theta, const Measure& mu);

// mu plus extra atoms (used to join a base measure with |singular part|).
Measure add_atoms(const Measure& mu, const std::vector<Atom>& atoms);

// Sorted union of grids (exact-equality dedup).
std::vector<double> merge_grids(const std::vector<std::vector<double>>& grids);

void validate_borel_set(const BorelSet& s);

}  // namespace varsel
