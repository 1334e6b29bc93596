#pragma once

#include <vector>

namespace varsel {

// Scalar functions on [0,1] used as selections and dual iterates.
//
//  ContinuousPWA   affine between consecutive nodes, continuous.
//  LeftStep        constant on each (t_k, t_{k+1}], left-continuous.
//  LeftPWAJumps    affine on each (t_k, t_{k+1}], left-continuous, with a
//                  free right-start value at each node (jumps allowed).
//
// In the left-continuous modes node_values[k] is the value AT t_k (the left
// limit) and piece_starts[k] the limit from the right at t_k.
enum class FunctionMode { ContinuousPWA, LeftStep, LeftPWAJumps };

class PiecewiseFunction {
 public:
  PiecewiseFunction() = default;

  static PiecewiseFunction continuous(std::vector<double> grid,
                                      std::vector<double> node_values);
  static PiecewiseFunction left_step(std::vector<double> grid,
                                     std::vector<double> piece_values,
                                     double value_at_zero);
  static PiecewiseFunction left_pwa(std::vector<double> grid,
                                    std::vector<double> node_values,
                                    std::vector<double> piece_starts);

  FunctionMode mode() const { return mode_; }
  const std::vector<double>& grid() const { return grid_; }
  const std::vector<double>& node_values() const { return node_values_; }
  const std::vector<double>& piece_starts() const { return piece_starts_; }

  double value_at(double t) const;
  // Affine formula of piece k evaluated at t (one-sided limits at the ends).
  double piece_value(std::size_t k, double t) const;

  PiecewiseFunction refined(const std::vector<double>& supergrid) const;

 private:
  std::vector<double> grid_;
  std::vector<double> node_values_;
  std::vector<double> piece_starts_;  // size = pieces; equals node value in
                                      // continuous mode
  FunctionMode mode_ = FunctionMode::ContinuousPWA;
};

}  // namespace varsel
