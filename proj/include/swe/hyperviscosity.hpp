#pragma once

#include <cstddef>

#include <Eigen/Dense>

#include "swe/operators.hpp"
#include "swe/state.hpp"

namespace swe {

// c(x) = s(x/(wL)) s((L-x)/(wL)) with s(r) = 6r^5 - 15r^4 + 10r^3 clamped to
// [0, 1]; identically 1 on periodic grids.
Field smooth_boxcar(const Grid1D& grid, double ramp_fraction);
double smootherstep(double r);

int default_hv_order(int interior_order);

// Matrix-free P^{-1} A for the order-4 and order-6 hyper-viscosity operators
//   order 4: P^{-1} A = -alpha P^{-1} (D-^T P D-) (c P^{-1}) (D-^T P D-),  alpha = delta dx^3
//   order 6: P^{-1} A = -alpha P^{-1} (D+^T P D+ P^{-1} D+^T) (P c) (D+ P^{-1} D+^T P D+),
//            alpha = delta dx^5
// On periodic grids these reduce to -alpha D+D-D+D- and +alpha D-D+D-D+D-D+, which
// are applied as a single precomputed circulant stencil.
class HyperViscosity {
 public:
  HyperViscosity() = default;
  HyperViscosity(const SbpOperatorPair& pair, int deriv_order, double delta, double ramp_fraction = 0.1);

  int deriv_order() const { return order_; }
  double delta() const { return delta_; }
  double alpha() const { return alpha_; }
  const Field& c_profile() const { return c_; }
  const SbpOperatorPair& pair() const { return pair_; }
  std::size_t size() const { return pair_.size(); }
  bool active() const { return delta_ > 0.0; }

  void apply(const double* f, double* out) const;
  // Applies along the first index of an n x m row-major block.
  void apply_columns(const double* f, double* out, std::size_t m) const;
  // Operator-by-operator evaluation of the product form without the periodic
  // shortcut, kept as a reference for testing.
  void apply_reference(const double* f, double* out) const;
  Eigen::MatrixXd dense() const;

 private:
  SbpOperatorPair pair_;
  int order_ = 4;
  double delta_ = 0.0;
  double alpha_ = 0.0;
  Field c_;
  BandedOperator dp_t_;
  BandedOperator dm_t_;
  BandedOperator combined_;
  bool use_combined_ = false;
};

Field apply_hv(const HyperViscosity& hv, const Field& f);

// Solves W t = (P^{-1} A h, P^{-1} A u) pointwise, with W = [[g, u/2], [u/2, h/2]]
// for nonlinear fluxes and W = [[g, U], [U, H]] for linear fluxes.
State1D dissipation_tendency_1d(const HyperViscosity& hv, const State1D& state, const FluxForm& form);

// Applies (P^{-1}A (x) I + I (x) P^{-1}A) to h, u, v by line sweeps, then solves
// with W = [[g, u/2, v/2], [u/2, h/2, 0], [v/2, 0, h/2]] at every node.
State2D dissipation_tendency_2d(const HyperViscosity& hv_x, const HyperViscosity& hv_y, const State2D& state,
                                double g);

// Sweeps a 1D operator along x (stride n) or y (contiguous) of an n x n field.
enum class Axis { X, Y };
template <typename Apply>
void sweep(std::size_t n, Axis axis, const double* f, double* out, const Apply& apply_line);

}  // namespace swe

#include "swe/sweep_impl.hpp"
