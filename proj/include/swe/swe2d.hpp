#pragma once

#include <functional>
#include <optional>

#include "swe/hyperviscosity.hpp"
#include "swe/operators.hpp"
#include "swe/state.hpp"

namespace swe {

// One periodic pair per axis on an n x n grid with dx = dy.
struct Operators2D {
  SbpOperatorPair x;
  SbpOperatorPair y;

  static Operators2D periodic(Family family, int order, std::size_t n, double length);
  std::size_t n() const { return x.size(); }
  double dx() const { return x.grid.dx; }
  double dy() const { return y.grid.dx; }
};

// D (x) I applied along x and I (x) D applied along y.
Field apply_x(const BandedOperator& op, std::size_t n, const Field& f);
Field apply_y(const BandedOperator& op, std::size_t n, const Field& f);

// Absolute vorticity D-x v - D-y u + f_c.
Field vorticity(const State2D& state, double f_c, const Operators2D& ops);

using Forcing2D = std::function<void(double t, State2D& tendency)>;

struct Rhs2DConfig {
  double g = 9.81;
  double f_c = 0.0;
  Operators2D ops;
  std::optional<HyperViscosity> hv_x;
  std::optional<HyperViscosity> hv_y;
  Forcing2D forcing;
};

//   dh/dt = -D+x(u h) - D+y(v h)
//   du/dt =  w v - D-x K
//   dv/dt = -w u - D-y K,   K = (u^2 + v^2)/2 + g h
State2D rhs_2d(const State2D& state, const Rhs2DConfig& config, double t);

struct DiagnosticsRecord {
  double t = 0.0;
  double energy = 0.0;
  double enstrophy = 0.0;
  double vorticity = 0.0;
  double mass = 0.0;
  double rel_energy = 0.0;
  double rel_enstrophy = 0.0;
  double rel_vorticity = 0.0;
  double rel_mass = 0.0;
};

// Sums in fixed serial order; relative changes are left at zero.
DiagnosticsRecord invariants(const State2D& state, double f_c, const Operators2D& ops, double g, double t = 0.0);
// Fills the relative changes (X(t) - X(0)) / X(0) of current against initial.
DiagnosticsRecord relative_to(const DiagnosticsRecord& current, const DiagnosticsRecord& initial);

// sum over nodes of dx dy (F2 r_h + F1 r_u + F1' r_v) with (F2, F1, F1') = W q
// = (g h + |u|^2/2, h u, h v), the energy rate of a tendency r.
double energy_rate_2d(const State2D& state, const State2D& tendency, const Operators2D& ops, double g);

}  // namespace swe
