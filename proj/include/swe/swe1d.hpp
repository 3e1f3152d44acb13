#pragma once

#include <functional>
#include <optional>
#include <utility>

#include "swe/hyperviscosity.hpp"
#include "swe/operators.hpp"
#include "swe/state.hpp"

namespace swe {

struct Fluxes {
  Field f1;
  Field f2;
};

// Nonlinear: F1 = u h, F2 = u^2/2 + g h. Linear: F1 = U h + H u, F2 = U u + g h.
Fluxes flux(const FluxForm& form, const State1D& state);
std::pair<double, double> flux_at(const FluxForm& form, double h, double u, std::size_t j);

enum class BcKind { MassFlux, VelocityFlux, Transmissive, Periodic };
enum class Side { Left, Right };

std::string to_string(BcKind kind);
BcKind parse_bc_kind(const std::string& name);

// Nonlinear transmissive coefficients (1, alpha2) on the left and (1, beta2) on
// the right. Throws NotSubcritical unless |u| < sqrt(g h).
std::pair<double, double> transmissive_coefficients(double h, double u, double g, Side side);

// Boundary data as reference fluxes (F1*, F2*) at time t. The imposed condition
// is c1 (F1 - F1*) + c2 (F2 - F2*) = 0 on the left and
// c1 (F1 - F1*) - c2 (F2 - F2*) = 0 on the right, i.e. g0 = c1 F1* + c2 F2* and
// gL = c1 F1* - c2 F2*.
using FluxData = std::function<std::pair<double, double>(double t)>;

struct BoundarySide {
  BcKind kind = BcKind::MassFlux;
  double c1 = 1.0;
  double c2 = 0.0;
  // (tau11, tau21) on the left, (tau12, tau22) on the right.
  double tau1 = 0.0;
  double tau2 = 0.0;
  // Nonlinear transmissive: c2 and tau2 follow the boundary state.
  bool state_dependent = false;
  FluxData data;
};

struct BoundarySpec {
  BoundarySide left;
  BoundarySide right;

  bool periodic() const { return left.kind == BcKind::Periodic; }
  static BoundarySpec periodic_bc();
  // Coefficients and Lemma-table penalties for the named kind on both sides.
  // Linear transmissive coefficients use the background depth at each end.
  static BoundarySpec make(BcKind kind, const FluxForm& form, double h_left = 1.0, double h_right = 1.0);
};

// Throws BadPenalty if (c1, c2) vanish or the penalties leave the admissible set
// (the Lemma rows, or tau1 = 0 with tau2 = 1/c2).
void validate_boundary(const BoundarySpec& bc);

struct BoundaryValues {
  double c1 = 0.0;
  double c2 = 0.0;
  double tau1 = 0.0;
  double tau2 = 0.0;
  double residual = 0.0;
};
BoundaryValues boundary_values(const BoundarySide& side, Side which, const FluxForm& form, const State1D& state,
                               double t);

State1D sat_tendency(const State1D& state, const FluxForm& form, const BoundarySpec& bc, double t,
                     const SbpOperatorPair& pair);

// Adds G(x, t) to the tendency.
using Forcing1D = std::function<void(double t, State1D& tendency)>;

struct Rhs1DConfig {
  FluxForm form;
  BoundarySpec bc;
  SbpOperatorPair pair;
  std::optional<HyperViscosity> hv;
  // Bathymetry b(x_j); g b is added to F2 before differencing.
  Field bathymetry;
  bool reversed_split = false;
  Forcing1D forcing;
};

State1D rhs_1d(const State1D& state, const Rhs1DConfig& config, double t);

struct EnergyBt {
  double energy = 0.0;
  double bt = 0.0;
};

// energy = q^T (W' (x) P) q for nonlinear fluxes and q^T (W (x) P) q for linear
// fluxes; bt is the boundary term including penalties, so that
// q^T (W (x) P) (-Dx F + SAT) = bt.
EnergyBt energy_and_bt(const State1D& state, const FluxForm& form, const BoundarySpec& bc,
                       const SbpOperatorPair& pair, double t = 0.0);

// q^T (W (x) P) r with W the nonlinear or linear weight at the state q.
double weighted_inner(const State1D& q, const State1D& r, const FluxForm& form, const SbpOperatorPair& pair);

void check_depth(const Field& h);

}  // namespace swe
