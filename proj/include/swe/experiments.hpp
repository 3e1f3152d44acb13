#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "swe/analysis.hpp"
#include "swe/hyperviscosity.hpp"
#include "swe/swe1d.hpp"
#include "swe/swe2d.hpp"
#include "swe/timestep.hpp"

namespace swe {

struct OperatorChoice {
  Family family = Family::DP;
  int order = 4;
};

struct HvChoice {
  double delta = 0.0;
  // Derivative order of the operator; 0 selects default_hv_order.
  int order = 0;
  double ramp = 0.1;
};

std::optional<HyperViscosity> make_hv(const SbpOperatorPair& pair, const HvChoice& hv, int interior_order);

// Result of a 1D run: final state on its grid plus the weights of the norm.
struct Run1D {
  Grid1D grid;
  State1D state;
  Field weights;
  double t = 0.0;
  long steps = 0;
  double dt = 0.0;
};

struct Mms1DConfig {
  OperatorChoice op;
  std::size_t n_cells = 40;
  FluxKind kind = FluxKind::Nonlinear;
  HvChoice hv;
  double cfl = 0.3;
  double t_end = 0.5;
  Mms1DParams params;
  // Background of the linear flux.
  double U = -0.3 * std::sqrt(9.81 * 10.0);
  double H = 10.0;
  SampleCallback<State1D> on_sample;
  long sample_stride = 0;
};

struct Mms1DResult {
  Run1D run;
  double err_u = 0.0;
  double err_h = 0.0;
};

Rhs1DConfig mms_1d_rhs(const Mms1DConfig& cfg, const SbpOperatorPair& pair);
Mms1DResult run_mms_1d(const Mms1DConfig& cfg);
// Levels are numbers of grid points (cells + 1); rates use cells.
ConvergenceTable mms_1d_convergence(const Mms1DConfig& base, const std::vector<std::size_t>& points);

struct LakeConfig {
  OperatorChoice op{Family::DP, 6};
  std::size_t n_cells = 200;
  bool perturbed = false;
  HvChoice hv;
  double cfl = 0.3;
  double t_end = 5.0;
  // When set, overrides t_end.
  std::optional<long> n_steps;
  SampleCallback<State1D> on_sample;
  long sample_stride = 0;
};

struct LakeResult {
  Run1D run;
  Field bathymetry;
  // Errors against the rest state h + b = 0.5, u = 0.
  double err_u = 0.0;
  double err_h = 0.0;
  double max_u = 0.0;
};

LakeResult run_lake(const LakeConfig& cfg);
// Time of n_ref steps of the stable step on the given grid.
double lake_end_time(const LakeConfig& cfg, long n_ref = 800);
// Levels are numbers of grid points (cells + 1); errors against the rest state
// at base.t_end, rates on cells.
ConvergenceTable lake_convergence(const LakeConfig& base, const std::vector<std::size_t>& points);

struct DamBreakConfig {
  OperatorChoice op{Family::DP, 6};
  std::size_t n_cells = 1000;
  HvChoice hv{0.1, 0, 0.1};
  double cfl = 0.3;
  double t_end = 2.0;
  std::optional<long> n_steps;
  DamBreakParams params;
  SampleCallback<State1D> on_sample;
  long sample_stride = 0;
};

struct DamBreakResult {
  Run1D run;
  double err_h = 0.0;
  double err_u = 0.0;
  // High-frequency energy (|k| >= n/4) of h minus the exact solution.
  double tail = 0.0;
};

DamBreakResult run_dam_break(const DamBreakConfig& cfg);

struct EigenConfig {
  OperatorChoice op{Family::DP, 6};
  std::size_t n_cells = 500;
  BcKind bc = BcKind::MassFlux;
  HvChoice hv;
  // Linearised nonlinear operator about the sinusoidal background when true.
  bool nonlinear = false;
  double g = 1.0;
  double H = 1.0;
  double U = 0.0;
  double length = 1.0;
  double theta = 0.1;
  double eps = 1e-6;
};

// The matrix whose spectrum is reported (assembled or FD Jacobian).
Eigen::MatrixXd evolution_matrix(const EigenConfig& cfg);
EigenReport run_eigenspectrum(const EigenConfig& cfg);

struct Run2D {
  std::size_t n = 0;
  double dx = 0.0;
  State2D state;
  double t = 0.0;
  long steps = 0;
  double dt = 0.0;
  std::vector<DiagnosticsRecord> series;
};

struct Mms2DConfig {
  OperatorChoice op{Family::DP, 4};
  // Distinct points per direction.
  std::size_t n = 30;
  HvChoice hv{0.1, 0, 0.1};
  double cfl = 0.1;
  double t_end = 0.5;
  Mms2DParams params;
};

struct Mms2DResult {
  Run2D run;
  double err_h = 0.0;
  double err_u = 0.0;
  double err_v = 0.0;
};

Mms2DResult run_mms_2d(const Mms2DConfig& cfg);
// Levels are the m of the tables; the grid has m - 1 distinct points.
ConvergenceTable mms_2d_convergence(const Mms2DConfig& base, const std::vector<std::size_t>& levels);

struct Config2D {
  OperatorChoice op{Family::DP, 4};
  std::size_t n = 128;
  HvChoice hv;
  double cfl = 0.1;
  double t_end = 1.0;
  std::optional<long> n_steps;
  long sample_stride = 0;
  SampleCallback<State2D> on_sample;
};

Run2D run_merging_vortex(const Config2D& cfg, const VortexParams& p = {});
// Levels are the m of the tables; errors are |relative change| of energy and mass at t_end.
ConvergenceTable vortex_conservation_convergence(const Config2D& base, const std::vector<std::size_t>& levels,
                                                 const VortexParams& p = {});

Run2D run_barotropic_jet(const Config2D& cfg, const JetParams& p = {});

}  // namespace swe
