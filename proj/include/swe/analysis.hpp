#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "swe/operators.hpp"
#include "swe/state.hpp"

namespace swe {

// 1D manufactured solution u = exp(-(x - x0 - c t)^2), h = u + depth_offset,
// with c = sqrt(g * wave_depth).
struct Mms1DParams {
  double g = 9.81;
  double length = 10.0;
  double x0 = 5.0;
  double wave_depth = 10.0;
  double depth_offset = 10.0;

  double speed() const;
};

// Returns (h, u).
std::pair<double, double> mms_exact_1d(double x, double t, const Mms1DParams& p);
// Returns (G_h, G_u) = d/dt q + d/dx F(q) for the given flux form.
std::pair<double, double> mms_forcing_1d(double x, double t, const FluxForm& form, const Mms1DParams& p);

// 2D manufactured solution
//   h = H + a cos(kx X) cos(ky Y) cos(w t), u = cos(w t) sin(ky Y) cos(kx X),
//   v = sin(w t) cos(ky Y) sin(kx X), X = x - x0, Y = y - y0.
struct Mms2DParams {
  double g = 9.81;
  double H = 10.0;
  double amplitude = 0.1;
  double x0 = 0.5;
  double y0 = 0.5;
  double kx = 2.0 * M_PI;
  double ky = 2.0 * M_PI;
  double omega = 2.0 * M_PI;
  double f_c = 0.0;
  double length = 1.0;
};

std::array<double, 3> mms_exact_2d(double x, double y, double t, const Mms2DParams& p);
// Residual of the rotating vector-invariant equations evaluated on the exact solution.
std::array<double, 3> mms_forcing_2d(double x, double y, double t, const Mms2DParams& p);

// cos/sin of kx X, ky Y and w t for one node.
struct Mms2DPhase {
  double cx, sx, cy, sy, ct, st;
};
std::array<double, 3> mms_forcing_2d(const Mms2DPhase& ph, const Mms2DParams& p);

struct DamBreakParams {
  double g = 9.81;
  double h_left = 1.0;
  double h_right = 0.5;
  double x0 = 5.0;
  double length = 10.0;
};

double dam_break_residual(double c, double g, double h_left, double h_right);
// Root of the middle-state equation in (sqrt(g h_r), sqrt(g h_l)) by bisection.
double dam_break_cm(double g, double h_left, double h_right);
// Returns (h, u).
std::pair<double, double> dam_break_exact(double x, double t, const DamBreakParams& p);
// Froude number of the middle state.
double dam_break_froude(double g, double h_left, double h_right);
State1D dam_break_initial(const Grid1D& grid, const DamBreakParams& p);

struct LakeSetup {
  State1D state;
  Field bathymetry;
};

double lake_bathymetry(double x);
// Still water level 0.5 over the bump; the perturbed variant adds
// 0.1 max|b| exp(-(x - 10)^2 / 0.3) to h.
LakeSetup lake_at_rest_setup(const Grid1D& grid, bool perturbed);

struct VortexParams {
  double f_c = 8.0;
  double g = 8.0;
  double H = 8.0;
};

// psi = sum of two Gaussians centred at (2.6 pi/3, pi) and (3.5 pi/3, pi).
double vortex_streamfunction(double x, double y);
State2D merging_vortex_setup(const Grid1D& grid, const VortexParams& p);

struct JetParams {
  double u0 = 50.0;
  double y_plus = 3e7;
  double y_minus = 1e7;
  double length = 4e7;
  double H = 1e4;
  double f_c = 2.0 * 7.292e-5;
  double k_v = 1e-7;
  double g = 1.0;
  double k = 1.0;
  double perturbation = 0.02;
};

// (2/a) atan(tanh(a s / 2)), an antiderivative of sech(a s).
double sech_antiderivative(double s, double a);
double jet_velocity(double y, const JetParams& p);
// H - (f/g) int_0^y u ds.
double jet_depth(double y, const JetParams& p);
double jet_perturbation(double x, double y, const JetParams& p);
State2D barotropic_jet_setup(const Grid1D& grid, const JetParams& p);

// sqrt(sum_j p_j e_j^2).
double weighted_l2(const Field& error, const Field& weights);
double weighted_l2(const Field& error, double cell_weight);

struct ConvergenceRow {
  std::size_t m = 0;
  std::vector<double> errors;
  std::vector<double> rates;
};

struct ConvergenceTable {
  std::vector<std::string> names;
  std::vector<ConvergenceRow> rows;

  const ConvergenceRow& last() const { return rows.back(); }
};

// Rates q = log(e_{i-1}/e_i) / log(m_i/m_{i-1}); the first row has none.
ConvergenceTable make_table(std::vector<std::string> names, const std::vector<std::size_t>& m,
                            const std::vector<std::vector<double>>& errors);
// Runs the runner on every level in increasing order. A runner exception is
// reported as RunnerFailure naming the level.
ConvergenceTable convergence_study(const std::function<std::vector<double>(std::size_t)>& runner,
                                   const std::vector<std::size_t>& levels, std::vector<std::string> names);

using LinearMap = std::function<Field(const Field&)>;
inline constexpr std::size_t kMaxDenseDimension = 4000;

// Columns A e_j - A 0, exact for affine maps.
Eigen::MatrixXd assemble_linear_matrix(const LinearMap& map, std::size_t dim);
// Column j = (F(q + eps e_j) - F(q - eps e_j)) / (2 eps).
Eigen::MatrixXd fd_jacobian(const LinearMap& map, const Field& base, double eps = 1e-6);

struct EigenReport {
  std::vector<std::complex<double>> eigenvalues;
  double max_real = 0.0;
  double max_abs_real = 0.0;
  double norm = 0.0;
  std::size_t n = 0;
};

// Dense nonsymmetric eigenvalues (Hessenberg reduction and shifted QR).
// norm is the max absolute row sum of A.
EigenReport eigenvalues(const Eigen::MatrixXd& a);

struct Spectra {
  std::vector<double> energy;
  std::vector<double> enstrophy;
};

// FFT of u and v with 1/n^2 normalisation; E_k = (|u_k|^2 + |v_k|^2)/2 on integer
// wavenumbers, summed over shells n <= |k| < n+1; the enstrophy shell sums |k|^2 E_k.
Spectra energy_enstrophy_spectra(const State2D& state);
// Least-squares slope of log E against log n over shells [n_lo, n_hi].
double spectral_slope(const std::vector<double>& spectrum, std::size_t n_lo, std::size_t n_hi);
// Energy of the 1D discrete Fourier modes with |k| >= fraction * n, with 1/n normalisation.
double spectral_tail_energy(const Field& f, double fraction = 0.25);

}  // namespace swe
