#include <cmath>

#include "swe/analysis.hpp"
#include "swe/error.hpp"

namespace swe {

double Mms1DParams::speed() const { return std::sqrt(g * wave_depth); }

std::pair<double, double> mms_exact_1d(double x, double t, const Mms1DParams& p) {
  const double xi = x - p.x0 - p.speed() * t;
  const double u = std::exp(-xi * xi);
  return {u + p.depth_offset, u};
}

std::pair<double, double> mms_forcing_1d(double x, double t, const FluxForm& form, const Mms1DParams& p) {
  const double c = p.speed();
  const double xi = x - p.x0 - c * t;
  const double phi = std::exp(-xi * xi);
  const double phi_x = -2.0 * xi * phi;
  const double phi_t = -c * phi_x;
  const double h = phi + p.depth_offset;
  const double u = phi;
  if (form.kind == FluxKind::Nonlinear) {
    // d/dx (u h) = phi_x (h + u), d/dx (u^2/2 + g h) = phi_x (u + g).
    return {phi_t + phi_x * (h + u), phi_t + phi_x * (u + form.g)};
  }
  const double U = form.U_at(0);
  const double H = form.H_at(0);
  return {phi_t + (U + H) * phi_x, phi_t + (U + form.g) * phi_x};
}

std::array<double, 3> mms_exact_2d(double x, double y, double t, const Mms2DParams& p) {
  const double cx = std::cos(p.kx * (x - p.x0));
  const double sx = std::sin(p.kx * (x - p.x0));
  const double cy = std::cos(p.ky * (y - p.y0));
  const double sy = std::sin(p.ky * (y - p.y0));
  const double ct = std::cos(p.omega * t);
  const double st = std::sin(p.omega * t);
  return {p.H + p.amplitude * cx * cy * ct, ct * sy * cx, st * cy * sx};
}

std::array<double, 3> mms_forcing_2d(double x, double y, double t, const Mms2DParams& p) {
  const double cx = std::cos(p.kx * (x - p.x0));
  const double sx = std::sin(p.kx * (x - p.x0));
  const double cy = std::cos(p.ky * (y - p.y0));
  const double sy = std::sin(p.ky * (y - p.y0));
  const double ct = std::cos(p.omega * t);
  const double st = std::sin(p.omega * t);
  return mms_forcing_2d(Mms2DPhase{cx, sx, cy, sy, ct, st}, p);
}

std::array<double, 3> mms_forcing_2d(const Mms2DPhase& ph, const Mms2DParams& p) {
  const auto [cx, sx, cy, sy, ct, st] = ph;
  const double a = p.amplitude;

  const double h = p.H + a * cx * cy * ct;
  const double h_t = -a * p.omega * cx * cy * st;
  const double h_x = -a * p.kx * sx * cy * ct;
  const double h_y = -a * p.ky * cx * sy * ct;

  const double u = ct * sy * cx;
  const double u_t = -p.omega * st * sy * cx;
  const double u_x = -p.kx * ct * sy * sx;
  const double u_y = p.ky * ct * cy * cx;

  const double v = st * cy * sx;
  const double v_t = p.omega * ct * cy * sx;
  const double v_x = p.kx * st * cy * cx;
  const double v_y = -p.ky * st * sy * sx;

  const double w = v_x - u_y + p.f_c;
  const double k_x = u * u_x + v * v_x + p.g * h_x;
  const double k_y = u * u_y + v * v_y + p.g * h_y;
  return {h_t + u_x * h + u * h_x + v_y * h + v * h_y, u_t - w * v + k_x, v_t + w * u + k_y};
}

double dam_break_residual(double c, double g, double h_left, double h_right) {
  const double a = std::sqrt(g * h_left) - c;
  const double b = c * c - g * h_right;
  return -8.0 * g * h_right * c * c * a * a + b * b * (c * c + g * h_right);
}

double dam_break_cm(double g, double h_left, double h_right) {
  if (!(h_right > 0.0) || !(h_left > h_right)) {
    throw Error(ErrorCode::NoRoot, "dam break requires 0 < h_r < h_l");
  }
  double lo = std::sqrt(g * h_right);
  double hi = std::sqrt(g * h_left);
  double f_lo = dam_break_residual(lo, g, h_left, h_right);
  const double f_hi = dam_break_residual(hi, g, h_left, h_right);
  if (f_lo * f_hi >= 0.0) throw Error(ErrorCode::NoRoot, "no sign change on (sqrt(g h_r), sqrt(g h_l))");
  for (int it = 0; it < 200 && hi - lo > 1e-13 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = dam_break_residual(mid, g, h_left, h_right);
    if ((f_mid < 0.0) == (f_lo < 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double dam_break_froude(double g, double h_left, double h_right) {
  const double cm = dam_break_cm(g, h_left, h_right);
  const double um = 2.0 * (std::sqrt(g * h_left) - cm);
  return um / cm;
}

std::pair<double, double> dam_break_exact(double x, double t, const DamBreakParams& p) {
  if (t <= 0.0) return {x <= p.x0 ? p.h_left : p.h_right, 0.0};
  const double g = p.g;
  const double cl = std::sqrt(g * p.h_left);
  const double cm = dam_break_cm(g, p.h_left, p.h_right);
  const double xa = p.x0 - t * cl;
  const double xb = p.x0 + t * (2.0 * cl - 3.0 * cm);
  const double xc = p.x0 + t * 2.0 * cm * cm * (cl - cm) / (cm * cm - g * p.h_right);
  if (x <= xa) return {p.h_left, 0.0};
  if (x <= xb) {
    const double s = cl - (x - p.x0) / (2.0 * t);
    return {4.0 / (9.0 * g) * s * s, 2.0 / 3.0 * ((x - p.x0) / t + cl)};
  }
  if (x <= xc) return {cm * cm / g, 2.0 * (cl - cm)};
  return {p.h_right, 0.0};
}

State1D dam_break_initial(const Grid1D& grid, const DamBreakParams& p) {
  State1D s{Field(grid.n_points), Field(grid.n_points, 0.0)};
  for (std::size_t j = 0; j < grid.n_points; ++j) s.h[j] = grid.coords[j] <= p.x0 ? p.h_left : p.h_right;
  return s;
}

double lake_bathymetry(double x) {
  if (x > 8.0 && x < 12.0) return 0.2 - 0.05 * (x - 10.0) * (x - 10.0);
  return 0.0;
}

LakeSetup lake_at_rest_setup(const Grid1D& grid, bool perturbed) {
  const std::size_t n = grid.n_points;
  LakeSetup s{State1D{Field(n), Field(n, 0.0)}, Field(n)};
  const double b_max = 0.2;
  for (std::size_t j = 0; j < n; ++j) {
    const double x = grid.coords[j];
    s.bathymetry[j] = lake_bathymetry(x);
    s.state.h[j] = 0.5 - s.bathymetry[j];
    if (perturbed) s.state.h[j] += 0.1 * b_max * std::exp(-(x - 10.0) * (x - 10.0) / 0.3);
  }
  return s;
}

namespace {

constexpr double kVortexX1 = 2.6 * M_PI / 3.0;
constexpr double kVortexX2 = 3.5 * M_PI / 3.0;

double gaussian(double dx, double dy) { return std::exp(-5.0 * (dx * dx + dy * dy)); }

}  // namespace

double vortex_streamfunction(double x, double y) {
  return gaussian(x - kVortexX1, y - M_PI) + gaussian(x - kVortexX2, y - M_PI);
}

State2D merging_vortex_setup(const Grid1D& grid, const VortexParams& p) {
  const std::size_t n = grid.n_points;
  State2D s{n, Field(n * n), Field(n * n), Field(n * n)};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double x = grid.coords[i];
      const double y = grid.coords[j];
      const double e1 = gaussian(x - kVortexX1, y - M_PI);
      const double e2 = gaussian(x - kVortexX2, y - M_PI);
      const double psi_x = -10.0 * ((x - kVortexX1) * e1 + (x - kVortexX2) * e2);
      const double psi_y = -10.0 * (y - M_PI) * (e1 + e2);
      const std::size_t q = s.index(i, j);
      s.u[q] = -psi_y;
      s.v[q] = psi_x;
      s.h[q] = p.H + p.f_c / p.g * (e1 + e2);
    }
  }
  return s;
}

double sech_antiderivative(double s, double a) { return 2.0 / a * std::atan(std::tanh(0.5 * a * s)); }

double jet_velocity(double y, const JetParams& p) {
  return p.u0 / std::cosh(p.k_v * (y - p.y_plus)) - p.u0 / std::cosh(p.k_v * (y - p.y_minus));
}

double jet_depth(double y, const JetParams& p) {
  auto integral = [&](double y0) {
    return sech_antiderivative(y - y0, p.k_v) - sech_antiderivative(-y0, p.k_v);
  };
  return p.H - p.f_c / p.g * p.u0 * (integral(p.y_plus) - integral(p.y_minus));
}

double jet_perturbation(double x, double y, const JetParams& p) {
  const double l = p.length;
  auto dist = [&](double xi, double yi) { return (x - xi) * (x - xi) / (l * l) + (y - yi) * (y - yi) / (l * l); };
  const double d1 = dist(0.75 * l, 0.95 * l);
  const double d2 = dist(0.25 * l, 0.2375 * l);
  return p.perturbation * p.H * (std::exp(-p.k * d1) + std::exp(-p.k * d2));
}

State2D barotropic_jet_setup(const Grid1D& grid, const JetParams& p) {
  const std::size_t n = grid.n_points;
  State2D s{n, Field(n * n), Field(n * n), Field(n * n, 0.0)};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double x = grid.coords[i];
      const double y = grid.coords[j];
      const std::size_t q = s.index(i, j);
      s.u[q] = jet_velocity(y, p);
      s.h[q] = jet_depth(y, p) + jet_perturbation(x, y, p);
    }
  }
  return s;
}

}  // namespace swe
