#include "swe/swe1d.hpp"

#include <cmath>

#include "swe/error.hpp"

namespace swe {

void check_depth(const Field& h) {
  for (std::size_t j = 0; j < h.size(); ++j) {
    if (!(h[j] > 0.0)) throw Error(ErrorCode::NonPositiveDepth, "h <= 0 at node " + std::to_string(j));
  }
}

std::pair<double, double> flux_at(const FluxForm& form, double h, double u, std::size_t j) {
  if (form.kind == FluxKind::Nonlinear) return {u * h, 0.5 * u * u + form.g * h};
  const double U = form.U_at(j);
  const double H = form.H_at(j);
  return {U * h + H * u, U * u + form.g * h};
}

Fluxes flux(const FluxForm& form, const State1D& state) {
  const std::size_t n = state.size();
  Fluxes f{Field(n), Field(n)};
  for (std::size_t j = 0; j < n; ++j) {
    const auto [a, b] = flux_at(form, state.h[j], state.u[j], j);
    f.f1[j] = a;
    f.f2[j] = b;
  }
  return f;
}

std::string to_string(BcKind kind) {
  switch (kind) {
    case BcKind::MassFlux: return "mass_flux";
    case BcKind::VelocityFlux: return "velocity_flux";
    case BcKind::Transmissive: return "transmissive";
    case BcKind::Periodic: return "periodic";
  }
  return "?";
}

BcKind parse_bc_kind(const std::string& name) {
  if (name == "mass_flux") return BcKind::MassFlux;
  if (name == "velocity_flux") return BcKind::VelocityFlux;
  if (name == "transmissive") return BcKind::Transmissive;
  if (name == "periodic") return BcKind::Periodic;
  throw Error(ErrorCode::ConfigInvalid, "unknown boundary condition '" + name + "'");
}

std::pair<double, double> transmissive_coefficients(double h, double u, double g, Side side) {
  if (!(h > 0.0)) throw Error(ErrorCode::NonPositiveDepth, "h <= 0 at the boundary");
  const double c = std::sqrt(g * h);
  const double s = side == Side::Left ? -1.0 : 1.0;
  const double den = c + s * u;
  if (!(std::abs(u) < c) || !(den > 0.0)) {
    throw Error(ErrorCode::NotSubcritical, "boundary state is not subcritical");
  }
  return {1.0, std::sqrt(h / g) * (c + s * 0.5 * u) / den};
}

BoundarySpec BoundarySpec::periodic_bc() {
  BoundarySpec bc;
  bc.left.kind = BcKind::Periodic;
  bc.right.kind = BcKind::Periodic;
  return bc;
}

BoundarySpec BoundarySpec::make(BcKind kind, const FluxForm& form, double h_left, double h_right) {
  if (kind == BcKind::Periodic) return periodic_bc();
  BoundarySpec bc;
  auto fill = [&](BoundarySide& s, Side side, double depth) {
    s.kind = kind;
    const double sign = side == Side::Left ? 1.0 : -1.0;
    switch (kind) {
      case BcKind::MassFlux:
        s.c1 = 1.0;
        s.c2 = 0.0;
        s.tau1 = sign;
        s.tau2 = 0.0;
        break;
      case BcKind::VelocityFlux:
        s.c1 = 0.0;
        s.c2 = 1.0;
        s.tau1 = 0.0;
        s.tau2 = 1.0;
        break;
      case BcKind::Transmissive:
        s.c1 = 1.0;
        s.tau1 = 0.0;
        if (form.kind == FluxKind::Linear) {
          s.c2 = std::sqrt(depth / form.g);
          s.tau2 = 1.0 / s.c2;
        } else {
          s.state_dependent = true;
          s.c2 = std::sqrt(depth / form.g);
          s.tau2 = 1.0 / s.c2;
        }
        break;
      case BcKind::Periodic:
        break;
    }
  };
  fill(bc.left, Side::Left, h_left);
  fill(bc.right, Side::Right, h_right);
  return bc;
}

namespace {

bool close(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)); }

void validate_side(const BoundarySide& s, Side which) {
  if (s.kind == BcKind::Periodic) return;
  if (!(s.c1 >= 0.0) || !(s.c2 >= 0.0) || (s.c1 == 0.0 && s.c2 == 0.0)) {
    throw Error(ErrorCode::BadPenalty, "boundary coefficients must be non-negative and not both zero");
  }
  if (s.state_dependent) return;
  const double sign = which == Side::Left ? 1.0 : -1.0;
  bool ok = false;
  if (s.c1 == 0.0) {
    ok = sign * s.tau1 >= 0.0 && close(s.tau2, 1.0 / s.c2);
  } else {
    ok = (close(s.tau1, sign / s.c1) && s.tau2 == 0.0) || (s.c2 > 0.0 && s.tau1 == 0.0 && close(s.tau2, 1.0 / s.c2));
  }
  if (!ok) {
    throw Error(ErrorCode::BadPenalty, std::string(which == Side::Left ? "left" : "right") +
                                           " penalties are outside the stable set for the given coefficients");
  }
}

}  // namespace

void validate_boundary(const BoundarySpec& bc) {
  if ((bc.left.kind == BcKind::Periodic) != (bc.right.kind == BcKind::Periodic)) {
    throw Error(ErrorCode::BadPenalty, "periodic boundaries must be periodic on both sides");
  }
  validate_side(bc.left, Side::Left);
  validate_side(bc.right, Side::Right);
}

BoundaryValues boundary_values(const BoundarySide& side, Side which, const FluxForm& form, const State1D& state,
                               double t) {
  const std::size_t j = which == Side::Left ? 0 : state.size() - 1;
  const double h = state.h[j];
  const double u = state.u[j];
  BoundaryValues v{side.c1, side.c2, side.tau1, side.tau2, 0.0};
  if (side.state_dependent) {
    const auto [c1, c2] = transmissive_coefficients(h, u, form.g, which);
    v.c1 = c1;
    v.c2 = c2;
    v.tau1 = 0.0;
    v.tau2 = 1.0 / c2;
  }
  auto [f1, f2] = flux_at(form, h, u, j);
  if (side.data) {
    const auto [d1, d2] = side.data(t);
    f1 -= d1;
    f2 -= d2;
  }
  v.residual = which == Side::Left ? v.c1 * f1 + v.c2 * f2 : v.c1 * f1 - v.c2 * f2;
  return v;
}

State1D sat_tendency(const State1D& state, const FluxForm& form, const BoundarySpec& bc, double t,
                     const SbpOperatorPair& pair) {
  const std::size_t n = state.size();
  if (state.u.size() != n || n != pair.size()) throw Error(ErrorCode::LengthMismatch, "state does not match grid");
  State1D sat{Field(n, 0.0), Field(n, 0.0)};
  if (bc.periodic()) return sat;
  validate_boundary(bc);
  const BoundaryValues l = boundary_values(bc.left, Side::Left, form, state, t);
  const BoundaryValues r = boundary_values(bc.right, Side::Right, form, state, t);
  const double p0 = pair.p_weights.front();
  const double pn = pair.p_weights.back();
  sat.h[0] -= l.tau1 * l.residual / p0;
  sat.u[0] -= l.tau2 * l.residual / p0;
  sat.h[n - 1] -= r.tau1 * r.residual / pn;
  sat.u[n - 1] -= r.tau2 * r.residual / pn;
  return sat;
}

State1D rhs_1d(const State1D& state, const Rhs1DConfig& config, double t) {
  const SbpOperatorPair& pair = config.pair;
  const std::size_t n = state.size();
  if (state.u.size() != n || n != pair.size()) throw Error(ErrorCode::LengthMismatch, "state does not match grid");
  if (config.bc.periodic() != pair.periodic) {
    throw Error(ErrorCode::ConfigInvalid, "periodic boundary conditions require a periodic operator pair");
  }
  if (config.form.kind == FluxKind::Nonlinear) check_depth(state.h);
  Fluxes f = flux(config.form, state);
  if (!config.bathymetry.empty()) {
    if (config.bathymetry.size() != n) throw Error(ErrorCode::LengthMismatch, "bathymetry does not match grid");
    for (std::size_t j = 0; j < n; ++j) f.f2[j] += config.form.g * config.bathymetry[j];
  }
  State1D out{Field(n), Field(n)};
  const BandedOperator& dc = config.reversed_split ? pair.d_minus : pair.d_plus;
  const BandedOperator& dm = config.reversed_split ? pair.d_plus : pair.d_minus;
  dc.apply(f.f1.data(), out.h.data());
  dm.apply(f.f2.data(), out.u.data());
  for (std::size_t j = 0; j < n; ++j) {
    out.h[j] = -out.h[j];
    out.u[j] = -out.u[j];
  }
  if (!config.bc.periodic()) {
    const State1D sat = sat_tendency(state, config.form, config.bc, t, pair);
    out.h[0] += sat.h[0];
    out.u[0] += sat.u[0];
    out.h[n - 1] += sat.h[n - 1];
    out.u[n - 1] += sat.u[n - 1];
  }
  if (config.hv && config.hv->active()) {
    const State1D k = dissipation_tendency_1d(*config.hv, state, config.form);
    for (std::size_t j = 0; j < n; ++j) {
      out.h[j] += k.h[j];
      out.u[j] += k.u[j];
    }
  }
  if (config.forcing) config.forcing(t, out);
  return out;
}

double weighted_inner(const State1D& q, const State1D& r, const FluxForm& form, const SbpOperatorPair& pair) {
  double s = 0.0;
  for (std::size_t j = 0; j < q.size(); ++j) {
    const auto [f1, f2] = flux_at(form, q.h[j], q.u[j], j);
    s += pair.p_weights[j] * (f2 * r.h[j] + f1 * r.u[j]);
  }
  return s;
}

EnergyBt energy_and_bt(const State1D& state, const FluxForm& form, const BoundarySpec& bc,
                       const SbpOperatorPair& pair, double t) {
  const std::size_t n = state.size();
  if (state.u.size() != n || n != pair.size()) throw Error(ErrorCode::LengthMismatch, "state does not match grid");
  EnergyBt out;
  const double g = form.g;
  for (std::size_t j = 0; j < n; ++j) {
    const double h = state.h[j];
    const double u = state.u[j];
    if (form.kind == FluxKind::Nonlinear) {
      if (!(h > 0.0)) throw Error(ErrorCode::NonPositiveDepth, "h <= 0 at node " + std::to_string(j));
      if (std::abs(u) >= std::sqrt(g * h)) throw Error(ErrorCode::NotSubcritical, "state is not subcritical");
      out.energy += pair.p_weights[j] * (g * h * h + h * u * u);
    } else {
      out.energy += pair.p_weights[j] * (g * h * h + 2.0 * form.U_at(j) * h * u + form.H_at(j) * u * u);
    }
  }
  if (form.kind == FluxKind::Linear && !form.subcritical()) {
    throw Error(ErrorCode::NotSubcritical, "background state is not subcritical");
  }
  if (bc.periodic()) return out;
  const auto [f10, f20] = flux_at(form, state.h.front(), state.u.front(), 0);
  const auto [f1n, f2n] = flux_at(form, state.h.back(), state.u.back(), n - 1);
  const BoundaryValues l = boundary_values(bc.left, Side::Left, form, state, t);
  const BoundaryValues r = boundary_values(bc.right, Side::Right, form, state, t);
  out.bt = f10 * f20 - f1n * f2n - l.tau1 * f20 * l.residual - r.tau1 * f2n * r.residual - l.tau2 * f10 * l.residual -
           r.tau2 * f1n * r.residual;
  return out;
}

}  // namespace swe
