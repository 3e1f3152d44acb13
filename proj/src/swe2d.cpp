#include "swe/swe2d.hpp"

#include <string>

#include "swe/error.hpp"

namespace swe {

namespace {

void check_shape(const State2D& state, const Operators2D& ops) {
  const std::size_t n = state.n;
  if (n == 0 || ops.x.size() != n || ops.y.size() != n || state.h.size() != n * n || state.u.size() != n * n ||
      state.v.size() != n * n) {
    throw Error(ErrorCode::ShapeMismatch, "2D state does not match the operators");
  }
  if (!ops.x.periodic || !ops.y.periodic) {
    throw Error(ErrorCode::ShapeMismatch, "2D operators must be periodic");
  }
}

void check_positive(const Field& h) {
  for (std::size_t q = 0; q < h.size(); ++q) {
    if (!(h[q] > 0.0)) throw Error(ErrorCode::NonPositiveDepth, "h <= 0 at node " + std::to_string(q));
  }
}

}  // namespace

Operators2D Operators2D::periodic(Family family, int order, std::size_t n, double length) {
  const Grid1D grid = Grid1D::periodic_grid(n, length);
  SbpOperatorPair pair = build_operator_pair(family, order, true, grid);
  return Operators2D{pair, pair};
}

Field apply_x(const BandedOperator& op, std::size_t n, const Field& f) {
  if (op.size() != n || f.size() != n * n) throw Error(ErrorCode::ShapeMismatch, "field is not n x n");
  Field out(f.size());
  op.apply_columns(f.data(), out.data(), n);
  return out;
}

Field apply_y(const BandedOperator& op, std::size_t n, const Field& f) {
  if (op.size() != n || f.size() != n * n) throw Error(ErrorCode::ShapeMismatch, "field is not n x n");
  Field out(f.size());
  sweep(n, Axis::Y, f.data(), out.data(), [&](const double* a, double* b) { op.apply_serial(a, b); });
  return out;
}

Field vorticity(const State2D& state, double f_c, const Operators2D& ops) {
  check_shape(state, ops);
  const std::size_t n = state.n;
  Field w = apply_x(ops.x.d_minus, n, state.v);
  const Field uy = apply_y(ops.y.d_minus, n, state.u);
  for (std::size_t q = 0; q < w.size(); ++q) w[q] = w[q] - uy[q] + f_c;
  return w;
}

State2D rhs_2d(const State2D& state, const Rhs2DConfig& config, double t) {
  const Operators2D& ops = config.ops;
  check_shape(state, ops);
  check_positive(state.h);
  const std::size_t n = state.n;
  const std::size_t nn = n * n;
  const double g = config.g;

  Field uh(nn);
  Field vh(nn);
  Field k(nn);
  for (std::size_t q = 0; q < nn; ++q) {
    uh[q] = state.u[q] * state.h[q];
    vh[q] = state.v[q] * state.h[q];
    k[q] = 0.5 * (state.u[q] * state.u[q] + state.v[q] * state.v[q]) + g * state.h[q];
  }
  const Field w = vorticity(state, config.f_c, ops);
  const Field duh = apply_x(ops.x.d_plus, n, uh);
  const Field dvh = apply_y(ops.y.d_plus, n, vh);
  const Field kx = apply_x(ops.x.d_minus, n, k);
  const Field ky = apply_y(ops.y.d_minus, n, k);

  State2D out = zero_like(state);
  for (std::size_t q = 0; q < nn; ++q) {
    out.h[q] = -duh[q] - dvh[q];
    out.u[q] = w[q] * state.v[q] - kx[q];
    out.v[q] = -w[q] * state.u[q] - ky[q];
  }
  const bool hv_on = (config.hv_x && config.hv_x->active()) || (config.hv_y && config.hv_y->active());
  if (hv_on) {
    if (!config.hv_x || !config.hv_y) {
      throw Error(ErrorCode::ShapeMismatch, "2D hyper-viscosity needs an operator on both axes");
    }
    const State2D d = dissipation_tendency_2d(*config.hv_x, *config.hv_y, state, g);
    for (std::size_t q = 0; q < nn; ++q) {
      out.h[q] += d.h[q];
      out.u[q] += d.u[q];
      out.v[q] += d.v[q];
    }
  }
  if (config.forcing) config.forcing(t, out);
  return out;
}

DiagnosticsRecord invariants(const State2D& state, double f_c, const Operators2D& ops, double g, double t) {
  check_shape(state, ops);
  check_positive(state.h);
  const Field w = vorticity(state, f_c, ops);
  const double area = ops.dx() * ops.dy();
  DiagnosticsRecord r;
  r.t = t;
  for (std::size_t q = 0; q < w.size(); ++q) {
    const double h = state.h[q];
    const double u = state.u[q];
    const double v = state.v[q];
    r.energy += 0.5 * (g * h * h + h * u * u + h * v * v) * area;
    r.enstrophy += w[q] * w[q] / h * area;
    r.vorticity += w[q] * area;
    r.mass += h * area;
  }
  return r;
}

DiagnosticsRecord relative_to(const DiagnosticsRecord& current, const DiagnosticsRecord& initial) {
  DiagnosticsRecord r = current;
  r.rel_energy = (current.energy - initial.energy) / initial.energy;
  r.rel_enstrophy = (current.enstrophy - initial.enstrophy) / initial.enstrophy;
  r.rel_vorticity = (current.vorticity - initial.vorticity) / initial.vorticity;
  r.rel_mass = (current.mass - initial.mass) / initial.mass;
  return r;
}

double energy_rate_2d(const State2D& state, const State2D& tendency, const Operators2D& ops, double g) {
  check_shape(state, ops);
  const double area = ops.dx() * ops.dy();
  double s = 0.0;
  for (std::size_t q = 0; q < state.h.size(); ++q) {
    const double h = state.h[q];
    const double u = state.u[q];
    const double v = state.v[q];
    s += (g * h + 0.5 * (u * u + v * v)) * tendency.h[q] + h * u * tendency.u[q] + h * v * tendency.v[q];
  }
  return s * area;
}

}  // namespace swe
