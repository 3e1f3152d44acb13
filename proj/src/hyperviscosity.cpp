#include "swe/hyperviscosity.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "swe/error.hpp"

namespace swe {

double smootherstep(double r) {
  r = std::clamp(r, 0.0, 1.0);
  return r * r * r * (10.0 + r * (-15.0 + 6.0 * r));
}

Field smooth_boxcar(const Grid1D& grid, double ramp_fraction) {
  if (!(ramp_fraction > 0.0 && ramp_fraction <= 0.5)) {
    throw Error(ErrorCode::BadRamp, "ramp_fraction must lie in (0, 0.5]");
  }
  if (grid.periodic) return Field(grid.n_points, 1.0);
  const double w = ramp_fraction * grid.length;
  Field c(grid.n_points);
  for (std::size_t j = 0; j < c.size(); ++j) {
    const double x = grid.coords[j];
    c[j] = smootherstep(x / w) * smootherstep((grid.length - x) / w);
  }
  return c;
}

int default_hv_order(int interior_order) { return interior_order <= 4 ? 4 : 6; }

namespace {

Stencil stencil_of(const BandedOperator& op) { return Stencil{op.stencil_lo(), op.stencil()}; }

}  // namespace

HyperViscosity::HyperViscosity(const SbpOperatorPair& pair, int deriv_order, double delta, double ramp_fraction)
    : pair_(pair), order_(deriv_order), delta_(delta) {
  if (deriv_order != 4 && deriv_order != 6) {
    throw Error(ErrorCode::UnsupportedOrder, "hyper-viscosity order must be 4 or 6");
  }
  if (!(delta >= 0.0)) throw Error(ErrorCode::ConfigInvalid, "hyper-viscosity strength must be non-negative");
  const double dx = pair.grid.dx;
  alpha_ = delta * (deriv_order == 4 ? dx * dx * dx : dx * dx * dx * dx * dx);
  c_ = smooth_boxcar(pair.grid, ramp_fraction);
  dp_t_ = pair.d_plus.transposed();
  dm_t_ = pair.d_minus.transposed();
  if (pair.periodic) {
    const Stencil p = stencil_of(pair.d_plus);
    const Stencil m = stencil_of(pair.d_minus);
    Stencil s;
    double sign = 0.0;
    if (order_ == 4) {
      s = convolve(convolve(p, m), convolve(p, m));
      sign = -1.0;
    } else {
      s = convolve(convolve(convolve(m, p), convolve(m, p)), convolve(m, p));
      sign = 1.0;
    }
    if (s.coeffs.size() <= pair.size()) {
      for (double& v : s.coeffs) v *= sign * alpha_;
      combined_ = BandedOperator::circulant(pair.size(), s.lo, s.coeffs);
      use_combined_ = true;
    }
  }
}

void HyperViscosity::apply(const double* f, double* out) const {
  if (use_combined_) {
    combined_.apply(f, out);
    return;
  }
  apply_reference(f, out);
}

void HyperViscosity::apply_columns(const double* f, double* out, std::size_t m) const {
  if (use_combined_) {
    combined_.apply_columns(f, out, m);
    return;
  }
  const std::size_t n = size();
  Field line_in(n);
  Field line_out(n);
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t i = 0; i < n; ++i) line_in[i] = f[i * m + j];
    apply(line_in.data(), line_out.data());
    for (std::size_t i = 0; i < n; ++i) out[i * m + j] = line_out[i];
  }
}

void HyperViscosity::apply_reference(const double* f, double* out) const {
  const std::size_t n = size();
  const Field& p = pair_.p_weights;
  Field a(n);
  Field b(n);
  auto scale = [&](Field& v, auto&& factor) {
    for (std::size_t j = 0; j < n; ++j) v[j] *= factor(j);
  };
  auto times_p = [&](std::size_t j) { return p[j]; };
  auto over_p = [&](std::size_t j) { return 1.0 / p[j]; };
  if (order_ == 4) {
    pair_.d_minus.apply_serial(f, a.data());
    scale(a, times_p);
    dm_t_.apply_serial(a.data(), b.data());
    scale(b, [&](std::size_t j) { return c_[j] / p[j]; });
    pair_.d_minus.apply_serial(b.data(), a.data());
    scale(a, times_p);
    dm_t_.apply_serial(a.data(), b.data());
  } else {
    pair_.d_plus.apply_serial(f, a.data());
    scale(a, times_p);
    dp_t_.apply_serial(a.data(), b.data());
    scale(b, over_p);
    pair_.d_plus.apply_serial(b.data(), a.data());
    scale(a, [&](std::size_t j) { return c_[j] * p[j]; });
    dp_t_.apply_serial(a.data(), b.data());
    scale(b, over_p);
    pair_.d_plus.apply_serial(b.data(), a.data());
    scale(a, times_p);
    dp_t_.apply_serial(a.data(), b.data());
  }
  for (std::size_t j = 0; j < n; ++j) out[j] = -alpha_ * b[j] / p[j];
}

Eigen::MatrixXd HyperViscosity::dense() const {
  const std::size_t n = size();
  Eigen::MatrixXd m(static_cast<long>(n), static_cast<long>(n));
  Field e(n, 0.0);
  Field col(n);
  for (std::size_t k = 0; k < n; ++k) {
    e[k] = 1.0;
    apply(e.data(), col.data());
    e[k] = 0.0;
    for (std::size_t j = 0; j < n; ++j) m(static_cast<long>(j), static_cast<long>(k)) = col[j];
  }
  return m;
}

Field apply_hv(const HyperViscosity& hv, const Field& f) {
  if (f.size() != hv.size()) throw Error(ErrorCode::LengthMismatch, "field length does not match grid");
  Field out(f.size());
  hv.apply(f.data(), out.data());
  return out;
}

State1D dissipation_tendency_1d(const HyperViscosity& hv, const State1D& state, const FluxForm& form) {
  const std::size_t n = state.size();
  if (state.u.size() != n || n != hv.size()) throw Error(ErrorCode::LengthMismatch, "state does not match grid");
  State1D out{Field(n, 0.0), Field(n, 0.0)};
  if (!hv.active()) return out;
  Field rh(n);
  Field ru(n);
  hv.apply(state.h.data(), rh.data());
  hv.apply(state.u.data(), ru.data());
  const double g = form.g;
  for (std::size_t j = 0; j < n; ++j) {
    double w11 = g;
    double w12 = 0.0;
    double w22 = 0.0;
    if (form.kind == FluxKind::Nonlinear) {
      if (!(state.h[j] > 0.0)) throw Error(ErrorCode::NonPositiveDepth, "h <= 0 at node " + std::to_string(j));
      w12 = 0.5 * state.u[j];
      w22 = 0.5 * state.h[j];
    } else {
      w12 = form.U_at(j);
      w22 = form.H_at(j);
      if (!(w22 > 0.0)) throw Error(ErrorCode::NonPositiveDepth, "H <= 0 at node " + std::to_string(j));
    }
    const double det = w11 * w22 - w12 * w12;
    const double scale = w11 * w22 + w12 * w12;
    if (!(std::abs(det) >= 1e-14 * scale)) {
      throw Error(ErrorCode::SingularWeight, "weight matrix singular at node " + std::to_string(j));
    }
    out.h[j] = (w22 * rh[j] - w12 * ru[j]) / det;
    out.u[j] = (w11 * ru[j] - w12 * rh[j]) / det;
  }
  return out;
}

State2D dissipation_tendency_2d(const HyperViscosity& hv_x, const HyperViscosity& hv_y, const State2D& state,
                                double g) {
  const std::size_t n = state.n;
  if (state.h.size() != n * n || state.u.size() != n * n || state.v.size() != n * n || hv_x.size() != n ||
      hv_y.size() != n) {
    throw Error(ErrorCode::ShapeMismatch, "2D state does not match the operators");
  }
  if (!hv_x.pair().periodic || !hv_y.pair().periodic) {
    throw Error(ErrorCode::ShapeMismatch, "2D hyper-viscosity requires periodic operators");
  }
  State2D out = zero_like(state);
  if (!hv_x.active() && !hv_y.active()) return out;
  const std::size_t nn = n * n;
  Field rx(nn);
  Field ry(nn);
  std::array<Field, 3> r;
  const std::array<const Field*, 3> fields = {&state.h, &state.u, &state.v};
  for (int k = 0; k < 3; ++k) {
    hv_x.apply_columns(fields[k]->data(), rx.data(), n);
    sweep(n, Axis::Y, fields[k]->data(), ry.data(), [&](const double* a, double* b) { hv_y.apply(a, b); });
    r[k].resize(nn);
    for (std::size_t q = 0; q < nn; ++q) r[k][q] = rx[q] + ry[q];
  }
  for (std::size_t q = 0; q < nn; ++q) {
    const double h = state.h[q];
    const double u = state.u[q];
    const double v = state.v[q];
    if (!(h > 0.0)) throw Error(ErrorCode::NonPositiveDepth, "h <= 0 at node " + std::to_string(q));
    const double schur = g - (u * u + v * v) / (2.0 * h);
    if (!(schur > 1e-14 * g)) throw Error(ErrorCode::SingularWeight, "weight matrix singular at node " + std::to_string(q));
    const double t1 = (r[0][q] - (u * r[1][q] + v * r[2][q]) / h) / schur;
    out.h[q] = t1;
    out.u[q] = 2.0 / h * (r[1][q] - 0.5 * u * t1);
    out.v[q] = 2.0 / h * (r[2][q] - 0.5 * v * t1);
  }
  return out;
}

}  // namespace swe
