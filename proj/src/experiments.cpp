#include "swe/experiments.hpp"

#include <algorithm>
#include <cmath>

#include "swe/error.hpp"

namespace swe {

std::optional<HyperViscosity> make_hv(const SbpOperatorPair& pair, const HvChoice& hv, int interior_order) {
  if (!(hv.delta > 0.0)) return std::nullopt;
  const int order = hv.order > 0 ? hv.order : default_hv_order(interior_order);
  return HyperViscosity(pair, order, hv.delta, hv.ramp);
}

namespace {

Run1D integrate_1d(const Rhs1DConfig& rhs_cfg, const State1D& q0, double cfl, double t_end, std::optional<long> n_steps,
                   const SampleCallback<State1D>& on_sample, long stride) {
  const SbpOperatorPair& pair = rhs_cfg.pair;
  TimeControl tc;
  tc.cfl = cfl;
  tc.dt = compute_dt(q0, pair.grid, rhs_cfg.form.g, cfl);
  tc.t_end = t_end;
  tc.n_steps = n_steps;
  tc.callback_stride = stride;
  const Tendency<State1D> rhs = [&](const State1D& q, double t) { return rhs_1d(q, rhs_cfg, t); };
  const IntegrationResult<State1D> res = integrate(rhs, q0, tc, on_sample);
  return Run1D{pair.grid, res.state, pair.p_weights, res.t, res.steps, tc.dt};
}

double max_abs(const Field& f) {
  double m = 0.0;
  for (double v : f) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

Rhs1DConfig mms_1d_rhs(const Mms1DConfig& cfg, const SbpOperatorPair& pair) {
  const FluxForm form =
      cfg.kind == FluxKind::Nonlinear ? FluxForm::nonlinear(cfg.params.g) : FluxForm::linear(cfg.params.g, cfg.U, cfg.H);
  BoundarySpec bc = BoundarySpec::make(BcKind::MassFlux, form);
  const Mms1DParams p = cfg.params;
  auto data_at = [form, p](double x) {
    return [form, p, x](double t) {
      const auto [h, u] = mms_exact_1d(x, t, p);
      return flux_at(form, h, u, 0);
    };
  };
  bc.left.data = data_at(0.0);
  bc.right.data = data_at(p.length);
  const Field coords = pair.grid.coords;
  Forcing1D forcing = [form, p, coords](double t, State1D& r) {
    for (std::size_t j = 0; j < coords.size(); ++j) {
      const auto [gh, gu] = mms_forcing_1d(coords[j], t, form, p);
      r.h[j] += gh;
      r.u[j] += gu;
    }
  };
  return Rhs1DConfig{form, bc, pair, make_hv(pair, cfg.hv, cfg.op.order), {}, false, forcing};
}

Mms1DResult run_mms_1d(const Mms1DConfig& cfg) {
  const Grid1D grid = Grid1D::bounded(cfg.n_cells, cfg.params.length);
  const SbpOperatorPair pair = build_operator_pair(cfg.op.family, cfg.op.order, false, grid);
  const Rhs1DConfig rhs_cfg = mms_1d_rhs(cfg, pair);
  State1D q0{Field(grid.n_points), Field(grid.n_points)};
  for (std::size_t j = 0; j < grid.n_points; ++j) {
    std::tie(q0.h[j], q0.u[j]) = mms_exact_1d(grid.coords[j], 0.0, cfg.params);
  }
  Mms1DResult r;
  r.run = integrate_1d(rhs_cfg, q0, cfg.cfl, cfg.t_end, std::nullopt, cfg.on_sample, cfg.sample_stride);
  Field eh(grid.n_points), eu(grid.n_points);
  for (std::size_t j = 0; j < grid.n_points; ++j) {
    const auto [h, u] = mms_exact_1d(grid.coords[j], r.run.t, cfg.params);
    eh[j] = r.run.state.h[j] - h;
    eu[j] = r.run.state.u[j] - u;
  }
  r.err_h = weighted_l2(eh, pair.p_weights);
  r.err_u = weighted_l2(eu, pair.p_weights);
  return r;
}

ConvergenceTable mms_1d_convergence(const Mms1DConfig& base, const std::vector<std::size_t>& points) {
  std::vector<std::size_t> cells;
  for (std::size_t n : points) cells.push_back(n - 1);
  return convergence_study(
      [&](std::size_t m) {
        Mms1DConfig c = base;
        c.n_cells = m;
        c.on_sample = {};
        const Mms1DResult r = run_mms_1d(c);
        return std::vector<double>{r.err_u, r.err_h};
      },
      cells, {"u", "h"});
}

LakeResult run_lake(const LakeConfig& cfg) {
  const double length = 25.0;
  const bool periodic = !cfg.perturbed;
  const Grid1D grid = periodic ? Grid1D::periodic_grid(cfg.n_cells, length) : Grid1D::bounded(cfg.n_cells, length);
  const SbpOperatorPair pair = build_operator_pair(cfg.op.family, cfg.op.order, periodic, grid);
  const LakeSetup setup = lake_at_rest_setup(grid, cfg.perturbed);
  const FluxForm form = FluxForm::nonlinear(9.81);
  BoundarySpec bc = BoundarySpec::periodic_bc();
  if (!periodic) {
    bc = BoundarySpec::make(BcKind::Transmissive, form, 0.5, 0.5);
    const double g = form.g;
    bc.left.data = [g](double) { return std::pair<double, double>{0.0, g * 0.5}; };
    bc.right.data = bc.left.data;
  }
  const Rhs1DConfig rhs_cfg{form, bc, pair, make_hv(pair, cfg.hv, cfg.op.order), setup.bathymetry, false, {}};
  LakeResult r;
  r.bathymetry = setup.bathymetry;
  r.run = integrate_1d(rhs_cfg, setup.state, cfg.cfl, cfg.t_end, cfg.n_steps, cfg.on_sample, cfg.sample_stride);
  Field eh(grid.n_points);
  for (std::size_t j = 0; j < grid.n_points; ++j) eh[j] = r.run.state.h[j] + setup.bathymetry[j] - 0.5;
  r.err_h = weighted_l2(eh, pair.p_weights);
  r.err_u = weighted_l2(r.run.state.u, pair.p_weights);
  r.max_u = max_abs(r.run.state.u);
  return r;
}

double lake_end_time(const LakeConfig& cfg, long n_ref) {
  const double length = 25.0;
  const bool periodic = !cfg.perturbed;
  const Grid1D grid = periodic ? Grid1D::periodic_grid(cfg.n_cells, length) : Grid1D::bounded(cfg.n_cells, length);
  const LakeSetup setup = lake_at_rest_setup(grid, cfg.perturbed);
  return static_cast<double>(n_ref) * compute_dt(setup.state, grid, 9.81, cfg.cfl);
}

ConvergenceTable lake_convergence(const LakeConfig& base, const std::vector<std::size_t>& points) {
  std::vector<std::size_t> cells;
  for (std::size_t m : points) cells.push_back(m - 1);
  return convergence_study(
      [&](std::size_t n) {
        LakeConfig c = base;
        c.n_cells = n;
        c.n_steps.reset();
        c.on_sample = {};
        const LakeResult r = run_lake(c);
        return std::vector<double>{r.err_u, r.err_h};
      },
      cells, {"u", "h"});
}

DamBreakResult run_dam_break(const DamBreakConfig& cfg) {
  const DamBreakParams& p = cfg.params;
  const Grid1D grid = Grid1D::bounded(cfg.n_cells, p.length);
  const SbpOperatorPair pair = build_operator_pair(cfg.op.family, cfg.op.order, false, grid);
  const FluxForm form = FluxForm::nonlinear(p.g);
  BoundarySpec bc = BoundarySpec::make(BcKind::Transmissive, form, p.h_left, p.h_right);
  const double g = p.g;
  const double hl = p.h_left;
  const double hr = p.h_right;
  bc.left.data = [g, hl](double) { return std::pair<double, double>{0.0, g * hl}; };
  bc.right.data = [g, hr](double) { return std::pair<double, double>{0.0, g * hr}; };
  const Rhs1DConfig rhs_cfg{form, bc, pair, make_hv(pair, cfg.hv, cfg.op.order), {}, false, {}};
  DamBreakResult r;
  r.run = integrate_1d(rhs_cfg, dam_break_initial(grid, p), cfg.cfl, cfg.t_end, cfg.n_steps, cfg.on_sample,
                       cfg.sample_stride);
  Field eh(grid.n_points), eu(grid.n_points);
  for (std::size_t j = 0; j < grid.n_points; ++j) {
    const auto [h, u] = dam_break_exact(grid.coords[j], r.run.t, p);
    eh[j] = r.run.state.h[j] - h;
    eu[j] = r.run.state.u[j] - u;
  }
  r.err_h = weighted_l2(eh, pair.p_weights);
  r.err_u = weighted_l2(eu, pair.p_weights);
  r.tail = spectral_tail_energy(eh);
  return r;
}

Eigen::MatrixXd evolution_matrix(const EigenConfig& cfg) {
  const Grid1D grid = Grid1D::bounded(cfg.n_cells, cfg.length);
  const SbpOperatorPair pair = build_operator_pair(cfg.op.family, cfg.op.order, false, grid);
  const std::size_t n = grid.n_points;
  const FluxForm form = cfg.nonlinear ? FluxForm::nonlinear(cfg.g) : FluxForm::linear(cfg.g, cfg.U, cfg.H);
  const BoundarySpec bc = BoundarySpec::make(cfg.bc, form, cfg.H, cfg.H);
  const Rhs1DConfig rhs_cfg{form, bc, pair, make_hv(pair, cfg.hv, cfg.op.order), {}, false, {}};
  const LinearMap map = [&](const Field& q) {
    const auto mid = q.begin() + static_cast<long>(n);
    const State1D s{Field(q.begin(), mid), Field(mid, q.end())};
    const State1D r = rhs_1d(s, rhs_cfg, 0.0);
    Field out(r.h);
    out.insert(out.end(), r.u.begin(), r.u.end());
    return out;
  };
  if (!cfg.nonlinear) return assemble_linear_matrix(map, 2 * n);
  Field base(2 * n);
  for (std::size_t j = 0; j < n; ++j) {
    const double x = grid.coords[j];
    base[j] = cfg.theta * std::sin(2.0 * M_PI * (x + 0.7)) + 2.0;
    base[n + j] = cfg.theta * std::cos(2.0 * M_PI * (x - 0.7));
  }
  return fd_jacobian(map, base, cfg.eps);
}

EigenReport run_eigenspectrum(const EigenConfig& cfg) { return eigenvalues(evolution_matrix(cfg)); }

namespace {

Run2D integrate_2d(const Rhs2DConfig& rhs_cfg, const State2D& q0, double cfl, double t_end, std::optional<long> n_steps,
                   long stride, const SampleCallback<State2D>& on_sample) {
  const Operators2D& ops = rhs_cfg.ops;
  Run2D run;
  run.n = q0.n;
  run.dx = ops.dx();
  TimeControl tc;
  tc.cfl = cfl;
  tc.dt = compute_dt(q0, ops.dx(), rhs_cfg.g, cfl);
  tc.t_end = t_end;
  tc.n_steps = n_steps;
  tc.callback_stride = stride;
  run.dt = tc.dt;
  DiagnosticsRecord first;
  const SampleCallback<State2D> sampler = [&](long step, double t, const State2D& q) {
    const DiagnosticsRecord rec = invariants(q, rhs_cfg.f_c, ops, rhs_cfg.g, t);
    if (step == 0) first = rec;
    run.series.push_back(relative_to(rec, first));
    if (on_sample) on_sample(step, t, q);
  };
  const Tendency<State2D> rhs = [&](const State2D& q, double t) { return rhs_2d(q, rhs_cfg, t); };
  const IntegrationResult<State2D> res = integrate(rhs, q0, tc, sampler);
  run.state = res.state;
  run.t = res.t;
  run.steps = res.steps;
  return run;
}

Rhs2DConfig make_rhs_2d(const OperatorChoice& op, std::size_t n, double length, double g, double f_c,
                        const HvChoice& hv) {
  Rhs2DConfig cfg;
  cfg.g = g;
  cfg.f_c = f_c;
  cfg.ops = Operators2D::periodic(op.family, op.order, n, length);
  cfg.hv_x = make_hv(cfg.ops.x, hv, op.order);
  cfg.hv_y = make_hv(cfg.ops.y, hv, op.order);
  return cfg;
}

}  // namespace

Mms2DResult run_mms_2d(const Mms2DConfig& cfg) {
  const Mms2DParams p = cfg.params;
  Rhs2DConfig rhs_cfg = make_rhs_2d(cfg.op, cfg.n, p.length, p.g, p.f_c, cfg.hv);
  const Field coords = rhs_cfg.ops.x.grid.coords;
  const std::size_t n = cfg.n;
  Field cos_x(n), sin_x(n), cos_y(n), sin_y(n);
  for (std::size_t i = 0; i < n; ++i) {
    cos_x[i] = std::cos(p.kx * (coords[i] - p.x0));
    sin_x[i] = std::sin(p.kx * (coords[i] - p.x0));
    cos_y[i] = std::cos(p.ky * (coords[i] - p.y0));
    sin_y[i] = std::sin(p.ky * (coords[i] - p.y0));
  }
  rhs_cfg.forcing = [p, n, cos_x, sin_x, cos_y, sin_y](double t, State2D& r) {
    const double ct = std::cos(p.omega * t);
    const double st = std::sin(p.omega * t);
    const long nl = static_cast<long>(n);
#pragma omp parallel for schedule(static)
    for (long il = 0; il < nl; ++il) {
      const auto i = static_cast<std::size_t>(il);
      for (std::size_t j = 0; j < n; ++j) {
        const auto f = mms_forcing_2d(Mms2DPhase{cos_x[i], sin_x[i], cos_y[j], sin_y[j], ct, st}, p);
        const std::size_t q = i * n + j;
        r.h[q] += f[0];
        r.u[q] += f[1];
        r.v[q] += f[2];
      }
    }
  };
  State2D q0{n, Field(n * n), Field(n * n), Field(n * n)};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const auto s = mms_exact_2d(coords[i], coords[j], 0.0, p);
      q0.h[i * n + j] = s[0];
      q0.u[i * n + j] = s[1];
      q0.v[i * n + j] = s[2];
    }
  }
  Mms2DResult r;
  r.run = integrate_2d(rhs_cfg, q0, cfg.cfl, cfg.t_end, std::nullopt, 0, {});
  Field eh(n * n), eu(n * n), ev(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const auto s = mms_exact_2d(coords[i], coords[j], r.run.t, p);
      const std::size_t q = i * n + j;
      eh[q] = r.run.state.h[q] - s[0];
      eu[q] = r.run.state.u[q] - s[1];
      ev[q] = r.run.state.v[q] - s[2];
    }
  }
  const double area = r.run.dx * r.run.dx;
  r.err_h = weighted_l2(eh, area);
  r.err_u = weighted_l2(eu, area);
  r.err_v = weighted_l2(ev, area);
  return r;
}

ConvergenceTable mms_2d_convergence(const Mms2DConfig& base, const std::vector<std::size_t>& levels) {
  std::vector<std::size_t> cells;
  for (std::size_t m : levels) cells.push_back(m - 1);
  return convergence_study(
      [&](std::size_t n) {
        Mms2DConfig c = base;
        c.n = n;
        const Mms2DResult r = run_mms_2d(c);
        return std::vector<double>{r.err_u, r.err_v, r.err_h};
      },
      cells, {"u", "v", "h"});
}

Run2D run_merging_vortex(const Config2D& cfg, const VortexParams& p) {
  const double length = 2.0 * M_PI;
  const Rhs2DConfig rhs_cfg = make_rhs_2d(cfg.op, cfg.n, length, p.g, p.f_c, cfg.hv);
  const State2D q0 = merging_vortex_setup(rhs_cfg.ops.x.grid, p);
  return integrate_2d(rhs_cfg, q0, cfg.cfl, cfg.t_end, cfg.n_steps, cfg.sample_stride, cfg.on_sample);
}

ConvergenceTable vortex_conservation_convergence(const Config2D& base, const std::vector<std::size_t>& levels,
                                                 const VortexParams& p) {
  std::vector<std::size_t> cells;
  for (std::size_t m : levels) cells.push_back(m - 1);
  return convergence_study(
      [&](std::size_t n) {
        Config2D c = base;
        c.n = n;
        c.sample_stride = 0;
        c.on_sample = {};
        const Run2D r = run_merging_vortex(c, p);
        const DiagnosticsRecord& last = r.series.back();
        return std::vector<double>{std::abs(last.rel_energy), std::abs(last.rel_mass)};
      },
      cells, {"energy", "mass"});
}

Run2D run_barotropic_jet(const Config2D& cfg, const JetParams& p) {
  const Rhs2DConfig rhs_cfg = make_rhs_2d(cfg.op, cfg.n, p.length, p.g, p.f_c, cfg.hv);
  const State2D q0 = barotropic_jet_setup(rhs_cfg.ops.x.grid, p);
  return integrate_2d(rhs_cfg, q0, cfg.cfl, cfg.t_end, cfg.n_steps, cfg.sample_stride, cfg.on_sample);
}

}  // namespace swe
