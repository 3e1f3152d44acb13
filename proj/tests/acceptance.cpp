#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "swe/error.hpp"
#include "swe/experiments.hpp"
#include "swe/io.hpp"

using namespace swe;

namespace {

constexpr double kOpIdentityTol = 1e-11;
constexpr double kOpQTolTimesDx = 1e-12;
constexpr double kOpSemidefTol = 1e-10;
constexpr std::size_t kOpPoints = 501;

constexpr double kMmsDp4U = 3.97;
constexpr double kMmsDp4H = 4.02;
constexpr double kMmsDp4Tol = 0.35;
constexpr double kMmsDp6U = 4.7;
constexpr double kMmsDp6H = 4.5;
constexpr double kMmsDp6Tol = 0.5;
constexpr double kMmsSbp4 = 3.0;
constexpr double kMmsSbp4Tol = 0.3;
constexpr double kMmsOddLo = 3.6;
constexpr double kMmsOddHi = 3.7;
constexpr double kMmsOddTol = 0.4;

constexpr double kHvDelta = 0.1;
constexpr double kHvDp4Min = 3.3;
constexpr double kHvDp6Min = 4.6;

constexpr double kLakeLog10Max = -12.0;

constexpr double kLakeSbp[2] = {3.96, 3.82};
constexpr double kLakeDp[2] = {5.59, 5.59};
constexpr double kLakeDrp[2] = {3.99, 4.14};
constexpr double kLakeRateTol = 0.6;
constexpr double kLakeMaxU = 1e-6;

constexpr double kDamRootTol = 1e-9;
constexpr double kDamFroude = 0.3458;
constexpr double kDamFroudeTol = 1e-3;
constexpr double kDamTailRatio = 2.0;

constexpr double kEigenTol = 1e-8;

constexpr std::size_t kConsN = 64;
constexpr double kConsEnergyTol = 1e-10;
constexpr double kConsRateTol = 1e-12;

constexpr double kMms2D4 = 3.03;
constexpr double kMms2D6Lo = 5.02;
constexpr double kMms2D6Hi = 5.09;
constexpr double kMms2DTol = 0.3;

constexpr std::size_t kVortexN = 128;
constexpr double kVortexTEndInviscid = 1.5;
constexpr double kVortexTEnd = 4.0;
constexpr double kVortexDelta = 0.5;
constexpr double kVortexDriftTol = 1e-12;
constexpr double kVortex4Lo = 2.9;
constexpr double kVortex4Hi = 3.4;
constexpr double kVortex6Lo = 3.9;
constexpr double kVortex6Hi = 4.3;
constexpr double kVortexRateTol = 0.5;

constexpr std::size_t kJetN = 128;
constexpr double kJetDays = 1.0;
constexpr double kJetDelta = 10.0;
constexpr std::size_t kJetShellLo = 8;
constexpr std::size_t kJetShellHi = 32;
constexpr double kJetSlopeLo = -3.8;
constexpr double kJetSlopeHi = -2.2;

const std::vector<std::size_t> kTable1Levels = {41, 81, 161, 321, 641};
const std::vector<std::size_t> kHvLevels = {41, 81, 161, 321};
const std::vector<std::size_t> kLakeLevels = {101, 201, 401, 801};
const std::vector<std::size_t> kMms2DLevels = {31, 41, 51, 61, 71, 81};
const std::vector<std::size_t> kVortexLevels = {31, 41, 51, 61, 71};

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void check(bool ok, const std::string& note) {
    pass = pass && ok;
    notes.push_back((ok ? "ok   " : "FAIL ") + note);
  }
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

bool within(double v, double lo, double hi, double tol) { return v >= lo - tol && v <= hi + tol; }

OperatorChoice op(const std::string& name) {
  const OperatorName n = parse_operator_name(name);
  return {n.family, n.order};
}

std::string rates(const ConvergenceTable& t) {
  std::string s;
  for (std::size_t k = 0; k < t.names.size(); ++k) {
    s += " q_" + t.names[k] + " =";
    for (const auto& row : t.rows) {
      if (!row.rates.empty()) s += fmt(" %.3f", row.rates[k]);
    }
  }
  return s;
}

Outcome operator_algebra() {
  Outcome o;
  const std::vector<std::pair<Family, int>> shipped = {{Family::Traditional, 4}, {Family::Traditional, 6},
                                                       {Family::DP, 4},          {Family::DP, 5},
                                                       {Family::DP, 6},          {Family::DRP, 4},
                                                       {Family::DRP, 5},         {Family::DRP, 6}};
  for (const auto& [fam, q] : shipped) {
    for (bool periodic : {false, true}) {
      const Grid1D grid = periodic ? Grid1D::periodic_grid(kOpPoints, 1.0) : Grid1D::bounded(kOpPoints - 1, 1.0);
      const SbpOperatorPair pair = build_operator_pair(fam, q, periodic, grid);
      const VerificationReport r = verify_pair(pair);
      const double q_tol = kOpQTolTimesDx / grid.dx;
      const bool ok = r.all_pass && r.sbp_identity <= kOpIdentityTol && r.q_residual <= q_tol &&
                      r.s_plus_max <= kOpSemidefTol && r.s_minus_min >= -kOpSemidefTol;
      o.check(ok, fmt("%s %s: identity %.1e, Q %.1e (tol %.1e), max eig S+ %.1e, min eig S- %.1e, accuracy %s",
                      operator_name(fam, q).c_str(), periodic ? "periodic" : "bounded", r.sbp_identity,
                      r.q_residual, q_tol, r.s_plus_max, r.s_minus_min, r.all_pass ? "ok" : "fails"));
    }
  }
  return o;
}

ConvergenceTable mms_table(const std::string& name, const std::vector<std::size_t>& levels, double delta) {
  Mms1DConfig c;
  c.op = op(name);
  c.hv.delta = delta;
  return mms_1d_convergence(c, levels);
}

Outcome mms_1d() {
  Outcome o;
  auto last = [](const ConvergenceTable& t) { return t.last().rates; };
  {
    const ConvergenceTable t = mms_table("dp4", kTable1Levels, 0.0);
    const auto q = last(t);
    o.check(std::abs(q[0] - kMmsDp4U) <= kMmsDp4Tol && std::abs(q[1] - kMmsDp4H) <= kMmsDp4Tol,
            "dp4" + rates(t) + fmt(" (target %.2f/%.2f +- %.2f)", kMmsDp4U, kMmsDp4H, kMmsDp4Tol));
  }
  {
    const ConvergenceTable t = mms_table("dp6", kTable1Levels, 0.0);
    const auto q = last(t);
    o.check(std::abs(q[0] - kMmsDp6U) <= kMmsDp6Tol && std::abs(q[1] - kMmsDp6H) <= kMmsDp6Tol,
            "dp6" + rates(t) + fmt(" (target %.2f/%.2f +- %.2f)", kMmsDp6U, kMmsDp6H, kMmsDp6Tol));
  }
  {
    const ConvergenceTable t = mms_table("sbp4", kTable1Levels, 0.0);
    const auto q = last(t);
    o.check(std::abs(q[0] - kMmsSbp4) <= kMmsSbp4Tol && std::abs(q[1] - kMmsSbp4) <= kMmsSbp4Tol,
            "sbp4" + rates(t) + fmt(" (target %.2f +- %.2f)", kMmsSbp4, kMmsSbp4Tol));
  }
  for (const char* name : {"dp5", "drp5"}) {
    const ConvergenceTable t = mms_table(name, kTable1Levels, 0.0);
    const auto q = last(t);
    o.check(within(q[0], kMmsOddLo, kMmsOddHi, kMmsOddTol) && within(q[1], kMmsOddLo, kMmsOddHi, kMmsOddTol),
            std::string(name) + rates(t) + fmt(" (target %.2f..%.2f +- %.2f)", kMmsOddLo, kMmsOddHi, kMmsOddTol));
  }
  return o;
}

Outcome mms_hv() {
  Outcome o;
  for (auto [name, min_rate] : {std::pair{"dp4", kHvDp4Min}, std::pair{"dp6", kHvDp6Min}}) {
    const ConvergenceTable t = mms_table(name, kHvLevels, kHvDelta);
    const auto q = t.last().rates;
    o.check(q[0] >= min_rate && q[1] >= min_rate,
            std::string(name) + fmt(" delta %.2f", kHvDelta) + rates(t) + fmt(" (target >= %.2f)", min_rate));
  }
  return o;
}

Outcome lake_at_rest() {
  Outcome o;
  for (const char* name : {"sbp6", "dp6", "drp6"}) {
    for (std::size_t points : {51, 201}) {
      LakeConfig c;
      c.op = op(name);
      c.n_cells = points - 1;
      const LakeResult r = run_lake(c);
      const double e = std::log10(std::max(r.err_u, 1e-300));
      o.check(e <= kLakeLog10Max, fmt("%s N=%zu t=%.2f log10 err_u %.2f log10 err_h %.2f", name, points, r.run.t, e,
                                      std::log10(std::max(r.err_h, 1e-300))));
    }
  }
  return o;
}

Outcome lake_perturbed() {
  Outcome o;
  const std::vector<std::pair<const char*, const double*>> cases = {
      {"sbp6", kLakeSbp}, {"dp6", kLakeDp}, {"drp6", kLakeDrp}};
  for (const auto& [name, target] : cases) {
    LakeConfig c;
    c.op = op(name);
    c.perturbed = true;
    c.n_cells = kLakeLevels.front() - 1;
    c.t_end = lake_end_time(c);
    const ConvergenceTable t = lake_convergence(c, kLakeLevels);
    const auto q = t.last().rates;
    o.check(std::abs(q[0] - target[0]) <= kLakeRateTol && std::abs(q[1] - target[1]) <= kLakeRateTol,
            std::string(name) + fmt(" t=%.3f", c.t_end) + rates(t) +
                fmt(" (target %.2f/%.2f +- %.2f)", target[0], target[1], kLakeRateTol));
    c.n_cells = kLakeLevels.back() - 1;
    const LakeResult r = run_lake(c);
    o.check(r.max_u <= kLakeMaxU, std::string(name) + fmt(" N=%zu max|u| %.2e (target <= %.0e)",
                                                          kLakeLevels.back(), r.max_u, kLakeMaxU));
  }
  return o;
}

Outcome dam_break(const std::string& golden_path) {
  Outcome o;
  const DamBreakParams p;
  const double cm = dam_break_cm(p.g, p.h_left, p.h_right);
  const double scale = std::pow(p.g * p.h_left, 3.0);
  const double res = std::abs(dam_break_residual(cm, p.g, p.h_left, p.h_right)) / scale;
  o.check(res <= kDamRootTol, fmt("c_m %.12f scaled residual %.2e", cm, res));
  const double fr = dam_break_froude(p.g, p.h_left, p.h_right);
  o.check(std::abs(fr - kDamFroude) <= kDamFroudeTol, fmt("Froude %.5f (target %.4f +- %.0e)", fr, kDamFroude,
                                                           kDamFroudeTol));

  const nlohmann::json golden = read_json(golden_path);
  DamBreakConfig c;
  c.op = op(golden["operator"].get<std::string>());
  c.n_cells = golden["n"].get<std::size_t>() - 1;
  c.n_steps = golden["n_steps"].get<long>();
  c.hv.delta = golden["delta"].get<double>();
  const DamBreakResult with = run_dam_break(c);
  const double bound = golden["err_h_bound"].get<double>();
  o.check(with.err_h < bound, fmt("delta %.2f t=%.4f err_h %.5f (golden bound %.3f)", c.hv.delta, with.run.t,
                                  with.err_h, bound));
  c.hv.delta = 0.0;
  const DamBreakResult without = run_dam_break(c);
  const double ratio = without.tail / with.tail;
  o.check(ratio > kDamTailRatio, fmt("high-frequency tail delta 0: %.3e, delta %.2f: %.3e, ratio %.1f (target > %.1f)",
                                     without.tail, golden["delta"].get<double>(), with.tail, ratio, kDamTailRatio));
  return o;
}

Outcome eigenspectra() {
  Outcome o;
  for (bool nonlinear : {false, true}) {
    for (BcKind bc : {BcKind::MassFlux, BcKind::VelocityFlux, BcKind::Transmissive}) {
      for (double delta : {0.0, 0.1}) {
        EigenConfig c;
        c.bc = bc;
        c.hv.delta = delta;
        c.nonlinear = nonlinear;
        const EigenReport r = run_eigenspectrum(c);
        const double rel = r.max_real / r.norm;
        const double rel_abs = r.max_abs_real / r.norm;
        bool ok = rel <= kEigenTol;
        std::string note = fmt("%s %s delta %.1f n=%zu max re/|A| %.2e", nonlinear ? "fd-jacobian" : "linear",
                               to_string(bc).c_str(), delta, r.n, rel);
        if (delta == 0.0 && bc != BcKind::Transmissive) {
          ok = ok && rel_abs <= kEigenTol;
          note += fmt(", max |re|/|A| %.2e", rel_abs);
        }
        o.check(ok, note);
      }
    }
  }
  return o;
}

Outcome conservation_2d() {
  Outcome o;
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (const char* name : {"dp4", "drp4", "dp5", "dp6", "drp6"}) {
    const OperatorChoice choice = op(name);
    const Operators2D ops = Operators2D::periodic(choice.family, choice.order, kConsN, 2.0 * M_PI);
    const double area = ops.dx() * ops.dy();
    for (double fc : {0.0, 4.0}) {
      State2D s{kConsN, Field(kConsN * kConsN), Field(kConsN * kConsN), Field(kConsN * kConsN)};
      double norm2 = 0.0;
      for (std::size_t q = 0; q < s.size(); ++q) {
        s.h[q] = 5.0 + uni(rng);
        s.u[q] = uni(rng);
        s.v[q] = uni(rng);
        norm2 += s.h[q] * s.h[q] + s.u[q] * s.u[q] + s.v[q] * s.v[q];
      }
      const Rhs2DConfig cfg{9.81, fc, ops, {}, {}, {}};
      const State2D r = rhs_2d(s, cfg, 0.0);
      const double e_rate = std::abs(energy_rate_2d(s, r, ops, cfg.g));
      double mass = 0.0;
      double mass_scale = 0.0;
      for (double v : r.h) {
        mass += v * area;
        mass_scale += std::abs(v) * area;
      }
      const Field dw = vorticity(r, 0.0, ops);
      double w = 0.0;
      double w_scale = 0.0;
      for (double v : dw) {
        w += v * area;
        w_scale += std::abs(v) * area;
      }
      const double e_rel = e_rate / norm2;
      const double m_rel = std::abs(mass) / mass_scale;
      const double w_rel = std::abs(w) / w_scale;
      o.check(e_rel <= kConsEnergyTol && m_rel <= kConsRateTol && w_rel <= kConsRateTol,
              fmt("%s f=%.0f %zu^2: energy rate/|q|^2 %.1e, mass rate %.1e, vorticity rate %.1e", name, fc, kConsN,
                  e_rel, m_rel, w_rel));
    }
  }
  return o;
}

Outcome mms_2d() {
  Outcome o;
  for (const char* name : {"dp4", "drp4", "dp6", "drp6"}) {
    Mms2DConfig c;
    c.op = op(name);
    const ConvergenceTable t = mms_2d_convergence(c, kMms2DLevels);
    const std::size_t h = 2;
    const double q = t.last().rates[h];
    const bool six = c.op.order == 6;
    const bool ok = six ? within(q, kMms2D6Lo, kMms2D6Hi, kMms2DTol) : std::abs(q - kMms2D4) <= kMms2DTol;
    o.check(ok, std::string(name) + rates(t) +
                    (six ? fmt(" (target q_h %.2f..%.2f +- %.1f)", kMms2D6Lo, kMms2D6Hi, kMms2DTol)
                         : fmt(" (target q_h %.2f +- %.1f)", kMms2D4, kMms2DTol)));
  }
  return o;
}

Outcome merging_vortex() {
  Outcome o;
  for (double delta : {0.0, kVortexDelta}) {
    Config2D c;
    c.n = kVortexN;
    c.hv.delta = delta;
    c.t_end = delta == 0.0 ? kVortexTEndInviscid : kVortexTEnd;
    c.sample_stride = 50;
    const Run2D r = run_merging_vortex(c);
    double mass = 0.0;
    double vort = 0.0;
    for (const auto& d : r.series) {
      mass = std::max(mass, std::abs(d.rel_mass));
      vort = std::max(vort, std::abs(d.rel_vorticity));
    }
    const double ens = r.series.back().rel_enstrophy;
    const bool drift_ok = delta == 0.0 ? mass <= kVortexDriftTol && vort <= kVortexDriftTol : vort <= kVortexDriftTol;
    o.check(drift_ok, fmt("dp4 %zu^2 delta %.1f t=%.2f max|rel mass| %.1e max|rel vorticity| %.1e", kVortexN, delta,
                          r.t, mass, vort));
    const bool sign_ok = delta == 0.0 ? ens > 0.0 : ens < 0.0;
    o.check(sign_ok, fmt("dp4 %zu^2 delta %.1f rel enstrophy at t=%.2f: %+.3e (%s expected)", kVortexN, delta, r.t,
                         ens, delta == 0.0 ? "growth" : "decay"));
  }
  for (const char* name : {"dp4", "drp4", "dp6", "drp6"}) {
    Config2D c;
    c.op = op(name);
    c.hv.delta = kVortexDelta;
    c.t_end = kVortexTEnd;
    const ConvergenceTable t = vortex_conservation_convergence(c, kVortexLevels);
    const auto q = t.last().rates;
    const bool six = c.op.order == 6;
    const double lo = six ? kVortex6Lo : kVortex4Lo;
    const double hi = six ? kVortex6Hi : kVortex4Hi;
    o.check(within(q[0], lo, hi, kVortexRateTol) && within(q[1], lo, hi, kVortexRateTol),
            std::string(name) + rates(t) + fmt(" (target %.1f..%.1f +- %.1f)", lo, hi, kVortexRateTol));
  }
  return o;
}

Outcome barotropic_jet() {
  Outcome o;
  Config2D c;
  c.n = kJetN;
  c.hv.delta = kJetDelta;
  c.t_end = kJetDays * 86400.0;
  c.sample_stride = 1000;
  try {
    const Run2D r = run_barotropic_jet(c);
    const Spectra sp = energy_enstrophy_spectra(r.state);
    const double slope = spectral_slope(sp.energy, kJetShellLo, kJetShellHi);
    o.check(true, fmt("dp4 %zu^2 delta %.1f completed %.1f days in %ld steps", kJetN, kJetDelta, r.t / 86400.0,
                      r.steps));
    o.check(slope >= kJetSlopeLo && slope <= kJetSlopeHi,
            fmt("kinetic energy slope over shells [%zu, %zu]: %.3f (target %.1f..%.1f)", kJetShellLo, kJetShellHi,
                slope, kJetSlopeLo, kJetSlopeHi));
  } catch (const Error& e) {
    o.check(false, std::string("run failed: ") + e.what());
  }
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string golden = SWE_GOLDEN_DIR "/dam_break.json";
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"operator_algebra", operator_algebra},
      {"mms_1d", mms_1d},
      {"mms_hyperviscosity", mms_hv},
      {"lake_at_rest", lake_at_rest},
      {"lake_perturbed", lake_perturbed},
      {"dam_break", [&] { return dam_break(golden); }},
      {"eigenspectra", eigenspectra},
      {"conservation_2d", conservation_2d},
      {"mms_2d", mms_2d},
      {"merging_vortex", merging_vortex},
      {"barotropic_jet", barotropic_jet},
  };
  std::set<std::string> only(argv + 1, argv + argc);
  int failures = 0;
  for (const auto& [name, run] : criteria) {
    if (!only.empty() && only.count(name) == 0) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = run();
    } catch (const std::exception& e) {
      out.check(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    for (const auto& n : out.notes) std::printf("  %s\n", n.c_str());
    std::printf("%s %s (%.1fs)\n", out.pass ? "PASS" : "FAIL", name.c_str(), secs);
    std::fflush(stdout);
    failures += out.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
