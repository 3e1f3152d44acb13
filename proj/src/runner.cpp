#include "swe/runner.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "swe/error.hpp"
#include "swe/io.hpp"

namespace swe {

namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

const std::vector<ExperimentInfo> kRegistry = {
    {"mms1d", "1D manufactured Gaussian pulse, linear or nonlinear fluxes, mass-flux boundaries",
     "1D manufactured solution convergence table"},
    {"mms2d", "2D doubly periodic manufactured sinusoidal solution", "2D manufactured solution convergence table"},
    {"lake_at_rest", "Lake at rest over a parabolic bump, periodic boundaries", "lake at rest table"},
    {"lake_perturbed", "Perturbed lake with nonlinear transmissive boundaries", "perturbed lake table"},
    {"dam_break", "Wet dam break against the exact Riemann solution", "dam break figures"},
    {"merging_vortex", "Two Gaussian vortices in geostrophic balance, invariant drift", "merging vortex figures"},
    {"barotropic_jet", "Barotropic shear instability of two zonal jets, energy spectra", "barotropic jet spectra"},
    {"eigenspectrum", "Spectrum of the linear or linearised evolution operator", "eigenspectrum figures"},
    {"operator_report", "Algebraic verification of one operator pair, bounded and periodic", "operator definitions"},
    {"convergence", "Grid-refinement suites: table1, table1_linear, mms_hv, lake_perturbed, mms2d, vortex",
     "convergence tables"},
};

const std::map<std::string, std::vector<std::size_t>> kSuiteLevels = {
    {"table1", {41, 81, 161, 321, 641}},     {"table1_linear", {41, 81, 161, 321, 641}},
    {"mms_hv", {41, 81, 161, 321}},          {"lake_perturbed", {101, 201, 401, 801}},
    {"mms2d", {31, 41, 51, 61, 71, 81}},     {"vortex", {31, 41, 51, 61, 71}},
};

json hv_json(double delta, int order) { return {{"delta", delta}, {"order", order}, {"ramp", 0.1}}; }

json time_json(double cfl, json t_end, json n_steps, long sample_stride, bool with_snapshots) {
  json t = {{"cfl", cfl}, {"t_end", t_end}, {"n_steps", n_steps}, {"sample_stride", sample_stride}};
  if (with_snapshots) t["snapshot_stride"] = 0;
  return t;
}

json op_json(Family family, int order) { return {{"family", to_string(family)}, {"order", order}}; }

json defaults_for(const std::string& experiment, const std::string& suite) {
  const double c10 = std::sqrt(9.81 * 10.0);
  if (experiment == "mms1d") {
    return {{"operator", op_json(Family::DP, 4)},
            {"grid", {{"n", 161}}},
            {"physics", {{"g", 9.81}, {"flux", "nonlinear"}, {"U", -0.3 * c10}, {"H", 10.0}}},
            {"hv", hv_json(0.0, 0)},
            {"time", {{"cfl", 0.3}, {"t_end", 0.5}, {"sample_stride", 0}}}};
  }
  if (experiment == "mms2d") {
    return {{"operator", op_json(Family::DP, 4)},
            {"grid", {{"n", 80}}},
            {"physics", {{"g", 9.81}, {"f_c", 0.0}}},
            {"hv", hv_json(0.1, 0)},
            {"time", {{"cfl", 0.1}, {"t_end", 0.5}}}};
  }
  if (experiment == "lake_at_rest" || experiment == "lake_perturbed") {
    const bool perturbed = experiment == "lake_perturbed";
    return {{"operator", op_json(Family::DP, 6)},
            {"grid", {{"n", 201}}},
            {"hv", hv_json(0.0, 0)},
            {"time", time_json(0.3, perturbed ? 27.0 : 5.0, nullptr, 10, true)}};
  }
  if (experiment == "dam_break") {
    return {{"operator", op_json(Family::DP, 6)},
            {"grid", {{"n", 1001}}},
            {"physics", {{"g", 9.81}}},
            {"hv", hv_json(0.1, 0)},
            {"time", time_json(0.3, nullptr, 1000, 100, true)}};
  }
  if (experiment == "merging_vortex") {
    return {{"operator", op_json(Family::DP, 4)},
            {"grid", {{"n", 128}}},
            {"physics", {{"g", 8.0}, {"f_c", 8.0}, {"H", 8.0}}},
            {"hv", hv_json(0.5, 0)},
            {"time", time_json(0.1, 1.5, nullptr, 10, true)}};
  }
  if (experiment == "barotropic_jet") {
    const JetParams p;
    return {{"operator", op_json(Family::DP, 4)},
            {"grid", {{"n", 128}}},
            {"physics", {{"g", p.g}, {"f_c", p.f_c}, {"H", p.H}}},
            {"hv", hv_json(10.0, 0)},
            {"time", time_json(0.1, 86400.0, nullptr, 100, true)}};
  }
  if (experiment == "eigenspectrum") {
    return {{"operator", op_json(Family::DP, 6)},
            {"grid", {{"n", 501}}},
            {"physics", {{"g", 1.0}, {"H", 1.0}, {"U", 0.0}, {"flux", "linear"}}},
            {"bc", {{"kind", "mass_flux"}}},
            {"hv", hv_json(0.0, 0)}};
  }
  if (experiment == "operator_report") {
    return {{"operator", op_json(Family::DP, 4)}, {"grid", {{"n", 51}}}};
  }
  if (experiment == "convergence") {
    const std::string s = suite.empty() ? "table1" : suite;
    double delta = 0.0;
    double cfl = 0.3;
    int order = 4;
    if (s == "mms_hv") delta = 0.1;
    if (s == "mms2d") {
      delta = 0.1;
      cfl = 0.1;
    }
    if (s == "vortex") {
      delta = 0.5;
      cfl = 0.1;
    }
    if (s == "lake_perturbed") order = 6;
    const auto lv = kSuiteLevels.find(s);
    return {{"suite", s},
            {"levels", lv == kSuiteLevels.end() ? std::vector<std::size_t>{} : lv->second},
            {"operator", op_json(Family::DP, order)},
            {"hv", hv_json(delta, 0)},
            {"time", {{"cfl", cfl}}}};
  }
  throw Error(ErrorCode::ConfigInvalid, "unknown experiment '" + experiment + "'");
}

void normalise(json& doc) {
  if (doc.contains("operator") && doc["operator"].is_string()) {
    const OperatorChoice op = parse_operator_choice(doc["operator"].get<std::string>());
    doc["operator"] = op_json(op.family, op.order);
  }
  if (doc.contains("bc") && doc["bc"].is_string()) doc["bc"] = json{{"kind", doc["bc"]}};
}

void check_keys(const json& user, const json& defaults, const std::string& prefix, std::vector<std::string>& problems) {
  for (auto it = user.begin(); it != user.end(); ++it) {
    const std::string path = prefix.empty() ? it.key() : prefix + "." + it.key();
    if (prefix.empty() && (it.key() == "experiment" || it.key() == "output_dir")) continue;
    if (!defaults.contains(it.key())) {
      problems.push_back("unknown key: " + path);
      continue;
    }
    const json& d = defaults[it.key()];
    if (d.is_object()) {
      if (!it.value().is_object()) {
        problems.push_back(path + " must be an object");
      } else {
        check_keys(it.value(), d, path, problems);
      }
    }
  }
}

bool is_number(const json& v) { return v.is_number(); }
bool is_count(const json& v) { return v.is_number_integer() && v.get<long long>() >= 0; }

void check_values(json c, std::vector<std::string>& problems) {
  auto need = [&](bool ok, const std::string& msg) {
    if (!ok) problems.push_back(msg);
  };
  if (c.contains("operator")) {
    json& o = c["operator"];
    need(o.contains("family") && o["family"].is_string(), "operator.family must be a string");
    need(o.contains("order") && o["order"].is_number_integer(), "operator.order must be an integer");
    if (problems.empty()) {
      try {
        parse_operator_choice(o["family"].get<std::string>() + std::to_string(o["order"].get<int>()));
      } catch (const Error& e) {
        problems.push_back(std::string("operator: ") + e.what());
      }
    }
  }
  if (c.contains("grid")) need(is_count(c["grid"]["n"]) && c["grid"]["n"].get<long long>() >= 2, "grid.n must be an integer >= 2");
  if (c.contains("physics")) {
    json& p = c["physics"];
    for (const char* k : {"g", "f_c", "U", "H"}) {
      if (p.contains(k)) need(is_number(p[k]), std::string("physics.") + k + " must be a number");
    }
    for (const char* k : {"g", "H"}) {
      if (p.contains(k) && is_number(p[k])) need(p[k].get<double>() > 0.0, std::string("physics.") + k + " must be positive");
    }
    if (p.contains("flux")) {
      need(p["flux"] == "linear" || p["flux"] == "nonlinear", "physics.flux must be 'linear' or 'nonlinear'");
      if (p["flux"] == "linear" && is_number(p["U"]) && is_number(p["H"]) && is_number(p["g"]) &&
          p["H"].get<double>() > 0.0 && p["g"].get<double>() > 0.0) {
        const double speed = std::sqrt(p["g"].get<double>() * p["H"].get<double>());
        need(std::abs(p["U"].get<double>()) < speed,
             "physics: linear background must be subcritical, |U| < sqrt(g H) = " + std::to_string(speed));
      }
    }
  }
  if (c.contains("bc")) {
    json& b = c["bc"];
    need(b["kind"].is_string(), "bc.kind must be a string");
    if (b["kind"].is_string()) {
      const std::string k = b["kind"].get<std::string>();
      need(k == "mass_flux" || k == "velocity_flux" || k == "transmissive",
           "bc.kind must be mass_flux, velocity_flux or transmissive");
    }
  }
  if (c.contains("hv")) {
    json& h = c["hv"];
    need(is_number(h["delta"]) && h["delta"].get<double>() >= 0.0, "hv.delta must be a number >= 0");
    need(h["order"].is_number_integer() && (h["order"] == 0 || h["order"] == 4 || h["order"] == 6),
         "hv.order must be 0 (default), 4 or 6");
    need(is_number(h["ramp"]) && h["ramp"].get<double>() > 0.0 && h["ramp"].get<double>() < 0.5,
         "hv.ramp must lie in (0, 0.5)");
  }
  if (c.contains("time")) {
    json& t = c["time"];
    need(is_number(t["cfl"]) && t["cfl"].get<double>() > 0.0, "time.cfl must be positive");
    if (t.contains("t_end") && !t["t_end"].is_null()) {
      need(is_number(t["t_end"]) && t["t_end"].get<double>() > 0.0, "time.t_end must be positive");
    }
    if (t.contains("n_steps") && !t["n_steps"].is_null()) {
      need(is_count(t["n_steps"]) && t["n_steps"].get<long long>() > 0, "time.n_steps must be a positive integer");
    }
    if (t.contains("n_steps") && t.contains("t_end")) {
      need(t["n_steps"].is_null() != t["t_end"].is_null(), "exactly one of time.t_end and time.n_steps must be set");
    }
    if (t.contains("sample_stride")) need(is_count(t["sample_stride"]), "time.sample_stride must be an integer >= 0");
    if (t.contains("snapshot_stride")) {
      need(is_count(t["snapshot_stride"]), "time.snapshot_stride must be an integer >= 0");
      if (is_count(t["snapshot_stride"]) && is_count(t["sample_stride"]) && t["snapshot_stride"].get<long>() > 0) {
        const long snap = t["snapshot_stride"].get<long>();
        const long sample = t["sample_stride"].get<long>();
        need(sample > 0 && snap % sample == 0, "time.snapshot_stride must be a multiple of time.sample_stride");
      }
    }
  }
  if (c.contains("suite")) {
    need(c["suite"].is_string() && kSuiteLevels.count(c["suite"].get<std::string>()) == 1,
         "suite must be one of table1, table1_linear, mms_hv, lake_perturbed, mms2d, vortex");
  }
  if (c.contains("levels")) {
    bool ok = c["levels"].is_array() && c["levels"].size() >= 2;
    std::size_t prev = 0;
    if (ok) {
      for (const auto& v : c["levels"]) {
        if (!v.is_number_integer() || v.get<long long>() < 3 || v.get<std::size_t>() <= prev) {
          ok = false;
          break;
        }
        prev = v.get<std::size_t>();
      }
    }
    need(ok, "levels must be a strictly increasing list of at least two integers >= 3");
  }
  if (c.contains("output_dir")) need(c["output_dir"].is_string(), "output_dir must be a string");
}

Error invalid(const std::vector<std::string>& problems) {
  std::ostringstream os;
  for (std::size_t k = 0; k < problems.size(); ++k) os << (k ? "; " : "") << problems[k];
  return Error(ErrorCode::ConfigInvalid, os.str());
}

}  // namespace

const std::vector<ExperimentInfo>& experiment_registry() { return kRegistry; }

std::string operator_label(const OperatorChoice& op) { return operator_name(op.family, op.order); }

OperatorChoice parse_operator_choice(const std::string& name) {
  OperatorName on;
  try {
    on = parse_operator_name(name);
  } catch (const Error& e) {
    throw Error(ErrorCode::ConfigInvalid, e.what());
  }
  const bool ok = (on.family == Family::Traditional && (on.order == 4 || on.order == 6)) ||
                  (on.family != Family::Traditional && on.order >= 4 && on.order <= 6);
  if (!ok) throw Error(ErrorCode::ConfigInvalid, "no operator " + name + " (sbp4, sbp6, dp4..dp6, drp4..drp6)");
  return {on.family, on.order};
}

json default_config(const std::string& experiment) {
  json d = defaults_for(experiment, "");
  d["experiment"] = experiment;
  return d;
}

json resolve_config(const json& user_in) {
  if (!user_in.is_object()) throw Error(ErrorCode::ConfigInvalid, "config must be a JSON object");
  if (!user_in.contains("experiment")) throw Error(ErrorCode::ConfigInvalid, "missing field: experiment");
  if (!user_in["experiment"].is_string()) throw Error(ErrorCode::ConfigInvalid, "experiment must be a string");
  const std::string experiment = user_in["experiment"].get<std::string>();
  if (std::none_of(kRegistry.begin(), kRegistry.end(), [&](const ExperimentInfo& e) { return e.name == experiment; })) {
    throw Error(ErrorCode::ConfigInvalid, "unknown experiment '" + experiment + "'");
  }
  json user = user_in;
  normalise(user);
  std::string suite;
  if (user.contains("suite") && user["suite"].is_string()) suite = user["suite"].get<std::string>();
  if (!suite.empty() && kSuiteLevels.count(suite) == 0) {
    throw Error(ErrorCode::ConfigInvalid, "unknown suite '" + suite + "'");
  }
  json resolved = defaults_for(experiment, suite);
  std::vector<std::string> problems;
  check_keys(user, resolved, "", problems);
  if (!problems.empty()) throw invalid(problems);

  if (user.contains("time") && resolved.contains("time")) {
    const json& t = user["time"];
    json& r = resolved["time"];
    if (t.contains("t_end") && !t.contains("n_steps") && r.contains("n_steps")) r["n_steps"] = nullptr;
    if (t.contains("n_steps") && !t.contains("t_end") && r.contains("t_end")) r["t_end"] = nullptr;
  }
  resolved.merge_patch(user);
  resolved["experiment"] = experiment;
  check_values(resolved, problems);
  if (!problems.empty()) throw invalid(problems);
  if (resolved.contains("hv") && resolved["hv"]["order"] == 0) {
    resolved["hv"]["order"] = default_hv_order(resolved["operator"]["order"].get<int>());
  }
  return resolved;
}

RunConfig config_from_json(const json& c) {
  RunConfig rc;
  try {
    rc.experiment = c.at("experiment").get<std::string>();
    if (c.contains("operator")) {
      rc.op = parse_operator_choice(c["operator"]["family"].get<std::string>() +
                                    std::to_string(c["operator"]["order"].get<int>()));
    }
    if (c.contains("grid")) rc.n = c["grid"].at("n").get<std::size_t>();
    if (c.contains("physics")) {
      const json& p = c["physics"];
      rc.g = p.value("g", rc.g);
      rc.f_c = p.value("f_c", rc.f_c);
      rc.U = p.value("U", rc.U);
      rc.H = p.value("H", rc.H);
      rc.flux = p.value("flux", std::string("nonlinear")) == "linear" ? FluxKind::Linear : FluxKind::Nonlinear;
    }
    if (c.contains("bc")) rc.bc = parse_bc_kind(c["bc"].at("kind").get<std::string>());
    if (c.contains("hv")) {
      rc.hv.delta = c["hv"].at("delta").get<double>();
      rc.hv.order = c["hv"].at("order").get<int>();
      rc.hv.ramp = c["hv"].at("ramp").get<double>();
    }
    if (c.contains("time")) {
      const json& t = c["time"];
      rc.cfl = t.at("cfl").get<double>();
      if (t.contains("t_end") && !t["t_end"].is_null()) rc.t_end = t["t_end"].get<double>();
      if (t.contains("n_steps") && !t["n_steps"].is_null()) rc.n_steps = t["n_steps"].get<long>();
      rc.sample_stride = t.value("sample_stride", 0L);
      rc.snapshot_stride = t.value("snapshot_stride", 0L);
    }
    rc.suite = c.value("suite", std::string());
    if (c.contains("levels")) rc.levels = c["levels"].get<std::vector<std::size_t>>();
    rc.output_dir = c.value("output_dir", std::string());
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ConfigInvalid, e.what());
  }
  return rc;
}

namespace {

struct Writer {
  fs::path dir;
  json artifacts = json::object();

  void csv(const std::string& key, const std::string& file, const CsvTable& t) {
    write_csv(dir / file, t);
    artifacts[key] = file;
  }
  void snapshot(const std::string& stem, const Snapshot& s) {
    write_snapshot(dir / stem, s);
    artifacts["snapshots"].push_back(stem);
  }
};

double log10_or_min(double v) { return v > 0.0 ? std::log10(v) : -400.0; }

// 1D samples: t, mass, energy (with bathymetry potential), max |u|.
struct Series1D {
  Field weights;
  Field bathymetry;
  double g = 9.81;
  CsvTable table{{"t", "mass", "energy", "max_abs_u"}, {}};

  void add(double t, const State1D& s) {
    double mass = 0.0;
    double energy = 0.0;
    double umax = 0.0;
    for (std::size_t j = 0; j < s.h.size(); ++j) {
      const double b = bathymetry.empty() ? 0.0 : bathymetry[j];
      mass += weights[j] * s.h[j];
      energy += weights[j] * (0.5 * (s.h[j] * s.u[j] * s.u[j] + g * s.h[j] * s.h[j]) + g * s.h[j] * b);
      umax = std::max(umax, std::abs(s.u[j]));
    }
    table.rows.push_back({t, mass, energy, umax});
  }
};

Snapshot snapshot_1d(const Grid1D& grid, double t, const std::vector<std::pair<std::string, Field>>& fields) {
  Snapshot s;
  s.shape = {grid.n_points};
  s.dx = grid.dx;
  s.t = t;
  s.names.push_back("x");
  s.fields.push_back(grid.coords);
  for (const auto& [name, f] : fields) {
    s.names.push_back(name);
    s.fields.push_back(f);
  }
  return s;
}

CsvTable profile_csv(const Snapshot& s) {
  CsvTable t;
  t.columns = s.names;
  for (std::size_t j = 0; j < s.shape[0]; ++j) {
    std::vector<double> row;
    for (const Field& f : s.fields) row.push_back(f[j]);
    t.rows.push_back(std::move(row));
  }
  return t;
}

Snapshot snapshot_2d(const State2D& s, double t, const Operators2D& ops, double f_c) {
  const Field w = vorticity(s, f_c, ops);
  Field pv(w.size());
  for (std::size_t q = 0; q < w.size(); ++q) pv[q] = w[q] / s.h[q];
  return Snapshot{{s.n, s.n}, ops.dx(), t, {"h", "u", "v", "vorticity", "pv"}, {s.h, s.u, s.v, w, pv}};
}

long require_positive(long v, const char* what) {
  if (v <= 0) throw Error(ErrorCode::ConfigInvalid, std::string(what) + " must be positive");
  return v;
}

json run_1d_family(const RunConfig& rc, Writer& w) {
  const std::size_t cells = rc.n - 1;
  json results;
  Series1D series;
  series.g = rc.g;
  Grid1D grid;
  std::vector<std::pair<std::string, Field>> extra;
  long snap_count = 0;
  std::function<void(long, double, const State1D&)> on_sample;
  auto make_sampler = [&](const Grid1D& g) {
    return [&, g](long step, double t, const State1D& s) {
      series.add(t, s);
      if (rc.snapshot_stride > 0 && step % rc.snapshot_stride == 0) {
        std::ostringstream name;
        name << "snapshot_" << snap_count++;
        w.snapshot(name.str(), snapshot_1d(g, t, {{"h", s.h}, {"u", s.u}}));
      }
    };
  };

  if (rc.experiment == "mms1d") {
    Mms1DConfig c;
    c.op = rc.op;
    c.n_cells = cells;
    c.kind = rc.flux;
    c.hv = rc.hv;
    c.cfl = rc.cfl;
    c.t_end = rc.t_end.value_or(0.5);
    c.params.g = rc.g;
    c.U = rc.U;
    c.H = rc.H;
    grid = Grid1D::bounded(cells, c.params.length);
    series.weights = build_operator_pair(rc.op.family, rc.op.order, false, grid).p_weights;
    c.on_sample = make_sampler(grid);
    c.sample_stride = rc.sample_stride;
    const Mms1DResult r = run_mms_1d(c);
    Field he(grid.n_points), ue(grid.n_points);
    for (std::size_t j = 0; j < grid.n_points; ++j) std::tie(he[j], ue[j]) = mms_exact_1d(grid.coords[j], r.run.t, c.params);
    extra = {{"h", r.run.state.h}, {"u", r.run.state.u}, {"h_exact", he}, {"u_exact", ue}};
    results = {{"t", r.run.t}, {"steps", r.run.steps}, {"dt", r.run.dt}, {"err_u", r.err_u}, {"err_h", r.err_h},
               {"log2_err_u", std::log2(r.err_u)}, {"log2_err_h", std::log2(r.err_h)}};
  } else if (rc.experiment == "lake_at_rest" || rc.experiment == "lake_perturbed") {
    LakeConfig c;
    c.op = rc.op;
    c.n_cells = cells;
    c.perturbed = rc.experiment == "lake_perturbed";
    c.hv = rc.hv;
    c.cfl = rc.cfl;
    if (rc.t_end) c.t_end = *rc.t_end;
    c.n_steps = rc.n_steps;
    grid = c.perturbed ? Grid1D::bounded(cells, 25.0) : Grid1D::periodic_grid(cells, 25.0);
    series.weights = build_operator_pair(rc.op.family, rc.op.order, !c.perturbed, grid).p_weights;
    series.bathymetry = lake_at_rest_setup(grid, c.perturbed).bathymetry;
    c.on_sample = make_sampler(grid);
    c.sample_stride = rc.sample_stride;
    const LakeResult r = run_lake(c);
    extra = {{"h", r.run.state.h}, {"u", r.run.state.u}, {"b", r.bathymetry}};
    results = {{"t", r.run.t},         {"steps", r.run.steps},  {"dt", r.run.dt},
               {"err_u", r.err_u},     {"err_h", r.err_h},      {"max_abs_u", r.max_u},
               {"log10_err_u", log10_or_min(r.err_u)}, {"log10_err_h", log10_or_min(r.err_h)}};
  } else {
    DamBreakConfig c;
    c.op = rc.op;
    c.n_cells = cells;
    c.hv = rc.hv;
    c.cfl = rc.cfl;
    c.params.g = rc.g;
    if (rc.t_end) c.t_end = *rc.t_end;
    c.n_steps = rc.n_steps;
    grid = Grid1D::bounded(cells, c.params.length);
    series.weights = build_operator_pair(rc.op.family, rc.op.order, false, grid).p_weights;
    c.on_sample = make_sampler(grid);
    c.sample_stride = rc.sample_stride;
    const DamBreakResult r = run_dam_break(c);
    Field he(grid.n_points), ue(grid.n_points);
    for (std::size_t j = 0; j < grid.n_points; ++j) std::tie(he[j], ue[j]) = dam_break_exact(grid.coords[j], r.run.t, c.params);
    extra = {{"h", r.run.state.h}, {"u", r.run.state.u}, {"h_exact", he}, {"u_exact", ue}};
    results = {{"t", r.run.t},       {"steps", r.run.steps}, {"dt", r.run.dt},
               {"err_h", r.err_h},   {"err_u", r.err_u},     {"tail_energy", r.tail},
               {"c_m", dam_break_cm(c.params.g, c.params.h_left, c.params.h_right)},
               {"froude", dam_break_froude(c.params.g, c.params.h_left, c.params.h_right)}};
  }
  const Snapshot fin = snapshot_1d(grid, results["t"].get<double>(), extra);
  w.snapshot("final", fin);
  w.csv("profile", "profile.csv", profile_csv(fin));
  w.csv("diagnostics", "diagnostics.csv", series.table);
  return results;
}

json run_2d_family(const RunConfig& rc, Writer& w) {
  Config2D c;
  c.op = rc.op;
  c.n = rc.n;
  c.hv = rc.hv;
  c.cfl = rc.cfl;
  if (rc.t_end) c.t_end = *rc.t_end;
  c.n_steps = rc.n_steps;
  c.sample_stride = rc.sample_stride;
  const bool jet = rc.experiment == "barotropic_jet";
  JetParams jp;
  VortexParams vp;
  double length = 2.0 * M_PI;
  if (jet) {
    jp.g = rc.g;
    jp.f_c = rc.f_c;
    jp.H = rc.H;
    length = jp.length;
  } else {
    vp.g = rc.g;
    vp.f_c = rc.f_c;
    vp.H = rc.H;
  }
  const Operators2D ops = Operators2D::periodic(rc.op.family, rc.op.order, rc.n, length);
  const double f_c = rc.f_c;
  long snap_count = 0;
  c.on_sample = [&](long step, double t, const State2D& s) {
    if (rc.snapshot_stride > 0 && step % rc.snapshot_stride == 0) {
      std::ostringstream name;
      name << "snapshot_" << snap_count++;
      w.snapshot(name.str(), snapshot_2d(s, t, ops, f_c));
    }
  };
  const Run2D r = jet ? run_barotropic_jet(c, jp) : run_merging_vortex(c, vp);
  w.snapshot("final", snapshot_2d(r.state, r.t, ops, f_c));
  w.csv("diagnostics", "diagnostics.csv", diagnostics_csv(r.series));
  const DiagnosticsRecord& last = r.series.back();
  json results = {{"t", r.t},
                  {"steps", r.steps},
                  {"dt", r.dt},
                  {"rel_energy", last.rel_energy},
                  {"rel_enstrophy", last.rel_enstrophy},
                  {"rel_vorticity", last.rel_vorticity},
                  {"rel_mass", last.rel_mass}};
  double max_w = 0.0;
  double max_m = 0.0;
  for (const auto& d : r.series) {
    max_w = std::max(max_w, std::abs(d.rel_vorticity));
    max_m = std::max(max_m, std::abs(d.rel_mass));
  }
  results["max_abs_rel_vorticity"] = max_w;
  results["max_abs_rel_mass"] = max_m;
  if (jet) {
    const Spectra sp = energy_enstrophy_spectra(r.state);
    w.csv("spectra", "spectra.csv", spectra_csv(sp));
    const std::size_t hi = std::min<std::size_t>(32, sp.energy.size() - 1);
    results["spectral_slope"] = spectral_slope(sp.energy, 8, hi);
    results["slope_range"] = {8, hi};
  }
  return results;
}

json run_eigen(const RunConfig& rc, Writer& w) {
  EigenConfig c;
  c.op = rc.op;
  c.n_cells = rc.n - 1;
  c.bc = rc.bc;
  c.hv = rc.hv;
  c.nonlinear = rc.flux == FluxKind::Nonlinear;
  c.g = rc.g;
  c.H = rc.H;
  c.U = rc.U;
  const EigenReport rep = run_eigenspectrum(c);
  w.csv("eigenvalues", "eigenvalues.csv", eigen_csv(rep));
  return {{"n", rep.n},
          {"norm", rep.norm},
          {"max_real", rep.max_real},
          {"max_abs_real", rep.max_abs_real},
          {"max_real_over_norm", rep.max_real / rep.norm},
          {"matrix", c.nonlinear ? "fd_jacobian" : "assembled"}};
}

json report_json(const VerificationReport& r) {
  return {{"sbp_identity", r.sbp_identity},     {"q_residual", r.q_residual},
          {"q_tolerance", r.q_tolerance},       {"s_plus_max", r.s_plus_max},
          {"s_minus_min", r.s_minus_min},       {"interior_accuracy", r.interior_accuracy},
          {"boundary_accuracy", r.boundary_accuracy}, {"quadrature", r.quadrature},
          {"all_pass", r.all_pass}};
}

json run_operator_report(const RunConfig& rc, Writer& w) {
  json results;
  bool all = true;
  const Grid1D bounded = Grid1D::bounded(rc.n - 1, 1.0);
  const VerificationReport b = verify_pair(build_operator_pair(rc.op.family, rc.op.order, false, bounded));
  results["bounded"] = report_json(b);
  all = all && b.all_pass;
  if (rc.op.family != Family::Traditional) {
    const Grid1D periodic = Grid1D::periodic_grid(rc.n - 1, 1.0);
    const VerificationReport p = verify_pair(build_operator_pair(rc.op.family, rc.op.order, true, periodic));
    results["periodic"] = report_json(p);
    all = all && p.all_pass;
  }
  results["all_pass"] = all;
  write_json(w.dir / "operator_report.json", results);
  w.artifacts["operator_report"] = "operator_report.json";
  return results;
}

json run_convergence(const RunConfig& rc, Writer& w) {
  const std::vector<std::size_t>& levels = rc.levels;
  ConvergenceTable table;
  if (rc.suite == "table1" || rc.suite == "table1_linear" || rc.suite == "mms_hv") {
    Mms1DConfig c;
    c.op = rc.op;
    c.hv = rc.hv;
    c.cfl = rc.cfl;
    c.kind = rc.suite == "table1_linear" ? FluxKind::Linear : FluxKind::Nonlinear;
    table = mms_1d_convergence(c, levels);
  } else if (rc.suite == "lake_perturbed") {
    LakeConfig c;
    c.op = rc.op;
    c.hv = rc.hv;
    c.cfl = rc.cfl;
    c.perturbed = true;
    c.n_cells = levels.front() - 1;
    c.t_end = lake_end_time(c);
    table = lake_convergence(c, levels);
  } else if (rc.suite == "mms2d") {
    Mms2DConfig c;
    c.op = rc.op;
    c.hv = rc.hv;
    c.cfl = rc.cfl;
    table = mms_2d_convergence(c, levels);
  } else {
    Config2D c;
    c.op = rc.op;
    c.hv = rc.hv;
    c.cfl = rc.cfl;
    c.t_end = 4.0;
    table = vortex_conservation_convergence(c, levels);
  }
  w.csv("convergence", "convergence.csv", convergence_csv(table));
  json rows = json::array();
  for (const auto& row : table.rows) rows.push_back({{"m", row.m}, {"errors", row.errors}, {"rates", row.rates}});
  return {{"names", table.names}, {"rows", rows}, {"final_rates", table.last().rates}};
}

}  // namespace

json run_experiment(const json& resolved, const fs::path& out_dir) {
  const RunConfig rc = config_from_json(resolved);
  if (rc.n_steps) require_positive(*rc.n_steps, "time.n_steps");
  Writer w{out_dir};
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + out_dir.string() + ": " + ec.message());
  json results;
  const std::string& e = rc.experiment;
  if (e == "mms1d" || e == "lake_at_rest" || e == "lake_perturbed" || e == "dam_break") {
    results = run_1d_family(rc, w);
  } else if (e == "merging_vortex" || e == "barotropic_jet") {
    results = run_2d_family(rc, w);
  } else if (e == "mms2d") {
    Mms2DConfig c;
    c.op = rc.op;
    c.n = rc.n;
    c.hv = rc.hv;
    c.cfl = rc.cfl;
    if (rc.t_end) c.t_end = *rc.t_end;
    c.params.g = rc.g;
    c.params.f_c = rc.f_c;
    const Mms2DResult r = run_mms_2d(c);
    const Operators2D ops = Operators2D::periodic(rc.op.family, rc.op.order, rc.n, c.params.length);
    w.snapshot("final", snapshot_2d(r.run.state, r.run.t, ops, rc.f_c));
    results = {{"t", r.run.t}, {"steps", r.run.steps}, {"dt", r.run.dt},
               {"err_h", r.err_h}, {"err_u", r.err_u}, {"err_v", r.err_v}};
  } else if (e == "eigenspectrum") {
    results = run_eigen(rc, w);
  } else if (e == "operator_report") {
    results = run_operator_report(rc, w);
  } else if (e == "convergence") {
    results = run_convergence(rc, w);
  } else {
    throw Error(ErrorCode::ConfigInvalid, "unknown experiment '" + e + "'");
  }
  json meta = {{"schema_version", kSchemaVersion},
               {"experiment", e},
               {"operator", operator_label(rc.op)},
               {"config", resolved},
               {"artifacts", w.artifacts},
               {"results", results}};
  write_json(out_dir / "metadata.json", meta);
  return meta;
}

json error_record(const std::exception& e) {
  std::string code = "Internal";
  std::string category = "Internal";
  if (const auto* se = dynamic_cast<const Error*>(&e)) {
    code = to_string(se->code());
    switch (se->code()) {
      case ErrorCode::ConfigInvalid: category = "ConfigInvalid"; break;
      case ErrorCode::IoError: category = "IoError"; break;
      default: category = "NumericalFailure"; break;
    }
  }
  return {{"error", category}, {"code", code}, {"message", e.what()}};
}

int exit_code_for(const std::exception& e) {
  if (const auto* se = dynamic_cast<const Error*>(&e)) {
    switch (se->code()) {
      case ErrorCode::ConfigInvalid: return 2;
      case ErrorCode::IoError: return 4;
      default: return 3;
    }
  }
  return 1;
}

}  // namespace swe
