#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "swe/error.hpp"
#include "swe/io.hpp"
#include "swe/runner.hpp"

namespace {

using json = nlohmann::json;

struct Flags {
  std::string config;
  std::string experiment;
  std::string op;
  std::optional<long> n;
  std::string bc;
  std::optional<double> delta;
  std::optional<double> cfl;
  std::optional<double> t_end;
  std::optional<long> n_steps;
  std::string suite;
  std::string out;
};

void add_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "JSON configuration file");
  cmd->add_option("--experiment", f.experiment, "Experiment name (see list)");
  cmd->add_option("--operator", f.op, "Operator pair, e.g. dp6, drp4, sbp4");
  cmd->add_option("--n", f.n, "Grid size (points for 1D, points per direction for 2D)");
  cmd->add_option("--bc", f.bc, "Boundary kind: mass_flux, velocity_flux, transmissive");
  cmd->add_option("--delta", f.delta, "Hyper-viscosity strength");
  cmd->add_option("--cfl", f.cfl, "CFL number");
  cmd->add_option("--t-end", f.t_end, "Final time");
  cmd->add_option("--n-steps", f.n_steps, "Number of time steps (replaces --t-end)");
  cmd->add_option("--suite", f.suite, "Convergence suite");
  cmd->add_option("--out", f.out, "Output directory");
}

json user_document(const Flags& f) {
  json doc = json::object();
  if (!f.config.empty()) {
    doc = swe::read_json(f.config);
    if (!doc.is_object()) throw swe::Error(swe::ErrorCode::ConfigInvalid, "config file must hold a JSON object");
  }
  if (!f.experiment.empty()) doc["experiment"] = f.experiment;
  if (!f.op.empty()) doc["operator"] = f.op;
  if (f.n) doc["grid"]["n"] = *f.n;
  if (!f.bc.empty()) doc["bc"] = json{{"kind", f.bc}};
  if (f.delta) doc["hv"]["delta"] = *f.delta;
  if (f.cfl) doc["time"]["cfl"] = *f.cfl;
  if (f.t_end) {
    doc["time"]["t_end"] = *f.t_end;
    doc["time"].erase("n_steps");
  }
  if (f.n_steps) {
    doc["time"]["n_steps"] = *f.n_steps;
    doc["time"].erase("t_end");
  }
  if (!f.suite.empty()) doc["suite"] = f.suite;
  if (!f.out.empty()) doc["output_dir"] = f.out;
  return doc;
}

std::filesystem::path output_dir(const json& resolved) {
  if (resolved.contains("output_dir")) return resolved["output_dir"].get<std::string>();
  const char* root = std::getenv("SWE_OUT_DIR");
  const std::filesystem::path base = root != nullptr && *root != '\0' ? root : "out";
  return base / resolved["experiment"].get<std::string>();
}

int report_failure(const std::exception& e, const std::optional<std::filesystem::path>& dir) {
  const json record = swe::error_record(e);
  std::cerr << record.dump() << '\n';
  if (dir) {
    try {
      swe::write_json(*dir / "error.json", record);
    } catch (const std::exception&) {
    }
  }
  return swe::exit_code_for(e);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"High-order dual-pairing SBP shallow water solver"};
  app.require_subcommand(1);
  Flags run_flags;
  Flags validate_flags;
  CLI::App* run = app.add_subcommand("run", "Run an experiment and write its artifacts");
  add_flags(run, run_flags);
  CLI::App* validate = app.add_subcommand("validate", "Check a configuration and print it with defaults resolved");
  add_flags(validate, validate_flags);
  CLI::App* list = app.add_subcommand("list", "List the experiments");
  list->alias("list_experiments");
  CLI11_PARSE(app, argc, argv);

  if (list->parsed()) {
    json out = json::array();
    for (const auto& e : swe::experiment_registry()) {
      out.push_back({{"name", e.name},
                     {"description", e.description},
                     {"anchor", e.anchor},
                     {"defaults", swe::default_config(e.name)}});
    }
    std::cout << out.dump(2) << '\n';
    return 0;
  }

  const Flags& flags = run->parsed() ? run_flags : validate_flags;
  json resolved;
  try {
    resolved = swe::resolve_config(user_document(flags));
  } catch (const std::exception& e) {
    return report_failure(e, std::nullopt);
  }
  if (validate->parsed()) {
    std::cout << json{{"ok", true}, {"config", resolved}}.dump(2) << '\n';
    return 0;
  }
  const std::filesystem::path dir = output_dir(resolved);
  try {
    const json meta = swe::run_experiment(resolved, dir);
    std::cout << json{{"output_dir", dir.string()}, {"results", meta["results"]}}.dump(2) << '\n';
  } catch (const std::exception& e) {
    return report_failure(e, dir);
  }
  return 0;
}
