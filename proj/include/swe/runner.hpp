#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "swe/experiments.hpp"

namespace swe {

struct ExperimentInfo {
  std::string name;
  std::string description;
  std::string anchor;
};

const std::vector<ExperimentInfo>& experiment_registry();

// Fully resolved run configuration. Grid sizes follow the tables: for bounded
// 1D grids n counts grid points (n - 1 cells), for periodic 1D grids n counts
// distinct points, for 2D grids n is the number of distinct points per direction.
struct RunConfig {
  std::string experiment;
  OperatorChoice op;
  std::size_t n = 0;
  double g = 9.81;
  double f_c = 0.0;
  double U = 0.0;
  double H = 1.0;
  FluxKind flux = FluxKind::Nonlinear;
  BcKind bc = BcKind::MassFlux;
  HvChoice hv;
  double cfl = 0.3;
  std::optional<double> t_end;
  std::optional<long> n_steps;
  long sample_stride = 0;
  long snapshot_stride = 0;
  std::string suite;
  std::vector<std::size_t> levels;
  std::string output_dir;
};

// Merges the experiment defaults under the user document, rejects unknown keys
// and ill-typed or out-of-range values (ConfigInvalid), and returns the resolved
// document.
nlohmann::json resolve_config(const nlohmann::json& user);
RunConfig config_from_json(const nlohmann::json& resolved);
nlohmann::json default_config(const std::string& experiment);

std::string operator_label(const OperatorChoice& op);
OperatorChoice parse_operator_choice(const std::string& name);

// Runs a resolved configuration, writes its artifacts under out_dir and returns
// the metadata document that is also written to out_dir/metadata.json.
nlohmann::json run_experiment(const nlohmann::json& resolved, const std::filesystem::path& out_dir);

// {"error": code name, "message": text} for an exception escaping a run.
nlohmann::json error_record(const std::exception& e);
int exit_code_for(const std::exception& e);

}  // namespace swe
