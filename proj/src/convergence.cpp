#include <cmath>

#include "swe/analysis.hpp"
#include "swe/error.hpp"

namespace swe {

double weighted_l2(const Field& error, const Field& weights) {
  if (error.size() != weights.size()) throw Error(ErrorCode::LengthMismatch, "error and weights differ in length");
  double s = 0.0;
  for (std::size_t j = 0; j < error.size(); ++j) s += weights[j] * error[j] * error[j];
  return std::sqrt(s);
}

double weighted_l2(const Field& error, double cell_weight) {
  double s = 0.0;
  for (double e : error) s += e * e;
  return std::sqrt(cell_weight * s);
}

ConvergenceTable make_table(std::vector<std::string> names, const std::vector<std::size_t>& m,
                            const std::vector<std::vector<double>>& errors) {
  if (m.size() != errors.size()) throw Error(ErrorCode::LengthMismatch, "one error row per level is required");
  ConvergenceTable table;
  table.names = std::move(names);
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (errors[i].size() != table.names.size()) {
      throw Error(ErrorCode::LengthMismatch, "error row width does not match the column names");
    }
    if (i > 0 && !(m[i] > m[i - 1])) throw Error(ErrorCode::ConfigInvalid, "levels must increase strictly");
    ConvergenceRow row{m[i], errors[i], {}};
    if (i > 0) {
      const double ratio = std::log(static_cast<double>(m[i]) / static_cast<double>(m[i - 1]));
      for (std::size_t k = 0; k < errors[i].size(); ++k) {
        row.rates.push_back(std::log(errors[i - 1][k] / errors[i][k]) / ratio);
      }
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

ConvergenceTable convergence_study(const std::function<std::vector<double>(std::size_t)>& runner,
                                   const std::vector<std::size_t>& levels, std::vector<std::string> names) {
  std::vector<std::vector<double>> errors;
  for (std::size_t m : levels) {
    try {
      errors.push_back(runner(m));
    } catch (const std::exception& e) {
      throw Error(ErrorCode::RunnerFailure, "level " + std::to_string(m) + " failed: " + e.what());
    }
  }
  return make_table(std::move(names), levels, errors);
}

}  // namespace swe
