#include "swe/timestep.hpp"

#include <algorithm>

namespace swe {

double compute_dt(const State1D& state0, const Grid1D& grid, double g, double cfl) {
  double speed = 0.0;
  for (std::size_t j = 0; j < state0.size(); ++j) {
    if (!(state0.h[j] > 0.0)) throw Error(ErrorCode::NonPositiveDepth, "h <= 0 at node " + std::to_string(j));
    speed = std::max(speed, std::abs(state0.u[j]) + std::sqrt(g * state0.h[j]));
  }
  return cfl * grid.dx / speed;
}

double compute_dt(const State2D& state0, double dx, double g, double cfl) {
  double speed = 0.0;
  for (std::size_t j = 0; j < state0.size(); ++j) {
    if (!(state0.h[j] > 0.0)) throw Error(ErrorCode::NonPositiveDepth, "h <= 0 at node " + std::to_string(j));
    speed = std::max(speed, std::hypot(state0.u[j], state0.v[j]) + std::sqrt(g * state0.h[j]));
  }
  return cfl * dx / speed;
}

}  // namespace swe
