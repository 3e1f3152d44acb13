#include "swe/state.hpp"

#include <cmath>

namespace swe {

bool FluxForm::subcritical() const {
  if (kind == FluxKind::Nonlinear) return true;
  const std::size_t n = std::max(U.size(), H.size());
  for (std::size_t j = 0; j < n; ++j) {
    const double h = H_at(j);
    if (!(h > 0.0) || std::abs(U_at(j)) >= std::sqrt(g * h)) return false;
  }
  return true;
}

State1D zero_like(const State1D& s) { return State1D{Field(s.h.size(), 0.0), Field(s.u.size(), 0.0)}; }

State2D zero_like(const State2D& s) {
  return State2D{s.n, Field(s.h.size(), 0.0), Field(s.u.size(), 0.0), Field(s.v.size(), 0.0)};
}

}  // namespace swe
