#pragma once

#include <cstddef>
#include <vector>

#include "swe/operators.hpp"

namespace swe {

struct State1D {
  Field h;
  Field u;

  std::size_t size() const { return h.size(); }
};

// Fields on an n x n doubly periodic grid, row-major with index i*n + j where
// i is the x-index and j the y-index.
struct State2D {
  std::size_t n = 0;
  Field h;
  Field u;
  Field v;

  std::size_t size() const { return h.size(); }
  std::size_t index(std::size_t i, std::size_t j) const { return i * n + j; }
};

enum class FluxKind { Linear, Nonlinear };

// Linear fluxes use the background fields U and H; a single entry is broadcast
// to every node.
struct FluxForm {
  FluxKind kind = FluxKind::Nonlinear;
  double g = 9.81;
  Field U;
  Field H;

  static FluxForm nonlinear(double g) { return FluxForm{FluxKind::Nonlinear, g, {}, {}}; }
  static FluxForm linear(double g, double U, double H) { return FluxForm{FluxKind::Linear, g, {U}, {H}}; }
  static FluxForm linear(double g, Field U, Field H) {
    return FluxForm{FluxKind::Linear, g, std::move(U), std::move(H)};
  }

  double U_at(std::size_t j) const { return U.size() == 1 ? U[0] : U[j]; }
  double H_at(std::size_t j) const { return H.size() == 1 ? H[0] : H[j]; }
  bool subcritical() const;
};

State1D zero_like(const State1D& s);
State2D zero_like(const State2D& s);

}  // namespace swe
