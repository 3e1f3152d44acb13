#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace swe {

using Field = std::vector<double>;

// Uniform 1D grid. Bounded grids hold N+1 nodes x_j = j*dx on [0, L]; periodic
// grids hold N distinct nodes, the node at x = L being identified with x = 0.
struct Grid1D {
  std::size_t n_points = 0;
  double dx = 0.0;
  double length = 0.0;
  bool periodic = false;
  std::vector<double> coords;

  static Grid1D bounded(std::size_t n_cells, double length);
  static Grid1D periodic_grid(std::size_t n_cells, double length);
  std::size_t n_cells() const { return periodic ? n_points : n_points - 1; }
};

enum class Family { Traditional, DP, DRP };
enum class Direction { Plus, Minus };

std::string to_string(Family family);

// Parses "sbp4", "dp6", "drp5" (case-insensitive) into a family and order.
struct OperatorName {
  Family family = Family::DP;
  int order = 4;
};
OperatorName parse_operator_name(const std::string& name);
std::string operator_name(Family family, int order);

struct BandRow {
  std::size_t first = 0;
  std::vector<double> coeffs;
};

// Banded matrix with dense boundary row blocks and a Toeplitz interior.
// Coefficients are stored already scaled by 1/dx.
class BandedOperator {
 public:
  BandedOperator() = default;
  BandedOperator(std::size_t n, int lo, std::vector<double> stencil, std::vector<BandRow> left,
                 std::vector<BandRow> right);
  static BandedOperator circulant(std::size_t n, int lo, std::vector<double> stencil);

  std::size_t size() const { return n_; }
  bool periodic() const { return periodic_; }
  int stencil_lo() const { return lo_; }
  const std::vector<double>& stencil() const { return stencil_; }
  const std::vector<BandRow>& left_rows() const { return left_; }
  // right_rows()[k] holds row n-1-k.
  const std::vector<BandRow>& right_rows() const { return right_; }

  double entry(std::size_t i, std::size_t j) const;
  void apply(const double* f, double* out) const;
  void apply_serial(const double* f, double* out) const;
  // Applies the operator along the first index of an n x m row-major block.
  void apply_columns(const double* f, double* out, std::size_t m) const;
  BandedOperator transposed() const;
  Eigen::MatrixXd to_dense() const;
  BandedOperator scaled(double factor) const;

 private:
  double row_dot(std::size_t i, const double* f) const;
  double interior_dot(std::size_t i, const double* f) const;
  void apply_periodic(const double* f, double* out) const;

  std::size_t n_ = 0;
  bool periodic_ = false;
  int lo_ = 0;
  std::vector<double> stencil_;
  std::vector<BandRow> left_;
  std::vector<BandRow> right_;
};

struct SbpOperatorPair {
  Family family = Family::DP;
  int interior_order = 0;
  int boundary_order = 0;
  bool periodic = false;
  Grid1D grid;
  BandedOperator d_plus;
  BandedOperator d_minus;
  Field p_weights;
  std::size_t boundary_width = 0;

  const BandedOperator& op(Direction direction) const {
    return direction == Direction::Plus ? d_plus : d_minus;
  }
  std::size_t size() const { return grid.n_points; }
};

// Contents of one coefficient data file (see data/operators/README.md).
struct OperatorData {
  Family family = Family::DP;
  int interior_order = 0;
  int boundary_order = 0;
  std::optional<double> drp_beta;
  std::vector<double> weights;
  int plus_lo = 0;
  std::vector<double> plus_stencil;
  int minus_lo = 0;
  std::vector<double> minus_stencil;
  std::vector<std::pair<std::size_t, BandRow>> plus_rows;
  std::vector<std::pair<std::size_t, BandRow>> minus_rows;
};

OperatorData parse_operator_data(const std::string& text);
// Built-in data for bounded pairs; throws UnsupportedOrder if absent.
const OperatorData& builtin_operator_data(Family family, int order);
// Reads a data file and rejects it unless the resulting pair passes verify_pair.
OperatorData load_operator_file(const std::string& path);

SbpOperatorPair build_operator_pair(Family family, int interior_order, bool periodic,
                                    const Grid1D& grid);
SbpOperatorPair build_operator_pair(const OperatorData& data, const Grid1D& grid);

// Periodic first-derivative stencils (unit spacing) for the given family and order.
struct Stencil {
  int lo = 0;
  std::vector<double> coeffs;
};
Stencil central_stencil(int order);
Stencil periodic_upwind_stencil(Family family, int order);
Stencil convolve(const Stencil& a, const Stencil& b);

Field apply(const SbpOperatorPair& pair, Direction direction, const Field& f);
double integrate(const SbpOperatorPair& pair, const Field& f);

struct VerificationReport {
  double sbp_identity = 0.0;
  double q_residual = 0.0;
  double q_tolerance = 0.0;
  double s_plus_max = 0.0;
  double s_minus_min = 0.0;
  std::vector<double> interior_accuracy;
  std::vector<double> boundary_accuracy;
  std::vector<double> quadrature;
  bool all_pass = false;
  std::string summary() const;
};

VerificationReport verify_pair(const SbpOperatorPair& pair);

}  // namespace swe
