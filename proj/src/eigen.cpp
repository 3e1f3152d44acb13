#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "swe/analysis.hpp"
#include "swe/error.hpp"

namespace swe {

namespace {

void check_dimension(std::size_t dim) {
  if (dim > kMaxDenseDimension) {
    throw Error(ErrorCode::DimensionTooLarge,
                "dense dimension " + std::to_string(dim) + " exceeds " + std::to_string(kMaxDenseDimension));
  }
}

}  // namespace

Eigen::MatrixXd assemble_linear_matrix(const LinearMap& map, std::size_t dim) {
  check_dimension(dim);
  const long n = static_cast<long>(dim);
  const Field zero(dim, 0.0);
  const Field offset = map(zero);
  if (offset.size() != dim) throw Error(ErrorCode::LengthMismatch, "map changes the dimension");
  Eigen::MatrixXd a(n, n);
#pragma omp parallel for schedule(dynamic)
  for (long j = 0; j < n; ++j) {
    Field e(dim, 0.0);
    e[static_cast<std::size_t>(j)] = 1.0;
    const Field col = map(e);
    for (long i = 0; i < n; ++i) a(i, j) = col[static_cast<std::size_t>(i)] - offset[static_cast<std::size_t>(i)];
  }
  return a;
}

Eigen::MatrixXd fd_jacobian(const LinearMap& map, const Field& base, double eps) {
  const std::size_t dim = base.size();
  check_dimension(dim);
  if (!(eps > 0.0)) throw Error(ErrorCode::ConfigInvalid, "eps must be positive");
  const long n = static_cast<long>(dim);
  Eigen::MatrixXd a(n, n);
#pragma omp parallel for schedule(dynamic)
  for (long j = 0; j < n; ++j) {
    Field qp = base;
    Field qm = base;
    qp[static_cast<std::size_t>(j)] += eps;
    qm[static_cast<std::size_t>(j)] -= eps;
    const Field fp = map(qp);
    const Field fm = map(qm);
    for (long i = 0; i < n; ++i) {
      a(i, j) = (fp[static_cast<std::size_t>(i)] - fm[static_cast<std::size_t>(i)]) / (2.0 * eps);
    }
  }
  return a;
}

EigenReport eigenvalues(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) throw Error(ErrorCode::ShapeMismatch, "matrix is not square");
  check_dimension(static_cast<std::size_t>(a.rows()));
  if (!a.allFinite()) throw Error(ErrorCode::NonFinite, "matrix has non-finite entries");
  EigenReport r;
  r.n = static_cast<std::size_t>(a.rows());
  if (r.n == 0) return r;
  Eigen::EigenSolver<Eigen::MatrixXd> es(a, false);
  if (es.info() != Eigen::Success) throw Error(ErrorCode::NoConvergence, "QR iteration did not converge");
  const Eigen::VectorXcd ev = es.eigenvalues();
  r.eigenvalues.assign(ev.data(), ev.data() + ev.size());
  std::sort(r.eigenvalues.begin(), r.eigenvalues.end(), [](const auto& x, const auto& y) {
    return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
  });
  r.max_real = -std::numeric_limits<double>::infinity();
  for (const auto& z : r.eigenvalues) {
    r.max_real = std::max(r.max_real, z.real());
    r.max_abs_real = std::max(r.max_abs_real, std::abs(z.real()));
  }
  r.norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  return r;
}

}  // namespace swe
