#include "swe/operators.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "swe/error.hpp"

namespace swe {

namespace detail {
const std::map<std::string, std::string>& operator_data_sources();
}

Grid1D Grid1D::bounded(std::size_t n_cells, double length) {
  if (n_cells < 1 || !(length > 0.0)) {
    throw Error(ErrorCode::GridTooSmall, "bounded grid needs n_cells >= 1 and length > 0");
  }
  Grid1D g;
  g.n_points = n_cells + 1;
  g.dx = length / static_cast<double>(n_cells);
  g.length = length;
  g.periodic = false;
  g.coords.resize(g.n_points);
  for (std::size_t j = 0; j < g.n_points; ++j) g.coords[j] = static_cast<double>(j) * g.dx;
  g.coords.back() = length;
  return g;
}

Grid1D Grid1D::periodic_grid(std::size_t n_cells, double length) {
  if (n_cells < 2 || !(length > 0.0)) {
    throw Error(ErrorCode::GridTooSmall, "periodic grid needs n_cells >= 2 and length > 0");
  }
  Grid1D g;
  g.n_points = n_cells;
  g.dx = length / static_cast<double>(n_cells);
  g.length = length;
  g.periodic = true;
  g.coords.resize(g.n_points);
  for (std::size_t j = 0; j < g.n_points; ++j) g.coords[j] = static_cast<double>(j) * g.dx;
  return g;
}

std::string to_string(Family family) {
  switch (family) {
    case Family::Traditional: return "sbp";
    case Family::DP: return "dp";
    case Family::DRP: return "drp";
  }
  return "?";
}

std::string operator_name(Family family, int order) {
  return to_string(family) + std::to_string(order);
}

OperatorName parse_operator_name(const std::string& name) {
  std::string s;
  for (char c : name) s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  std::size_t k = 0;
  while (k < s.size() && std::isalpha(static_cast<unsigned char>(s[k]))) ++k;
  const std::string fam = s.substr(0, k);
  const std::string num = s.substr(k);
  OperatorName out;
  if (fam == "sbp" || fam == "traditional") {
    out.family = Family::Traditional;
  } else if (fam == "dp") {
    out.family = Family::DP;
  } else if (fam == "drp") {
    out.family = Family::DRP;
  } else {
    throw Error(ErrorCode::UnsupportedOrder, "unknown operator family in '" + name + "'");
  }
  if (num.empty() || !std::all_of(num.begin(), num.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
    throw Error(ErrorCode::UnsupportedOrder, "missing order in '" + name + "'");
  }
  out.order = std::stoi(num);
  return out;
}

// ---------------------------------------------------------------------------
// BandedOperator

BandedOperator::BandedOperator(std::size_t n, int lo, std::vector<double> stencil,
                               std::vector<BandRow> left, std::vector<BandRow> right)
    : n_(n), periodic_(false), lo_(lo), stencil_(std::move(stencil)), left_(std::move(left)),
      right_(std::move(right)) {
  const long hi = lo_ + static_cast<long>(stencil_.size()) - 1;
  if (left_.size() + right_.size() > n_) {
    throw Error(ErrorCode::GridTooSmall, "boundary blocks overlap");
  }
  if (left_.size() + right_.size() < n_) {
    if (static_cast<long>(left_.size()) + lo_ < 0 ||
        static_cast<long>(n_ - right_.size()) - 1 + hi > static_cast<long>(n_) - 1) {
      throw Error(ErrorCode::GridTooSmall, "interior stencil reaches outside the grid");
    }
  }
  for (std::size_t k = 0; k < left_.size(); ++k) {
    if (left_[k].first + left_[k].coeffs.size() > n_) {
      throw Error(ErrorCode::GridTooSmall, "boundary row exceeds the grid");
    }
  }
  for (std::size_t k = 0; k < right_.size(); ++k) {
    if (right_[k].first + right_[k].coeffs.size() > n_) {
      throw Error(ErrorCode::GridTooSmall, "boundary row exceeds the grid");
    }
  }
}

BandedOperator BandedOperator::circulant(std::size_t n, int lo, std::vector<double> stencil) {
  if (stencil.size() > n) throw Error(ErrorCode::GridTooSmall, "stencil wider than periodic grid");
  BandedOperator op;
  op.n_ = n;
  op.periodic_ = true;
  op.lo_ = lo;
  op.stencil_ = std::move(stencil);
  return op;
}

double BandedOperator::entry(std::size_t i, std::size_t j) const {
  const long len = static_cast<long>(stencil_.size());
  if (periodic_) {
    const long n = static_cast<long>(n_);
    long d = (static_cast<long>(j) - static_cast<long>(i) - lo_) % n;
    if (d < 0) d += n;
    return d < len ? stencil_[static_cast<std::size_t>(d)] : 0.0;
  }
  const BandRow* row = nullptr;
  if (i < left_.size()) {
    row = &left_[i];
  } else if (i >= n_ - right_.size()) {
    row = &right_[n_ - 1 - i];
  }
  if (row != nullptr) {
    if (j < row->first || j >= row->first + row->coeffs.size()) return 0.0;
    return row->coeffs[j - row->first];
  }
  const long d = static_cast<long>(j) - static_cast<long>(i) - lo_;
  return (d >= 0 && d < len) ? stencil_[static_cast<std::size_t>(d)] : 0.0;
}

double BandedOperator::row_dot(std::size_t i, const double* f) const {
  const BandRow& row = i < left_.size() ? left_[i] : right_[n_ - 1 - i];
  double s = 0.0;
  for (std::size_t k = 0; k < row.coeffs.size(); ++k) s += row.coeffs[k] * f[row.first + k];
  return s;
}

double BandedOperator::interior_dot(std::size_t i, const double* f) const {
  const long start = static_cast<long>(i) + lo_;
  const std::size_t len = stencil_.size();
  double s = 0.0;
  if (start >= 0 && start + static_cast<long>(len) <= static_cast<long>(n_)) {
    const double* fp = f + start;
    for (std::size_t k = 0; k < len; ++k) s += stencil_[k] * fp[k];
    return s;
  }
  const long n = static_cast<long>(n_);
  for (std::size_t k = 0; k < len; ++k) {
    long idx = (start + static_cast<long>(k)) % n;
    if (idx < 0) idx += n;
    s += stencil_[k] * f[idx];
  }
  return s;
}

void BandedOperator::apply_periodic(const double* f, double* out) const {
  const std::size_t len = stencil_.size();
  const long n = static_cast<long>(n_);
  thread_local std::vector<double> ext;
  ext.resize(n_ + len);
  for (std::size_t k = 0; k + 1 < n_ + len; ++k) {
    long idx = (static_cast<long>(k) + lo_) % n;
    if (idx < 0) idx += n;
    ext[k] = f[idx];
  }
  const double* s = stencil_.data();
  for (std::size_t i = 0; i < n_; ++i) {
    const double* fp = ext.data() + i;
    double acc = 0.0;
    for (std::size_t k = 0; k < len; ++k) acc += s[k] * fp[k];
    out[i] = acc;
  }
}

void BandedOperator::apply_columns(const double* f, double* out, std::size_t m) const {
  const long nl = static_cast<long>(n_);
  auto axpy = [m](double c, const double* src, double* dst) {
    for (std::size_t j = 0; j < m; ++j) dst[j] += c * src[j];
  };
#pragma omp parallel for schedule(static)
  for (long il = 0; il < nl; ++il) {
    const auto i = static_cast<std::size_t>(il);
    double* dst = out + i * m;
    std::fill(dst, dst + m, 0.0);
    if (periodic_ || (i >= left_.size() && i < n_ - right_.size())) {
      for (std::size_t k = 0; k < stencil_.size(); ++k) {
        long c = il + lo_ + static_cast<long>(k);
        if (periodic_) c = ((c % nl) + nl) % nl;
        axpy(stencil_[k], f + static_cast<std::size_t>(c) * m, dst);
      }
    } else {
      const BandRow& row = i < left_.size() ? left_[i] : right_[n_ - 1 - i];
      for (std::size_t k = 0; k < row.coeffs.size(); ++k) axpy(row.coeffs[k], f + (row.first + k) * m, dst);
    }
  }
}

void BandedOperator::apply(const double* f, double* out) const {
  if (periodic_ && n_ <= 8192) {
    apply_periodic(f, out);
    return;
  }
  const std::size_t r = left_.size();
  const std::size_t rr = right_.size();
  for (std::size_t i = 0; i < r; ++i) out[i] = row_dot(i, f);
  const long begin = static_cast<long>(r);
  const long end = static_cast<long>(n_ - rr);
#pragma omp parallel for schedule(static) if (end - begin > 8192)
  for (long i = begin; i < end; ++i) out[i] = interior_dot(static_cast<std::size_t>(i), f);
  for (std::size_t i = n_ - rr; i < n_; ++i) out[i] = row_dot(i, f);
}

void BandedOperator::apply_serial(const double* f, double* out) const {
  if (periodic_) {
    apply_periodic(f, out);
    return;
  }
  const std::size_t r = left_.size();
  const std::size_t rr = right_.size();
  for (std::size_t i = 0; i < r; ++i) out[i] = row_dot(i, f);
  for (std::size_t i = r; i < n_ - rr; ++i) out[i] = interior_dot(i, f);
  for (std::size_t i = n_ - rr; i < n_; ++i) out[i] = row_dot(i, f);
}

namespace {

BandRow trimmed_row(const std::vector<double>& dense_row, std::size_t offset) {
  std::size_t a = 0;
  std::size_t b = dense_row.size();
  while (a < b && dense_row[a] == 0.0) ++a;
  while (b > a && dense_row[b - 1] == 0.0) --b;
  BandRow row;
  if (a == b) {
    row.first = offset;
    return row;
  }
  row.first = offset + a;
  row.coeffs.assign(dense_row.begin() + static_cast<long>(a), dense_row.begin() + static_cast<long>(b));
  return row;
}

}  // namespace

BandedOperator BandedOperator::transposed() const {
  std::vector<double> rev(stencil_.rbegin(), stencil_.rend());
  const int len = static_cast<int>(stencil_.size());
  const int lo_t = -(lo_ + len - 1);
  if (periodic_) return circulant(n_, lo_t, rev);

  // Rows of the transpose that touch a boundary row of the original.
  std::size_t reach = 0;
  for (const auto& row : left_) reach = std::max(reach, row.first + row.coeffs.size());
  std::size_t reach_r = 0;
  for (const auto& row : right_) reach_r = std::max(reach_r, n_ - row.first);
  std::size_t rt = std::max(reach, left_.size() + static_cast<std::size_t>(std::max(0, lo_ + len - 1))) + 1;
  std::size_t rrt = std::max(reach_r, right_.size() + static_cast<std::size_t>(std::max(0, -lo_))) + 1;
  if (rt + rrt + static_cast<std::size_t>(len) > n_) {
    rt = n_;
    rrt = 0;
  }
  const std::size_t span = static_cast<std::size_t>(len) + left_.size() + right_.size() + rt + rrt;
  std::vector<BandRow> left_t;
  for (std::size_t j = 0; j < rt; ++j) {
    const std::size_t a = j > span ? j - span : 0;
    const std::size_t b = std::min(n_, j + span + 1);
    std::vector<double> dense(b - a);
    for (std::size_t i = a; i < b; ++i) dense[i - a] = entry(i, j);
    left_t.push_back(trimmed_row(dense, a));
  }
  std::vector<BandRow> right_t;
  for (std::size_t k = 0; k < rrt; ++k) {
    const std::size_t j = n_ - 1 - k;
    const std::size_t a = j > span ? j - span : 0;
    const std::size_t b = std::min(n_, j + span + 1);
    std::vector<double> dense(b - a);
    for (std::size_t i = a; i < b; ++i) dense[i - a] = entry(i, j);
    right_t.push_back(trimmed_row(dense, a));
  }
  return BandedOperator(n_, lo_t, rev, left_t, right_t);
}

Eigen::MatrixXd BandedOperator::to_dense() const {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<long>(n_), static_cast<long>(n_));
  for (std::size_t i = 0; i < n_; ++i) {
    if (!periodic_ && (i < left_.size() || i >= n_ - right_.size())) {
      const BandRow& row = i < left_.size() ? left_[i] : right_[n_ - 1 - i];
      for (std::size_t k = 0; k < row.coeffs.size(); ++k) {
        a(static_cast<long>(i), static_cast<long>(row.first + k)) += row.coeffs[k];
      }
      continue;
    }
    const long n = static_cast<long>(n_);
    for (std::size_t k = 0; k < stencil_.size(); ++k) {
      long j = static_cast<long>(i) + lo_ + static_cast<long>(k);
      if (periodic_) j = ((j % n) + n) % n;
      a(static_cast<long>(i), j) += stencil_[k];
    }
  }
  return a;
}

BandedOperator BandedOperator::scaled(double factor) const {
  BandedOperator out = *this;
  for (double& c : out.stencil_) c *= factor;
  for (auto& row : out.left_) for (double& c : row.coeffs) c *= factor;
  for (auto& row : out.right_) for (double& c : row.coeffs) c *= factor;
  return out;
}

// ---------------------------------------------------------------------------
// Stencils

Stencil central_stencil(int order) {
  if (order < 2 || order % 2 != 0 || order > 12) {
    throw Error(ErrorCode::UnsupportedOrder, "central stencils exist for even orders 2..12");
  }
  const int s = order / 2;
  auto fact = [](int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
  };
  Stencil st;
  st.lo = -s;
  st.coeffs.assign(static_cast<std::size_t>(2 * s + 1), 0.0);
  for (int k = 1; k <= s; ++k) {
    const double a = ((k % 2 == 1) ? 1.0 : -1.0) * fact(s) * fact(s) / (k * fact(s - k) * fact(s + k));
    st.coeffs[static_cast<std::size_t>(s + k)] = a;
    st.coeffs[static_cast<std::size_t>(s - k)] = -a;
  }
  return st;
}

Stencil convolve(const Stencil& a, const Stencil& b) {
  Stencil c;
  c.lo = a.lo + b.lo;
  c.coeffs.assign(a.coeffs.size() + b.coeffs.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.coeffs.size(); ++i) {
    for (std::size_t j = 0; j < b.coeffs.size(); ++j) c.coeffs[i + j] += a.coeffs[i] * b.coeffs[j];
  }
  return c;
}

namespace {

Stencil add(const Stencil& a, const Stencil& b, double scale_b) {
  Stencil c;
  c.lo = std::min(a.lo, b.lo);
  const int hi = std::max(a.lo + static_cast<int>(a.coeffs.size()), b.lo + static_cast<int>(b.coeffs.size()));
  c.coeffs.assign(static_cast<std::size_t>(hi - c.lo), 0.0);
  for (std::size_t i = 0; i < a.coeffs.size(); ++i) c.coeffs[static_cast<std::size_t>(a.lo - c.lo) + i] += a.coeffs[i];
  for (std::size_t i = 0; i < b.coeffs.size(); ++i) c.coeffs[static_cast<std::size_t>(b.lo - c.lo) + i] += scale_b * b.coeffs[i];
  return c;
}

Stencil even_difference(int m) {
  // (-1)^m delta^{2m}, i.e. the stencil of (Delta^m)^T Delta^m.
  Stencil d{-1, {-1.0, 2.0, -1.0}};
  Stencil out{0, {1.0}};
  for (int k = 0; k < m; ++k) out = convolve(out, d);
  return out;
}

Stencil trim(Stencil s) {
  while (!s.coeffs.empty() && s.coeffs.front() == 0.0) {
    s.coeffs.erase(s.coeffs.begin());
    ++s.lo;
  }
  while (!s.coeffs.empty() && s.coeffs.back() == 0.0) s.coeffs.pop_back();
  return s;
}

}  // namespace

Stencil periodic_upwind_stencil(Family family, int order) {
  if (family == Family::Traditional) return central_stencil(order);
  if (order < 1 || order > 7) throw Error(ErrorCode::UnsupportedOrder, "upwind orders 1..7 are supported");
  const int m = order % 2 == 0 ? order / 2 + 1 : (order + 1) / 2;
  const Stencil central = central_stencil(order % 2 == 0 ? order : order + 1);
  const double c = std::abs(central_stencil(2 * m).coeffs.front());
  // D+ = central - (c/dx) (Delta^m)^T Delta^m
  Stencil out = add(central, even_difference(m), -c);
  if (family == Family::DRP) {
    const OperatorData& data = builtin_operator_data(Family::DRP, order);
    if (!data.drp_beta) throw Error(ErrorCode::DataInvalid, "DRP data without drp_beta");
    const Stencil skew = convolve(even_difference(m), Stencil{-1, {-0.5, 0.0, 0.5}});
    out = add(out, skew, *data.drp_beta);
  }
  return trim(out);
}

// ---------------------------------------------------------------------------
// Coefficient data

OperatorData parse_operator_data(const std::string& text) {
  std::istringstream lines(text);
  std::string stream_text;
  std::string line;
  while (std::getline(lines, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    stream_text += line + "\n";
  }
  std::istringstream in(stream_text);
  OperatorData d;
  bool have_family = false;
  bool have_order = false;
  auto need = [&](bool ok, const std::string& what) {
    if (!ok) throw Error(ErrorCode::DataInvalid, "malformed operator data near '" + what + "'");
  };
  auto read_values = [&](std::size_t count, const std::string& what) {
    std::vector<double> v(count);
    for (auto& x : v) need(static_cast<bool>(in >> x), what);
    return v;
  };
  auto read_rows = [&](const std::string& what) {
    std::size_t count = 0;
    need(static_cast<bool>(in >> count), what);
    std::vector<std::pair<std::size_t, BandRow>> rows;
    for (std::size_t k = 0; k < count; ++k) {
      std::size_t i = 0;
      std::size_t first = 0;
      std::size_t len = 0;
      need(static_cast<bool>(in >> i >> first >> len), what);
      BandRow row;
      row.first = first;
      row.coeffs = read_values(len, what);
      need(i == k, what + " (rows must be listed in order)");
      rows.emplace_back(i, row);
    }
    return rows;
  };
  std::string key;
  while (in >> key) {
    if (key == "family") {
      std::string fam;
      need(static_cast<bool>(in >> fam), key);
      if (fam == "sbp") {
        d.family = Family::Traditional;
      } else if (fam == "dp") {
        d.family = Family::DP;
      } else if (fam == "drp") {
        d.family = Family::DRP;
      } else {
        throw Error(ErrorCode::DataInvalid, "unknown family '" + fam + "'");
      }
      have_family = true;
    } else if (key == "interior_order") {
      need(static_cast<bool>(in >> d.interior_order), key);
      have_order = true;
    } else if (key == "boundary_order") {
      need(static_cast<bool>(in >> d.boundary_order), key);
    } else if (key == "drp_beta") {
      double b = 0.0;
      need(static_cast<bool>(in >> b), key);
      d.drp_beta = b;
    } else if (key == "weights") {
      std::size_t count = 0;
      need(static_cast<bool>(in >> count), key);
      d.weights = read_values(count, key);
    } else if (key == "interior_plus" || key == "interior_minus") {
      int lo = 0;
      std::size_t len = 0;
      need(static_cast<bool>(in >> lo >> len), key);
      auto values = read_values(len, key);
      if (key == "interior_plus") {
        d.plus_lo = lo;
        d.plus_stencil = std::move(values);
      } else {
        d.minus_lo = lo;
        d.minus_stencil = std::move(values);
      }
    } else if (key == "block_plus") {
      d.plus_rows = read_rows(key);
    } else if (key == "block_minus") {
      d.minus_rows = read_rows(key);
    } else {
      throw Error(ErrorCode::DataInvalid, "unknown key '" + key + "'");
    }
  }
  need(have_family && have_order, "family/interior_order");
  need(!d.plus_stencil.empty() && !d.minus_stencil.empty(), "interior stencils");
  need(!d.weights.empty(), "weights");
  for (double w : d.weights) need(w > 0.0, "weights (must be positive)");
  return d;
}

namespace {

std::size_t reference_cells(const OperatorData& d) {
  const std::size_t r = std::max(d.plus_rows.size(), d.minus_rows.size());
  const std::size_t w = std::max(d.plus_stencil.size(), d.minus_stencil.size());
  return 4 * (r + w);
}

void validate_data(const OperatorData& d, const std::string& label) {
  const Grid1D grid = Grid1D::bounded(reference_cells(d), 1.0);
  const SbpOperatorPair pair = build_operator_pair(d, grid);
  const VerificationReport report = verify_pair(pair);
  if (!report.all_pass) {
    throw Error(ErrorCode::DataInvalid, "operator data '" + label + "' fails verification: " + report.summary());
  }
}

}  // namespace

const OperatorData& builtin_operator_data(Family family, int order) {
  static std::mutex mutex;
  static std::map<std::string, OperatorData> cache;
  const std::string name = operator_name(family, order);
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(name);
  if (it != cache.end()) return it->second;
  const auto& sources = detail::operator_data_sources();
  auto src = sources.find(name);
  if (src == sources.end()) {
    throw Error(ErrorCode::UnsupportedOrder, "no coefficient data for " + name);
  }
  OperatorData d = parse_operator_data(src->second);
  validate_data(d, name);
  return cache.emplace(name, std::move(d)).first->second;
}

OperatorData load_operator_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  OperatorData d = parse_operator_data(ss.str());
  validate_data(d, path);
  return d;
}

// ---------------------------------------------------------------------------
// Pair construction

namespace {

int default_boundary_order(int q) { return q % 2 == 0 ? q / 2 : (q - 1) / 2; }

std::vector<BandRow> scaled_rows(const std::vector<std::pair<std::size_t, BandRow>>& rows, double s) {
  std::vector<BandRow> out;
  for (const auto& [i, row] : rows) {
    BandRow r = row;
    for (double& c : r.coeffs) c *= s;
    out.push_back(std::move(r));
  }
  return out;
}

// Right boundary rows of one operator from the left rows of its dual:
// D+[N-i][N-j] = -D-[i][j].
std::vector<BandRow> mirrored_rows(const std::vector<BandRow>& dual_left, std::size_t n) {
  std::vector<BandRow> out;
  for (const auto& row : dual_left) {
    BandRow r;
    const std::size_t last = row.first + row.coeffs.size() - 1;
    r.first = n - 1 - last;
    r.coeffs.assign(row.coeffs.rbegin(), row.coeffs.rend());
    for (double& c : r.coeffs) c = -c;
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace

SbpOperatorPair build_operator_pair(const OperatorData& d, const Grid1D& grid) {
  if (grid.periodic) throw Error(ErrorCode::DataInvalid, "coefficient data describes bounded pairs");
  const std::size_t n = grid.n_points;
  const std::size_t r = std::max(d.plus_rows.size(), d.minus_rows.size());
  const std::size_t w = std::max(d.plus_stencil.size(), d.minus_stencil.size());
  if (n < 2 * r + w) {
    throw Error(ErrorCode::GridTooSmall, "grid has " + std::to_string(n) + " points, closures need at least " +
                                             std::to_string(2 * r + w));
  }
  const double s = 1.0 / grid.dx;
  std::vector<BandRow> plus_left = scaled_rows(d.plus_rows, s);
  std::vector<BandRow> minus_left = scaled_rows(d.minus_rows, s);
  std::vector<BandRow> plus_right = mirrored_rows(minus_left, n);
  std::vector<BandRow> minus_right = mirrored_rows(plus_left, n);
  std::vector<double> ps = d.plus_stencil;
  std::vector<double> ms = d.minus_stencil;
  for (double& c : ps) c *= s;
  for (double& c : ms) c *= s;

  SbpOperatorPair pair;
  pair.family = d.family;
  pair.interior_order = d.interior_order;
  pair.boundary_order = d.boundary_order > 0 ? d.boundary_order : default_boundary_order(d.interior_order);
  pair.periodic = false;
  pair.grid = grid;
  pair.d_plus = BandedOperator(n, d.plus_lo, ps, plus_left, plus_right);
  pair.d_minus = BandedOperator(n, d.minus_lo, ms, minus_left, minus_right);
  pair.p_weights.assign(n, grid.dx);
  for (std::size_t i = 0; i < d.weights.size(); ++i) {
    pair.p_weights[i] = d.weights[i] * grid.dx;
    pair.p_weights[n - 1 - i] = d.weights[i] * grid.dx;
  }
  pair.boundary_width = r;
  return pair;
}

SbpOperatorPair build_operator_pair(Family family, int interior_order, bool periodic, const Grid1D& grid) {
  if (periodic != grid.periodic) {
    throw Error(ErrorCode::GridTooSmall, "periodic flag does not match the grid");
  }
  if (!periodic) {
    if (family == Family::Traditional ? (interior_order != 4 && interior_order != 6)
                                      : (interior_order < 4 || interior_order > 6)) {
      throw Error(ErrorCode::UnsupportedOrder, "no bounded " + operator_name(family, interior_order) + " pair");
    }
    return build_operator_pair(builtin_operator_data(family, interior_order), grid);
  }
  if (family == Family::Traditional && interior_order % 2 != 0) {
    throw Error(ErrorCode::UnsupportedOrder, "traditional operators have even interior order");
  }
  if (family == Family::DRP && (interior_order < 4 || interior_order > 6)) {
    throw Error(ErrorCode::UnsupportedOrder, "DRP pairs exist for orders 4..6");
  }
  const Stencil plus = family == Family::Traditional ? central_stencil(interior_order)
                                                     : periodic_upwind_stencil(family, interior_order);
  const std::size_t n = grid.n_points;
  if (plus.coeffs.size() > n) throw Error(ErrorCode::GridTooSmall, "stencil wider than the periodic grid");
  std::vector<double> pc = plus.coeffs;
  for (double& c : pc) c /= grid.dx;
  std::vector<double> mc(pc.rbegin(), pc.rend());
  for (double& c : mc) c = -c;
  const int minus_lo = -(plus.lo + static_cast<int>(plus.coeffs.size()) - 1);

  SbpOperatorPair pair;
  pair.family = family;
  pair.interior_order = interior_order;
  pair.boundary_order = default_boundary_order(interior_order);
  pair.periodic = true;
  pair.grid = grid;
  pair.d_plus = BandedOperator::circulant(n, plus.lo, pc);
  pair.d_minus = family == Family::Traditional ? pair.d_plus : BandedOperator::circulant(n, minus_lo, mc);
  pair.p_weights.assign(n, grid.dx);
  pair.boundary_width = 0;
  return pair;
}

Field apply(const SbpOperatorPair& pair, Direction direction, const Field& f) {
  if (f.size() != pair.size()) throw Error(ErrorCode::LengthMismatch, "field length does not match grid");
  Field out(f.size());
  pair.op(direction).apply(f.data(), out.data());
  return out;
}

double integrate(const SbpOperatorPair& pair, const Field& f) {
  if (f.size() != pair.size()) throw Error(ErrorCode::LengthMismatch, "field length does not match grid");
  double s = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) s += pair.p_weights[j] * f[j];
  return s;
}

// ---------------------------------------------------------------------------
// Verification

std::string VerificationReport::summary() const {
  std::ostringstream os;
  os << "sbp_identity=" << sbp_identity << " q_residual=" << q_residual << " (tol " << q_tolerance << ")"
     << " lambda_max(S+)=" << s_plus_max << " lambda_min(S-)=" << s_minus_min;
  double ia = 0.0;
  for (double v : interior_accuracy) ia = std::max(ia, v);
  double ba = 0.0;
  for (double v : boundary_accuracy) ba = std::max(ba, v);
  double qa = 0.0;
  for (double v : quadrature) qa = std::max(qa, v);
  os << " interior_acc=" << ia << " boundary_acc=" << ba << " quadrature=" << qa
     << " all_pass=" << (all_pass ? "true" : "false");
  return os.str();
}

VerificationReport verify_pair(const SbpOperatorPair& pair) {
  constexpr double kTol = 1e-10;
  VerificationReport rep;
  const std::size_t n = pair.size();
  const auto& p = pair.p_weights;
  const double length = pair.grid.length;

  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  Field f(n);
  Field g(n);
  Field dpf(n);
  Field dmg(n);
  for (int trial = 0; trial < 20; ++trial) {
    for (std::size_t j = 0; j < n; ++j) {
      f[j] = uni(rng);
      g[j] = uni(rng);
    }
    pair.d_plus.apply(f.data(), dpf.data());
    pair.d_minus.apply(g.data(), dmg.data());
    double lhs = 0.0;
    double nf = 0.0;
    double ng = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      lhs += g[j] * p[j] * dpf[j] + f[j] * p[j] * dmg[j];
      nf += f[j] * f[j];
      ng += g[j] * g[j];
    }
    const double rhs = pair.periodic ? 0.0 : f[n - 1] * g[n - 1] - f[0] * g[0];
    rep.sbp_identity = std::max(rep.sbp_identity, std::abs(lhs - rhs) / std::sqrt(nf * ng));
  }

  const Eigen::MatrixXd dp = pair.d_plus.to_dense();
  const Eigen::MatrixXd dm = pair.d_minus.to_dense();
  const Eigen::VectorXd pv = Eigen::Map<const Eigen::VectorXd>(p.data(), static_cast<long>(n));
  const Eigen::MatrixXd qp = pv.asDiagonal() * dp;
  const Eigen::MatrixXd qm = pv.asDiagonal() * dm;
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(static_cast<long>(n), static_cast<long>(n));
  if (!pair.periodic) {
    b(0, 0) = -1.0;
    b(static_cast<long>(n) - 1, static_cast<long>(n) - 1) = 1.0;
  }
  rep.q_residual = (qp + qm.transpose() - b).cwiseAbs().maxCoeff();
  rep.q_tolerance = 1e-12 / pair.grid.dx;
  const Eigen::MatrixXd sp = qp + qp.transpose() - b;
  const Eigen::MatrixXd sm = qm + qm.transpose() - b;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es_p(sp, Eigen::EigenvaluesOnly);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es_m(sm, Eigen::EigenvaluesOnly);
  rep.s_plus_max = es_p.eigenvalues().maxCoeff();
  rep.s_minus_min = es_m.eigenvalues().minCoeff();

  // Monomials in the scaled coordinate x/L so that residuals are relative.
  const int q = pair.interior_order;
  const int gamma = pair.boundary_order;
  int lo = 0;
  int hi = 0;
  for (const auto* op : {&pair.d_plus, &pair.d_minus}) {
    lo = std::min(lo, op->stencil_lo());
    hi = std::max(hi, op->stencil_lo() + static_cast<int>(op->stencil().size()) - 1);
  }
  std::size_t first_interior = pair.periodic ? static_cast<std::size_t>(-lo) : pair.boundary_width;
  std::size_t end_interior = pair.periodic ? n - static_cast<std::size_t>(hi) : n - pair.boundary_width;
  Field x(n);
  for (std::size_t j = 0; j < n; ++j) x[j] = pair.grid.coords[j] / length;
  Field mono(n);
  Field out(n);
  for (int i = 0; i <= q; ++i) {
    for (std::size_t j = 0; j < n; ++j) mono[j] = std::pow(x[j], i);
    double interior = 0.0;
    double boundary = 0.0;
    for (const auto* op : {&pair.d_plus, &pair.d_minus}) {
      op->apply(mono.data(), out.data());
      for (std::size_t j = 0; j < n; ++j) {
        const double exact = i == 0 ? 0.0 : i * std::pow(x[j], i - 1);
        const double res = std::abs(out[j] * length - exact) / std::max(1, i);
        if (j >= first_interior && j < end_interior) {
          interior = std::max(interior, res);
        } else if (!pair.periodic && i <= gamma) {
          boundary = std::max(boundary, res);
        }
      }
    }
    rep.interior_accuracy.push_back(interior);
    if (!pair.periodic && i <= gamma) rep.boundary_accuracy.push_back(boundary);
  }
  const int quad_max = pair.periodic ? 0 : gamma;
  for (int i = 0; i <= quad_max; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += p[j] * std::pow(x[j], i);
    rep.quadrature.push_back(std::abs(s / length - 1.0 / (i + 1)));
  }

  bool ok = rep.sbp_identity <= kTol && rep.q_residual <= rep.q_tolerance && rep.s_plus_max <= kTol &&
            rep.s_minus_min >= -kTol;
  for (double v : rep.interior_accuracy) ok = ok && v <= kTol;
  for (double v : rep.boundary_accuracy) ok = ok && v <= kTol;
  for (double v : rep.quadrature) ok = ok && v <= kTol;
  rep.all_pass = ok;
  return rep;
}

}  // namespace swe
