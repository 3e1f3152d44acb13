#include <cmath>
#include <complex>

#include <fftw3.h>

#include "swe/analysis.hpp"
#include "swe/error.hpp"

namespace swe {

namespace {

// Plans are not thread-safe to create; spectra are computed on one thread.
std::vector<std::complex<double>> fft_2d(std::size_t n, const Field& f) {
  std::vector<std::complex<double>> data(n * n);
  for (std::size_t q = 0; q < n * n; ++q) data[q] = f[q];
  fftw_complex* ptr = reinterpret_cast<fftw_complex*>(data.data());
  const int ni = static_cast<int>(n);
  fftw_plan plan = fftw_plan_dft_2d(ni, ni, ptr, ptr, FFTW_FORWARD, FFTW_ESTIMATE);
  fftw_execute(plan);
  fftw_destroy_plan(plan);
  const double scale = 1.0 / static_cast<double>(n * n);
  for (auto& z : data) z *= scale;
  return data;
}

long wavenumber(std::size_t index, std::size_t n) {
  const long k = static_cast<long>(index);
  return k <= static_cast<long>(n) / 2 ? k : k - static_cast<long>(n);
}

}  // namespace

Spectra energy_enstrophy_spectra(const State2D& state) {
  const std::size_t n = state.n;
  if (n == 0 || state.u.size() != n * n || state.v.size() != n * n) {
    throw Error(ErrorCode::NonSquareGrid, "velocity fields are not on an n x n grid");
  }
  const auto uh = fft_2d(n, state.u);
  const auto vh = fft_2d(n, state.v);
  const std::size_t shells = static_cast<std::size_t>(std::ceil(std::sqrt(2.0) * (static_cast<double>(n) / 2.0))) + 1;
  Spectra s{std::vector<double>(shells, 0.0), std::vector<double>(shells, 0.0)};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const long k1 = wavenumber(i, n);
      const long k2 = wavenumber(j, n);
      const double k2sum = static_cast<double>(k1 * k1 + k2 * k2);
      const std::size_t shell = static_cast<std::size_t>(std::floor(std::sqrt(k2sum)));
      const std::size_t q = i * n + j;
      const double e = 0.5 * (std::norm(uh[q]) + std::norm(vh[q]));
      s.energy[shell] += e;
      s.enstrophy[shell] += k2sum * e;
    }
  }
  return s;
}

double spectral_slope(const std::vector<double>& spectrum, std::size_t n_lo, std::size_t n_hi) {
  if (n_lo < 1 || n_hi >= spectrum.size() || n_hi <= n_lo) {
    throw Error(ErrorCode::ConfigInvalid, "invalid shell range for the slope fit");
  }
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  double count = 0.0;
  for (std::size_t k = n_lo; k <= n_hi; ++k) {
    if (!(spectrum[k] > 0.0)) continue;
    const double x = std::log(static_cast<double>(k));
    const double y = std::log(spectrum[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    count += 1.0;
  }
  if (count < 2.0) throw Error(ErrorCode::ConfigInvalid, "too few positive shells for the slope fit");
  return (count * sxy - sx * sy) / (count * sxx - sx * sx);
}

double spectral_tail_energy(const Field& f, double fraction) {
  const std::size_t n = f.size();
  if (n == 0) return 0.0;
  std::vector<double> in(f);
  std::vector<std::complex<double>> out(n / 2 + 1);
  fftw_plan plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.data(), reinterpret_cast<fftw_complex*>(out.data()),
                                        FFTW_ESTIMATE);
  fftw_execute(plan);
  fftw_destroy_plan(plan);
  const double cut = fraction * static_cast<double>(n);
  double s = 0.0;
  for (std::size_t k = 0; k < out.size(); ++k) {
    if (static_cast<double>(k) < cut) continue;
    // Modes other than 0 and n/2 stand for a conjugate pair.
    const double mult = (k == 0 || 2 * k == n) ? 1.0 : 2.0;
    s += mult * std::norm(out[k]) / static_cast<double>(n * n);
  }
  return s;
}

}  // namespace swe
