#pragma once

#include <vector>

namespace swe {

template <typename Apply>
void sweep(std::size_t n, Axis axis, const double* f, double* out, const Apply& apply_line) {
  const long nl = static_cast<long>(n);
  if (axis == Axis::Y) {
#pragma omp parallel for schedule(static)
    for (long i = 0; i < nl; ++i) apply_line(f + i * nl, out + i * nl);
    return;
  }
#pragma omp parallel
  {
    std::vector<double> in_line(n);
    std::vector<double> out_line(n);
#pragma omp for schedule(static)
    for (long j = 0; j < nl; ++j) {
      for (long i = 0; i < nl; ++i) in_line[static_cast<std::size_t>(i)] = f[i * nl + j];
      apply_line(in_line.data(), out_line.data());
      for (long i = 0; i < nl; ++i) out[i * nl + j] = out_line[static_cast<std::size_t>(i)];
    }
  }
}

}  // namespace swe
