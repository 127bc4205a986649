#pragma once

#include <complex>
#include <cstddef>
#include <string_view>

namespace speclab::kernels {

using cplx = std::complex<double>;

// Flat-array arithmetic used by the spectral synthesis/analysis loops and the
// periodic 5-point stencil. Every entry has a scalar reference implementation
// and (on x86-64 with AVX2+FMA) a vectorized variant; the active table is
// picked once at startup. Complex arrays use the std::complex interleaved
// re/im layout.
struct Ops {
  double (*dot)(const double* x, const double* y, std::size_t n);
  double (*nrm2sq)(const double* x, std::size_t n);
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  // sum_i conj(x_i) * y_i
  cplx (*zdotc)(const cplx* x, const cplx* y, std::size_t n);
  double (*znrm2sq)(const cplx* x, std::size_t n);
  void (*zaxpy)(cplx a, const cplx* x, cplx* y, std::size_t n);
  // y_i += a * x_i with real-valued x (mode functions are real)
  void (*zaxpy_real)(cplx a, const double* x, cplx* y, std::size_t n);
  // sum_i x_i * y_i with real x, complex y
  cplx (*zdot_real)(const double* x, const cplx* y, std::size_t n);
  // out = (4u[c] - u[e] - u[w] - u[n] - u[s]) * inv_h2 on the periodic
  // n x n grid, row-major.
  void (*laplacian5)(const double* u, double* out, int n, double inv_h2);
  const char* name;
};

const Ops& scalar_ops();
bool avx2_available();

// Active table: AVX2 when the CPU supports it, unless SPECLAB_SIMD=scalar
// (or =avx2) overrides the choice.
const Ops& ops();
std::string_view active_name();

}  // namespace speclab::kernels
