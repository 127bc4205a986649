#include "speclab/kernels.hpp"

namespace speclab::kernels {
namespace {

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

double nrm2sq_scalar(const double* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * x[i];
  return s;
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

cplx zdotc_scalar(const cplx* x, const cplx* y, std::size_t n) {
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    const double yr = y[i].real(), yi = y[i].imag();
    re += xr * yr + xi * yi;
    im += xr * yi - xi * yr;
  }
  return {re, im};
}

double znrm2sq_scalar(const cplx* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    s += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
  return s;
}

void zaxpy_scalar(cplx a, const cplx* x, cplx* y, std::size_t n) {
  const double ar = a.real(), ai = a.imag();
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    y[i] += cplx(ar * xr - ai * xi, ar * xi + ai * xr);
  }
}

void zaxpy_real_scalar(cplx a, const double* x, cplx* y, std::size_t n) {
  const double ar = a.real(), ai = a.imag();
  for (std::size_t i = 0; i < n; ++i) {
    y[i] += cplx(ar * x[i], ai * x[i]);
  }
}

cplx zdot_real_scalar(const double* x, const cplx* y, std::size_t n) {
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    re += x[i] * y[i].real();
    im += x[i] * y[i].imag();
  }
  return {re, im};
}

void laplacian5_scalar(const double* u, double* out, int n, double inv_h2) {
  for (int iy = 0; iy < n; ++iy) {
    const int yn = (iy + 1 == n) ? 0 : iy + 1;
    const int ys = (iy == 0) ? n - 1 : iy - 1;
    const double* row = u + std::size_t(iy) * n;
    const double* rown = u + std::size_t(yn) * n;
    const double* rows = u + std::size_t(ys) * n;
    double* o = out + std::size_t(iy) * n;
    for (int ix = 0; ix < n; ++ix) {
      const int xe = (ix + 1 == n) ? 0 : ix + 1;
      const int xw = (ix == 0) ? n - 1 : ix - 1;
      o[ix] = (4.0 * row[ix] - row[xe] - row[xw] - rown[ix] - rows[ix]) * inv_h2;
    }
  }
}

}  // namespace

const Ops& scalar_ops() {
  static const Ops table = {
      dot_scalar,   nrm2sq_scalar, axpy_scalar,       zdotc_scalar,
      znrm2sq_scalar, zaxpy_scalar, zaxpy_real_scalar, zdot_real_scalar,
      laplacian5_scalar, "scalar"};
  return table;
}

}  // namespace speclab::kernels
