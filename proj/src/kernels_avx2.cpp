// AVX2 + FMA kernel variants. This file is compiled with -mavx2 -mfma; it is
// only entered through the dispatch table after a runtime CPU check.

#include "speclab/kernels.hpp"

#if defined(__AVX2__) && defined(__FMA__)
#include <immintrin.h>

namespace speclab::kernels {
namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc);
  double s = hsum(acc);
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

double nrm2sq_avx2(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_loadu_pd(x + i);
    acc = _mm256_fmadd_pd(v, v, acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += x[i] * x[i];
  return s;
}

void axpy_avx2(double a, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d r = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
    _mm256_storeu_pd(y + i, r);
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

cplx zdotc_avx2(const cplx* x, const cplx* y, std::size_t n) {
  const double* xp = reinterpret_cast<const double*>(x);
  const double* yp = reinterpret_cast<const double*>(y);
  __m256d acc_re = _mm256_setzero_pd();  // lanes hold xr*yr, xi*yi pairs
  __m256d acc_im = _mm256_setzero_pd();  // lanes hold xr*yi, xi*yr pairs
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d vx = _mm256_loadu_pd(xp + 2 * i);
    __m256d vy = _mm256_loadu_pd(yp + 2 * i);
    acc_re = _mm256_fmadd_pd(vx, vy, acc_re);
    acc_im = _mm256_fmadd_pd(vx, _mm256_permute_pd(vy, 0b0101), acc_im);
  }
  alignas(32) double tr[4], ti[4];
  _mm256_store_pd(tr, acc_re);
  _mm256_store_pd(ti, acc_im);
  double re = (tr[0] + tr[1]) + (tr[2] + tr[3]);
  double im = (ti[0] - ti[1]) + (ti[2] - ti[3]);
  for (; i < n; ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    const double yr = y[i].real(), yi = y[i].imag();
    re += xr * yr + xi * yi;
    im += xr * yi - xi * yr;
  }
  return {re, im};
}

double znrm2sq_avx2(const cplx* x, std::size_t n) {
  return nrm2sq_avx2(reinterpret_cast<const double*>(x), 2 * n);
}

void zaxpy_avx2(cplx a, const cplx* x, cplx* y, std::size_t n) {
  double* yp = reinterpret_cast<double*>(y);
  const double* xp = reinterpret_cast<const double*>(x);
  const __m256d var = _mm256_set1_pd(a.real());
  // sign pattern (-ai, +ai, -ai, +ai) so that re gets -ai*xi, im gets +ai*xr
  const __m256d vai = _mm256_setr_pd(-a.imag(), a.imag(), -a.imag(), a.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d vx = _mm256_loadu_pd(xp + 2 * i);
    __m256d vy = _mm256_loadu_pd(yp + 2 * i);
    vy = _mm256_fmadd_pd(var, vx, vy);
    vy = _mm256_fmadd_pd(vai, _mm256_permute_pd(vx, 0b0101), vy);
    _mm256_storeu_pd(yp + 2 * i, vy);
  }
  for (; i < n; ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    y[i] += cplx(a.real() * xr - a.imag() * xi, a.real() * xi + a.imag() * xr);
  }
}

void zaxpy_real_avx2(cplx a, const double* x, cplx* y, std::size_t n) {
  double* yp = reinterpret_cast<double*>(y);
  const __m256d va = _mm256_setr_pd(a.real(), a.imag(), a.real(), a.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d vx = _mm256_setr_pd(x[i], x[i], x[i + 1], x[i + 1]);
    __m256d vy = _mm256_loadu_pd(yp + 2 * i);
    _mm256_storeu_pd(yp + 2 * i, _mm256_fmadd_pd(va, vx, vy));
  }
  for (; i < n; ++i) y[i] += cplx(a.real() * x[i], a.imag() * x[i]);
}

cplx zdot_real_avx2(const double* x, const cplx* y, std::size_t n) {
  const double* yp = reinterpret_cast<const double*>(y);
  __m256d acc = _mm256_setzero_pd();  // lanes re, im, re, im
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d vx = _mm256_setr_pd(x[i], x[i], x[i + 1], x[i + 1]);
    acc = _mm256_fmadd_pd(vx, _mm256_loadu_pd(yp + 2 * i), acc);
  }
  alignas(32) double t[4];
  _mm256_store_pd(t, acc);
  double re = t[0] + t[2];
  double im = t[1] + t[3];
  for (; i < n; ++i) {
    re += x[i] * y[i].real();
    im += x[i] * y[i].imag();
  }
  return {re, im};
}

void laplacian5_avx2(const double* u, double* out, int n, double inv_h2) {
  const __m256d vh = _mm256_set1_pd(inv_h2);
  const __m256d v4 = _mm256_set1_pd(4.0);
  for (int iy = 0; iy < n; ++iy) {
    const int yn = (iy + 1 == n) ? 0 : iy + 1;
    const int ys = (iy == 0) ? n - 1 : iy - 1;
    const double* row = u + std::size_t(iy) * n;
    const double* rown = u + std::size_t(yn) * n;
    const double* rows = u + std::size_t(ys) * n;
    double* o = out + std::size_t(iy) * n;
    auto edge = [&](int ix) {
      const int xe = (ix + 1 == n) ? 0 : ix + 1;
      const int xw = (ix == 0) ? n - 1 : ix - 1;
      o[ix] = (4.0 * row[ix] - row[xe] - row[xw] - rown[ix] - rows[ix]) * inv_h2;
    };
    edge(0);
    int ix = 1;
    for (; ix + 4 <= n - 1; ix += 4) {
      __m256d c = _mm256_loadu_pd(row + ix);
      __m256d s = _mm256_mul_pd(v4, c);
      s = _mm256_sub_pd(s, _mm256_loadu_pd(row + ix + 1));
      s = _mm256_sub_pd(s, _mm256_loadu_pd(row + ix - 1));
      s = _mm256_sub_pd(s, _mm256_loadu_pd(rown + ix));
      s = _mm256_sub_pd(s, _mm256_loadu_pd(rows + ix));
      _mm256_storeu_pd(o + ix, _mm256_mul_pd(s, vh));
    }
    for (; ix < n - 1; ++ix) edge(ix);
    if (n > 1) edge(n - 1);
  }
}

}  // namespace

const Ops* avx2_ops_table() {
  static const Ops table = {
      dot_avx2,   nrm2sq_avx2, axpy_avx2,       zdotc_avx2,
      znrm2sq_avx2, zaxpy_avx2, zaxpy_real_avx2, zdot_real_avx2,
      laplacian5_avx2, "avx2"};
  return &table;
}

}  // namespace speclab::kernels

#else

namespace speclab::kernels {
const Ops* avx2_ops_table() { return nullptr; }
}  // namespace speclab::kernels

#endif
