#include <doctest.h>

#include <vector>

#include "speclab/kernels.hpp"
#include "speclab/rng.hpp"

using namespace speclab;
namespace k = speclab::kernels;

namespace {

std::vector<double> random_vec(Rng& rng, std::size_t n) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform(-1.0, 1.0);
  return v;
}

std::vector<k::cplx> random_cvec(Rng& rng, std::size_t n) {
  std::vector<k::cplx> v(n);
  for (auto& x : v) x = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
  return v;
}

}  // namespace

TEST_CASE("kernel variants agree with the scalar reference") {
  const k::Ops& scalar = k::scalar_ops();
  const k::Ops& active = k::ops();
  INFO("active table: ", k::active_name());

  Rng rng(42);
  for (std::size_t n : {std::size_t{1}, std::size_t{2}, std::size_t{3}, std::size_t{7},
                        std::size_t{8}, std::size_t{17}, std::size_t{64}, std::size_t{1001}}) {
    const auto x = random_vec(rng, n);
    const auto y = random_vec(rng, n);
    CHECK(scalar.dot(x.data(), y.data(), n) ==
          doctest::Approx(active.dot(x.data(), y.data(), n)).epsilon(1e-13));
    CHECK(scalar.nrm2sq(x.data(), n) ==
          doctest::Approx(active.nrm2sq(x.data(), n)).epsilon(1e-13));

    auto y1 = y, y2 = y;
    scalar.axpy(0.7, x.data(), y1.data(), n);
    active.axpy(0.7, x.data(), y2.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(y1[i] == doctest::Approx(y2[i]).epsilon(1e-13));

    const auto cx = random_cvec(rng, n);
    const auto cy = random_cvec(rng, n);
    const k::cplx d1 = scalar.zdotc(cx.data(), cy.data(), n);
    const k::cplx d2 = active.zdotc(cx.data(), cy.data(), n);
    CHECK(std::abs(d1 - d2) <= 1e-13 * (1.0 + std::abs(d1)));
    CHECK(scalar.znrm2sq(cx.data(), n) ==
          doctest::Approx(active.znrm2sq(cx.data(), n)).epsilon(1e-13));

    auto cy1 = cy, cy2 = cy;
    const k::cplx a{0.3, -1.2};
    scalar.zaxpy(a, cx.data(), cy1.data(), n);
    active.zaxpy(a, cx.data(), cy2.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(cy1[i] - cy2[i]) <= 1e-13);

    auto cz1 = cy, cz2 = cy;
    scalar.zaxpy_real(a, x.data(), cz1.data(), n);
    active.zaxpy_real(a, x.data(), cz2.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(cz1[i] - cz2[i]) <= 1e-13);

    const k::cplx e1 = scalar.zdot_real(x.data(), cy.data(), n);
    const k::cplx e2 = active.zdot_real(x.data(), cy.data(), n);
    CHECK(std::abs(e1 - e2) <= 1e-13 * (1.0 + std::abs(e1)));
  }
}

TEST_CASE("periodic stencil matches the naive implementation bitwise") {
  Rng rng(7);
  for (int n : {8, 10, 16}) {
    const std::size_t nn = static_cast<std::size_t>(n) * n;
    const auto u = random_vec(rng, nn);
    std::vector<double> out_scalar(nn), out_active(nn), oracle(nn);
    const double inv_h2 = 2.5;
    k::scalar_ops().laplacian5(u.data(), out_scalar.data(), n, inv_h2);
    k::ops().laplacian5(u.data(), out_active.data(), n, inv_h2);

    auto wrap = [n](int i) { return (i % n + n) % n; };
    for (int iy = 0; iy < n; ++iy)
      for (int ix = 0; ix < n; ++ix)
        oracle[static_cast<std::size_t>(iy * n + ix)] =
            (4.0 * u[static_cast<std::size_t>(iy * n + ix)] -
             u[static_cast<std::size_t>(iy * n + wrap(ix + 1))] -
             u[static_cast<std::size_t>(iy * n + wrap(ix - 1))] -
             u[static_cast<std::size_t>(wrap(iy + 1) * n + ix)] -
             u[static_cast<std::size_t>(wrap(iy - 1) * n + ix)]) *
            inv_h2;

    for (std::size_t i = 0; i < nn; ++i) {
      CHECK(out_scalar[i] == oracle[i]);
      CHECK(out_active[i] == oracle[i]);
    }
  }
}

TEST_CASE("avx2 availability is reported consistently") {
  const bool avail = k::avx2_available();
  const std::string_view name = k::active_name();
  if (!avail) CHECK(name == "scalar");
  CHECK((name == "scalar" || name == "avx2"));
}
