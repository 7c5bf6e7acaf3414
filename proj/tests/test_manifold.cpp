#include <catch2/catch_amalgamated.hpp>

#include "sdm/manifold.hpp"

using namespace sdm;

TEST_CASE("next_fast_size returns smallest 5-smooth integer >= n") {
  REQUIRE(next_fast_size(1) == 1);
  REQUIRE(next_fast_size(6) == 6);
  REQUIRE(next_fast_size(7) == 8);
  REQUIRE(next_fast_size(11) == 12);
  REQUIRE(next_fast_size(25) == 25);
  REQUIRE(next_fast_size(49) == 50);
  REQUIRE(next_fast_size(97) == 100);
}

TEST_CASE("gauss-legendre n=6 matches reference nodes and weights") {
  // reference: numpy.polynomial.legendre.leggauss(6)
  const double xr[6] = {-0.93246951420315205, -0.66120938646626448, -0.23861918608319693,
                        0.23861918608319693,  0.66120938646626448,  0.93246951420315205};
  const double wr[6] = {0.17132449237916975, 0.36076157304813894, 0.46791393457269137,
                        0.46791393457269137, 0.36076157304813894, 0.17132449237916975};
  std::vector<double> x, w;
  gauss_legendre(6, x, w);
  // our nodes come out descending; reference is ascending
  for (int i = 0; i < 6; ++i) {
    REQUIRE(std::abs(x[i] - xr[5 - i]) < 1e-14);
    REQUIRE(std::abs(w[i] - wr[5 - i]) < 1e-14);
  }
}

TEST_CASE("gauss-legendre integrates monomials exactly through degree 2n-1") {
  std::vector<double> x, w;
  gauss_legendre(25, x, w);
  auto moment = [&](int k) {
    double s = 0.0;
    for (int i = 0; i < 25; ++i) s += w[i] * std::pow(x[i], k);
    return s;
  };
  REQUIRE(std::abs(moment(0) - 2.0) < 1e-13);
  REQUIRE(std::abs(moment(2) - 2.0 / 3.0) < 1e-13);
  REQUIRE(std::abs(moment(10) - 2.0 / 11.0) < 1e-13);
  REQUIRE(std::abs(moment(48) - 2.0 / 49.0) < 1e-12);  // top exact degree for n=25
  REQUIRE(std::abs(moment(7)) < 1e-14);                // odd moments vanish
}

TEST_CASE("torus spec: defaults, indexing, eigenvalues") {
  auto spec = ManifoldSpec::make_torus(2, 8);
  REQUIRE(spec.dim == 2);
  REQUIRE(spec.periods == std::vector<double>{2 * pi, 2 * pi});
  REQUIRE(spec.mode_count() == 17 * 17);
  REQUIRE(spec.grid_shape[0] >= 3 * 8 + 1);  // alias-free quadratic products
  REQUIRE(std::abs(spec.volume() - 4 * pi * pi) < 1e-12);

  // flat index <-> mode round trip, eigenvalue |m|^2 for 2pi periods
  for (std::size_t k = 0; k < spec.mode_count(); ++k) {
    auto m = spec.torus_mode(k);
    REQUIRE(spec.torus_index(m) == k);
    REQUIRE(std::abs(spec.eigenvalue(k) - double(m[0]) * m[0] - double(m[1]) * m[1]) < 1e-12);
  }

  auto spec3 = ManifoldSpec::make_torus(3, 3, {2 * pi, 4 * pi, pi});
  REQUIRE(spec3.mode_count() == 7 * 7 * 7);
  REQUIRE(std::abs(spec3.volume() - 8 * pi * pi * pi) < 1e-12);
  std::size_t k010 = spec3.torus_index({0, 1, 0});
  REQUIRE(std::abs(spec3.eigenvalue(k010) - 0.25) < 1e-14);  // (2pi/4pi)^2
  std::size_t k001 = spec3.torus_index({0, 0, 1});
  REQUIRE(std::abs(spec3.eigenvalue(k001) - 4.0) < 1e-13);  // (2pi/pi)^2
}

TEST_CASE("sphere spec: defaults, indexing, eigenvalues") {
  auto spec = ManifoldSpec::make_sphere(16);
  REQUIRE(spec.mode_count() == 17 * 17);
  REQUIRE(spec.grid_shape[0] == 25);  // ceil(3L/2)+1
  REQUIRE(spec.grid_shape[1] == 49);  // 3L+1
  REQUIRE(std::abs(spec.volume() - 4 * pi) < 1e-12);
  for (std::size_t k = 0; k < spec.mode_count(); ++k) {
    int l, m;
    spec.sphere_mode(k, l, m);
    REQUIRE(spec.sphere_index(l, m) == k);
    REQUIRE(std::abs(spec.eigenvalue(k) - double(l) * (l + 1)) < 1e-12);
  }
  auto spec2 = ManifoldSpec::make_sphere(4, 2.0);
  REQUIRE(std::abs(spec2.volume() - 16 * pi) < 1e-12);
  REQUIRE(std::abs(spec2.eigenvalue(spec2.sphere_index(3, -1)) - 12.0 / 4.0) < 1e-13);
}

TEST_CASE("quadrature weights sum to the volume") {
  for (auto spec : {ManifoldSpec::make_torus(2, 6), ManifoldSpec::make_torus(3, 2, {1.0, 2.0, 3.0}),
                    ManifoldSpec::make_sphere(8), ManifoldSpec::make_sphere(5, 2.5)}) {
    auto w = spec.quadrature_weights();
    double s = 0.0;
    for (double v : w) s += v;
    REQUIRE(std::abs(s - spec.volume()) < 1e-10 * spec.volume());
  }
}

TEST_CASE("spec validation rejects bad arguments") {
  REQUIRE_THROWS_AS(ManifoldSpec::make_torus(4, 8), std::invalid_argument);
  REQUIRE_THROWS_AS(ManifoldSpec::make_torus(2, 0), std::invalid_argument);
  REQUIRE_THROWS_AS(ManifoldSpec::make_torus(2, 8, {1.0, -1.0}), std::invalid_argument);
  REQUIRE_THROWS_AS(ManifoldSpec::make_torus(2, 8, {1.0}), std::invalid_argument);
  REQUIRE_THROWS_AS(ManifoldSpec::make_sphere(0), std::invalid_argument);
  REQUIRE_THROWS_AS(ManifoldSpec::make_sphere(4, 0.0), std::invalid_argument);

  auto spec = ManifoldSpec::make_torus(2, 8);
  REQUIRE_THROWS_AS(spec.with_grid({16, 16}), std::invalid_argument);  // below 3N+1
  REQUIRE_NOTHROW(spec.with_grid({25, 32}));
  auto sp = ManifoldSpec::make_sphere(8);
  REQUIRE_THROWS_AS(sp.with_grid({5, 25}), std::invalid_argument);
  REQUIRE_NOTHROW(sp.with_grid({20, 30}));
  REQUIRE_THROWS_AS(spec.torus_index({9, 0, 0}), std::out_of_range);
  REQUIRE_THROWS_AS(sp.sphere_index(9, 0), std::out_of_range);
  REQUIRE_THROWS_AS(sp.sphere_index(3, 4), std::out_of_range);
}
