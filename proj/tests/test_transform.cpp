#include <catch2/catch_amalgamated.hpp>

#include "sdm/random_fields.hpp"
#include "sdm/serialize.hpp"
#include "sdm/transform.hpp"

using namespace sdm;

namespace {
double max_coeff_err(const SpectralField& a, const SpectralField& b) {
  double e = 0.0;
  for (std::size_t k = 0; k < a.coeff.size(); ++k) e = std::max(e, std::abs(a.coeff[k] - b.coeff[k]));
  return e;
}
}  // namespace

TEST_CASE("torus: single mode synthesizes to the plane wave") {
  auto spec = ManifoldSpec::make_torus(2, 8);
  auto c = SpectralField::zero(spec);
  c.coeff[spec.torus_index({2, 1, 0})] = std::sqrt(spec.volume());  // f = exp(i(2x+y))
  auto f = synthesize(c);
  int g0 = spec.grid_shape[0], g1 = spec.grid_shape[1];
  for (int i : {0, 1, g0 / 3, g0 - 1})
    for (int j : {0, g1 / 2, g1 - 2}) {
      double x = spec.periods[0] * i / g0, y = spec.periods[1] * j / g1;
      cplx want = std::exp(cplx{0.0, 2 * x + y});
      REQUIRE(std::abs(f.value[std::size_t(i) * g1 + j] - want) < 1e-12);
    }
}

TEST_CASE("torus: analyze/synthesize round-trip is exact on band-limited data") {
  auto spec = ManifoldSpec::make_torus(2, 8);
  auto c = random_spectral(spec, 7, 0.0);  // flat spectrum: worst case
  auto c2 = analyze(synthesize(c));
  REQUIRE(max_coeff_err(c, c2) < 1e-12);

  auto spec3 = ManifoldSpec::make_torus(3, 3, {2 * pi, 4 * pi, pi});
  auto d = random_spectral(spec3, 11, 0.0);
  REQUIRE(max_coeff_err(d, analyze(synthesize(d))) < 1e-12);
}

TEST_CASE("torus: Parseval ties spectral mass to the grid quadrature") {
  auto spec = ManifoldSpec::make_torus(2, 10, {2 * pi, 3 * pi});
  auto c = random_spectral(spec, 21, 1.0);
  auto f = synthesize(c);
  double spectral = 0.0;
  for (const auto& z : c.coeff) spectral += std::norm(z);
  auto w = spec.quadrature_weights();
  double grid = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) grid += w[k] * std::norm(f.value[k]);
  REQUIRE(std::abs(spectral - grid) < 1e-10 * std::max(1.0, spectral));
}

TEST_CASE("normalized associated Legendre matches reference harmonics") {
  // reference: scipy.special.sph_harm_y(l, m, theta, phi), Condon-Shortley phase
  struct Ref { int l, m; double theta, phi, re, im; };
  const Ref refs[] = {
      {0, 0, 0.3, 0.0, 0.28209479177387814, 0.0},
      {1, 0, 1.1, 0.0, 0.22162820431795893, 0.0},
      {1, 1, 1.1, 0.7, -0.23550020895470089, -0.19835908959917178},
      {2, -1, 1.1, 0.7, 0.23886121184966388, -0.20119002328430188},
      {3, 2, 2.0, 4.5, 0.32039351506540564, -0.14491900404768843},
      {4, -3, 0.4, 5.9, 0.027837956665830475, 0.062129816070179304},
      {8, 5, 1.234, 2.345, 0.18266013603419876, -0.20434437684752849},
      {16, -11, 2.6, 0.456, -0.015186572525642069, -0.048473367524797813},
  };
  std::vector<double> q(SphereTables::tri(16, 16) + 1);
  for (const auto& r : refs) {
    normalized_legendre_row(16, std::cos(r.theta), q.data());
    int am = std::abs(r.m);
    double sgn = (r.m >= 0 || am % 2 == 0) ? 1.0 : -1.0;
    cplx y = sgn * q[SphereTables::tri(r.l, am)] * std::exp(cplx{0.0, double(r.m) * r.phi});
    REQUIRE(std::abs(y.real() - r.re) < 1e-13);
    REQUIRE(std::abs(y.imag() - r.im) < 1e-13);
  }
}

TEST_CASE("sphere: unit (0,0) coefficient synthesizes to the constant 1/sqrt(4pi)") {
  auto spec = ManifoldSpec::make_sphere(4);
  auto c = SpectralField::zero(spec);
  c.coeff[spec.sphere_index(0, 0)] = 1.0;
  auto f = synthesize(c);
  for (const auto& v : f.value) REQUIRE(std::abs(v - cplx{0.28209479177387814, 0.0}) < 1e-13);

  // radius-R sphere: orthonormal basis is Y/R
  auto spec2 = ManifoldSpec::make_sphere(4, 2.0);
  auto c2 = SpectralField::zero(spec2);
  c2.coeff[0] = 1.0;
  auto f2 = synthesize(c2);
  REQUIRE(std::abs(f2.value[7] - cplx{0.28209479177387814 / 2.0, 0.0}) < 1e-13);
}

TEST_CASE("sphere: analyze/synthesize round-trip and mode orthonormality") {
  auto spec = ManifoldSpec::make_sphere(8);
  auto c = random_spectral(spec, 7, 0.0);
  REQUIRE(max_coeff_err(c, analyze(synthesize(c))) < 1e-12);

  auto spec16 = ManifoldSpec::make_sphere(16);
  auto d = random_spectral(spec16, 5, 0.0);
  REQUIRE(max_coeff_err(d, analyze(synthesize(d))) < 1e-12);

  // single mode in -> exact delta out (quadrature orthonormality)
  auto e = SpectralField::zero(spec);
  e.coeff[spec.sphere_index(3, -2)] = cplx{0.7, -0.4};
  auto e2 = analyze(synthesize(e));
  REQUIRE(max_coeff_err(e, e2) < 1e-12);

  auto specr = ManifoldSpec::make_sphere(6, 2.5);
  auto g = random_spectral(specr, 13, 0.0);
  REQUIRE(max_coeff_err(g, analyze(synthesize(g))) < 1e-12);
}

TEST_CASE("sphere: Parseval ties spectral mass to the grid quadrature") {
  auto spec = ManifoldSpec::make_sphere(10);
  auto c = random_spectral(spec, 3, 1.5);
  auto f = synthesize(c);
  double spectral = 0.0;
  for (const auto& z : c.coeff) spectral += std::norm(z);
  auto w = spec.quadrature_weights();
  double grid = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) grid += w[k] * std::norm(f.value[k]);
  REQUIRE(std::abs(spectral - grid) < 1e-10 * std::max(1.0, spectral));
}

TEST_CASE("real random fields synthesize to real grid values") {
  for (auto spec : {ManifoldSpec::make_torus(2, 6), ManifoldSpec::make_sphere(6)}) {
    auto c = random_real_spectral(spec, 42, 2.0);
    auto f = synthesize(c);
    double maximag = 0.0;
    for (const auto& v : f.value) maximag = std::max(maximag, std::abs(v.imag()));
    REQUIRE(maximag < 1e-13);
    REQUIRE(std::abs(l2_norm(c) - 1.0) < 1e-12);
  }
}

TEST_CASE("random fields are seed-deterministic") {
  auto spec = ManifoldSpec::make_torus(2, 5);
  auto a = random_spectral(spec, 99, 2.0);
  auto b = random_spectral(spec, 99, 2.0);
  REQUIRE(max_coeff_err(a, b) == 0.0);
  auto c = random_spectral(spec, 100, 2.0);
  REQUIRE(max_coeff_err(a, c) > 1e-3);
}

TEST_CASE("spectral field JSON round-trip is bit-exact") {
  for (auto spec : {ManifoldSpec::make_torus(2, 4, {2 * pi, 3.0}), ManifoldSpec::make_sphere(5, 1.5)}) {
    auto c = random_spectral(spec, 17, 1.0);
    auto j = to_json(c);
    auto c2 = spectral_from_json(json::parse(j.dump()));
    REQUIRE(c2.manifold == c.manifold);
    for (std::size_t k = 0; k < c.coeff.size(); ++k) REQUIRE(c.coeff[k] == c2.coeff[k]);
  }
}
