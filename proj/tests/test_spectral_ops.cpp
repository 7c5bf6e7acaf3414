#include <catch2/catch_amalgamated.hpp>

#include "sdm/random_fields.hpp"
#include "sdm/spectral_ops.hpp"

using namespace sdm;

TEST_CASE("sobolev norm closed forms on the torus") {
  auto spec = ManifoldSpec::make_torus(2, 8);
  auto c = SpectralField::zero(spec);
  c.coeff[spec.torus_index({2, 1, 0})] = std::sqrt(spec.volume());  // f = exp(i(2x+y)), lam = 5
  REQUIRE(std::abs(sobolev_norm(c, 0.0) - 2 * pi) < 1e-12);
  REQUIRE(std::abs(sobolev_norm(c, 1.0) - 15.390597961942367) < 1e-12);  // sqrt(6)*2pi
  REQUIRE(std::abs(sobolev_norm(c, 2.0) - 6 * 2 * pi) < 1e-12);
  REQUIRE_THROWS_AS(sobolev_norm(c, -0.5), std::domain_error);
}

TEST_CASE("gradient energy closed forms") {
  auto spec = ManifoldSpec::make_torus(2, 8);
  auto c = SpectralField::zero(spec);
  c.coeff[spec.torus_index({1, 0, 0})] = std::sqrt(spec.volume());  // f = exp(i x1)
  REQUIRE(std::abs(gradient_l2_sq(c) - 39.478417604357432) < 1e-11);  // 4 pi^2

  auto sp = ManifoldSpec::make_sphere(4);
  auto d = SpectralField::zero(sp);
  d.coeff[sp.sphere_index(1, 0)] = 1.0;
  REQUIRE(std::abs(gradient_l2_sq(d) - 2.0) < 1e-13);  // l(l+1) = 2

  auto e = SpectralField::zero(sp);
  e.coeff[0] = 3.0;
  REQUIRE(gradient_l2_sq(e) == 0.0);
}

TEST_CASE("lp norms on the grid") {
  auto spec = ManifoldSpec::make_torus(2, 8);
  auto c = SpectralField::zero(spec);
  c.coeff[spec.torus_index({1, 0, 0})] = std::sqrt(spec.volume());
  auto f = synthesize(c);  // |f| = 1 everywhere
  REQUIRE(std::abs(lp_norm(f, 2.0) - 2 * pi) < 1e-12);
  REQUIRE(std::abs(lp_norm(f, 4.0) - 2.5066282746310002) < 1e-12);  // (4pi^2)^{1/4}
  REQUIRE(std::abs(lp_norm(f, inf) - 1.0) < 1e-12);
  REQUIRE_THROWS_AS(lp_norm(f, 0.5), std::invalid_argument);
}

TEST_CASE("integrate: oscillatory modes cancel, constants scale by volume") {
  auto spec = ManifoldSpec::make_torus(2, 8);
  auto c = SpectralField::zero(spec);
  c.coeff[spec.torus_index({1, 0, 0})] = std::sqrt(spec.volume());
  REQUIRE(std::abs(integrate(synthesize(c))) < 1e-12);

  auto k = SpectralField::zero(spec);
  k.coeff[spec.torus_index({0, 0, 0})] = std::sqrt(spec.volume());  // f = 1
  REQUIRE(std::abs(integrate(synthesize(k)) - cplx{spec.volume(), 0.0}) < 1e-10);
}

TEST_CASE("spectral multipliers: propagator unitarity, non-finite rejection") {
  auto spec = ManifoldSpec::make_torus(2, 8);
  auto c = random_spectral(spec, 4, 1.0);
  double t = 0.37;
  auto prop = apply_multiplier(c, [t](double lam) { return std::exp(cplx{0.0, -t * lam}); });
  for (double s : {0.0, 1.0, 2.5})
    REQUIRE(std::abs(sobolev_norm(prop, s) - sobolev_norm(c, s)) < 1e-12);

  REQUIRE_THROWS_AS(apply_multiplier(c, [](double) { return cplx{std::nan(""), 0.0}; }),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(apply_multiplier(c, [](double lam) { return cplx{1.0 / (lam - 1.0), 0.0}; }),
                    std::invalid_argument);  // hits lam = 1 -> inf
}

TEST_CASE("dealiased product: plane waves compose exactly") {
  auto spec = ManifoldSpec::make_torus(2, 8);
  auto a = SpectralField::zero(spec), b = SpectralField::zero(spec);
  a.coeff[spec.torus_index({1, 0, 0})] = std::sqrt(spec.volume());  // e^{i x1}
  b.coeff[spec.torus_index({0, 1, 0})] = std::sqrt(spec.volume());  // e^{i x2}
  auto prod = analyze(multiply_dealiased(synthesize(a), synthesize(b)));
  for (std::size_t k = 0; k < prod.coeff.size(); ++k) {
    cplx want = (k == spec.torus_index({1, 1, 0})) ? cplx{std::sqrt(spec.volume()), 0.0} : cplx{0.0, 0.0};
    REQUIRE(std::abs(prod.coeff[k] - want) < 1e-12);
  }
}

TEST_CASE("dealiased product matches the exact coefficient convolution") {
  // factors band-limited to N/2 so the product fits inside the cutoff
  auto spec = ManifoldSpec::make_torus(2, 8);
  auto trunc = [&](SpectralField f) {
    for (std::size_t k = 0; k < f.coeff.size(); ++k) {
      auto m = spec.torus_mode(k);
      if (std::abs(m[0]) > 4 || std::abs(m[1]) > 4) f.coeff[k] = 0.0;
    }
    return f;
  };
  auto f = trunc(random_spectral(spec, 31, 0.5));
  auto g = trunc(random_spectral(spec, 32, 0.5));
  auto got = analyze(multiply_dealiased(synthesize(f), synthesize(g)));

  // direct convolution: coeff_{a+b} += c^f_a c^g_b / sqrt(vol)
  auto want = SpectralField::zero(spec);
  double isv = 1.0 / std::sqrt(spec.volume());
  for (std::size_t ka = 0; ka < f.coeff.size(); ++ka) {
    if (f.coeff[ka] == cplx{0.0, 0.0}) continue;
    auto ma = spec.torus_mode(ka);
    for (std::size_t kb = 0; kb < g.coeff.size(); ++kb) {
      if (g.coeff[kb] == cplx{0.0, 0.0}) continue;
      auto mb = spec.torus_mode(kb);
      want.coeff[spec.torus_index({ma[0] + mb[0], ma[1] + mb[1], 0})] += isv * f.coeff[ka] * g.coeff[kb];
    }
  }
  double err = 0.0;
  for (std::size_t k = 0; k < want.coeff.size(); ++k)
    err = std::max(err, std::abs(got.coeff[k] - want.coeff[k]));
  REQUIRE(err < 1e-12);
}

TEST_CASE("finite-difference gradient energy converges to the spectral value at order >= 2") {
  auto spec = ManifoldSpec::make_torus(2, 4);
  auto c = random_spectral(spec, 3, 1.0);
  double exact = gradient_l2_sq(c);
  auto fd_energy = [&](int G) {
    auto fine = spec.with_grid({G, G});
    auto cf = c;
    cf.manifold = fine;
    auto f = synthesize(cf);
    double h0 = fine.periods[0] / G, h1 = fine.periods[1] / G;
    double w = fine.volume() / double(fine.grid_size());
    double acc = 0.0;
    for (int i = 0; i < G; ++i)
      for (int j = 0; j < G; ++j) {
        auto at = [&](int a, int b) { return f.value[std::size_t((a + G) % G) * G + (b + G) % G]; };
        cplx dx = (at(i + 1, j) - at(i - 1, j)) / (2.0 * h0);
        cplx dy = (at(i, j + 1) - at(i, j - 1)) / (2.0 * h1);
        acc += w * (std::norm(dx) + std::norm(dy));
      }
    return acc;
  };
  double e1 = std::abs(fd_energy(64) - exact);
  double e2 = std::abs(fd_energy(128) - exact);
  double e3 = std::abs(fd_energy(256) - exact);
  double order12 = std::log2(e1 / e2), order23 = std::log2(e2 / e3);
  REQUIRE(order12 > 1.9);
  REQUIRE(order23 > 1.9);
}
