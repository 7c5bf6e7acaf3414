#include <catch2/catch_amalgamated.hpp>

#include "sdm/inequalities.hpp"

using namespace sdm;

namespace {

SpectralField unit_mode(const ManifoldSpec& spec, int m1, int m2) {
  auto c = SpectralField::zero(spec);
  c.coeff[spec.torus_index({m1, m2, 0})] = std::sqrt(spec.volume());
  return c;
}

// same coefficients on a manifold with a larger cutoff (finer grid)
SpectralField embed_torus(const SpectralField& f, const ManifoldSpec& big) {
  auto out = SpectralField::zero(big);
  for (std::size_t k = 0; k < f.coeff.size(); ++k) {
    auto m = f.manifold.torus_mode(k);
    out.coeff[big.torus_index(m)] = f.coeff[k];
  }
  return out;
}

}  // namespace

TEST_CASE("admissible pairs: scaling identity, frozen values, rejects") {
  auto p24 = admissible_q(2, 4.0);
  REQUIRE(std::abs(p24.q - 4.0) < 1e-14);
  auto p32 = admissible_q(3, 2.0);
  REQUIRE(std::abs(p32.q - 6.0) < 1e-14);
  auto p3x = admissible_q(3, 10.0 / 3.0);
  REQUIRE(std::abs(p3x.q - 10.0 / 3.0) < 1e-14);
  REQUIRE(admissible_q(2, inf).q == 2.0);

  for (int d : {2, 3})
    for (double p : {2.5, 3.0, 4.0, 7.5, 16.0, 100.0}) {
      auto pr = admissible_q(d, p);
      REQUIRE(pr.q >= 2.0);
      REQUIRE(std::abs(2.0 / pr.p + d / pr.q - d / 2.0) < 1e-12);
    }

  REQUIRE_THROWS_AS(admissible_q(2, 2.0), std::invalid_argument);  // forbidden endpoint
  REQUIRE_THROWS_AS(admissible_q(2, 1.5), std::invalid_argument);
  REQUIRE_THROWS_AS(admissible_q(4, 4.0), std::invalid_argument);
}

TEST_CASE("bilinear ratio: frozen closed forms") {
  auto spec = ManifoldSpec::make_torus(2, 8);
  auto one = unit_mode(spec, 0, 0);  // f = 1
  for (double s : {0.0, 1.0, 2.0})
    REQUIRE(std::abs(bilinear_ratio_fields(one, one, s) - 0.5) < 1e-12);

  auto pw = unit_mode(spec, 1, 0);   // e^{+ix1}
  auto pwc = unit_mode(spec, -1, 0); // e^{-ix1}
  REQUIRE(std::abs(bilinear_ratio_fields(pw, pwc, 1.0) - 0.35355339059327373) < 1e-12);
}

TEST_CASE("bilinear ratio is scale-invariant") {
  auto spec = ManifoldSpec::make_torus(2, 8);
  auto f = random_spectral(spec, 41, 2.0);
  auto g = random_spectral(spec, 43, 1.5);
  double r = bilinear_ratio_fields(f, g, 1.0);
  double r2 = bilinear_ratio_fields(cplx{3.0, -1.0} * f, cplx{0.0, 0.25} * g, 1.0);
  REQUIRE(std::abs(r - r2) < 1e-12 * std::max(1.0, r));
}

TEST_CASE("bilinear probe: deterministic, witness reproducible, ordered quantiles") {
  auto spec = ManifoldSpec::make_torus(2, 8);
  BilinearProbeOptions opt;
  opt.s = 1.0;
  opt.n = 60;
  opt.seed = 42;
  auto rep = probe_bilinear_hs(spec, opt);
  auto rep2 = probe_bilinear_hs(spec, opt);
  REQUIRE(to_json(rep).dump() == to_json(rep2).dump());

  REQUIRE(rep.n == 60);
  REQUIRE(rep.skipped == 0);
  REQUIRE(rep.quantiles.size() == 3);
  REQUIRE(rep.quantiles[0][1] <= rep.quantiles[1][1]);
  REQUIRE(rep.quantiles[1][1] <= rep.quantiles[2][1]);
  REQUIRE(rep.quantiles[2][1] <= rep.max_ratio);

  double again = bilinear_ratio(spec, opt.s, rep.witness.at("seed_f").get<std::uint64_t>(),
                                rep.witness.at("seed_g").get<std::uint64_t>(),
                                rep.witness.at("beta_f").get<double>(),
                                rep.witness.at("beta_g").get<double>());
  REQUIRE(std::abs(again - rep.max_ratio) < 1e-9);
}

TEST_CASE("GN fit: B covers the constant field, holdout is violation-free") {
  auto spec = ManifoldSpec::make_torus(2, 8);
  GNOptions opt;
  opt.n_fit = 200;
  opt.n_holdout = 500;
  auto c = estimate_gn_constants(spec, opt);
  REQUIRE(std::abs(c.B - 1.05 / spec.volume()) < 1e-15);
  REQUIRE(c.B >= 0.025330295910584444);  // 1/(4 pi^2)
  REQUIRE(c.A >= 0.0);
  REQUIRE(c.C == std::max(c.A, c.B));
  REQUIRE(c.violations == 0);
  // A is fitted over both sample sets before inflation, so the inflation
  // headroom makes every holdout slack strictly positive
  REQUIRE(c.margin > 0.0);

  // rerun determinism
  auto c2 = estimate_gn_constants(spec, opt);
  REQUIRE(c.A == c2.A);
  REQUIRE(c.margin == c2.margin);

  // plane waves have |u| const, so B >= 1/vol alone covers them
  for (auto m : {std::array<int, 2>{0, 0}, {1, 0}, {5, -7}}) {
    auto u = unit_mode(spec, m[0], m[1]);
    REQUIRE(gn_constraint_ratio(u, c.A, c.B) <= 1.0);
  }

  // the constraint ratio is scale-invariant
  auto u = random_spectral(spec, 7, 2.0);
  REQUIRE(std::abs(gn_constraint_ratio(u, c.A, c.B) -
                   gn_constraint_ratio(cplx{0.0, 5.0} * u, c.A, c.B)) < 1e-12);

  REQUIRE_THROWS_AS(estimate_gn_constants(ManifoldSpec::make_torus(3, 4), opt),
                    std::invalid_argument);
}

TEST_CASE("strichartz ratio: frozen plane-wave value") {
  auto spec = ManifoldSpec::make_torus(2, 8);
  auto pw = unit_mode(spec, 1, 0);
  auto pair = admissible_q(2, 4.0);
  // |S(t)u0| = 1, so ratio = T^{1/p} vol^{1/q} / ((1+1)^{1/(2p)} sqrt(vol))
  REQUIRE(std::abs(strichartz_ratio_field(pw, pair, 1.0, 256) - 0.36583168413340539) < 1e-12);
}

TEST_CASE("strichartz probe: determinism, witness, preconditions") {
  auto spec = ManifoldSpec::make_torus(2, 8);
  StrichartzProbeOptions opt;
  opt.pair = admissible_q(2, 4.0);
  opt.n = 12;
  opt.seed = 7;
  auto rep = probe_strichartz(spec, opt);
  auto rep2 = probe_strichartz(spec, opt);
  REQUIRE(to_json(rep).dump() == to_json(rep2).dump());
  REQUIRE(rep.max_ratio > 0.0);
  REQUIRE(rep.quantiles[2][1] <= rep.max_ratio);

  auto u = random_spectral(spec, rep.witness.at("seed").get<std::uint64_t>(), rep.witness.at("beta").get<double>());
  REQUIRE(std::abs(strichartz_ratio_field(u, opt.pair, opt.T, opt.n_time) - rep.max_ratio) < 1e-9);

  StrichartzProbeOptions bad = opt;
  bad.T = 1.5;
  REQUIRE_THROWS_AS(probe_strichartz(spec, bad), std::invalid_argument);
  bad = opt;
  bad.n_time = 100;
  REQUIRE_THROWS_AS(probe_strichartz(spec, bad), std::invalid_argument);
  bad = opt;
  bad.pair.q = inf;
  REQUIRE_THROWS_AS(probe_strichartz(spec, bad), std::invalid_argument);
}

TEST_CASE("strichartz max ratio is stable under cutoff refinement") {
  auto small = ManifoldSpec::make_torus(2, 24);
  auto big = ManifoldSpec::make_torus(2, 36);
  auto pair = admissible_q(2, 4.0);
  double mx_small = 0.0, mx_big = 0.0;
  for (int i = 0; i < 20; ++i) {
    auto u = random_spectral(small, derive_seed(7, i), kProbeBetas[i % 3]);
    mx_small = std::max(mx_small, strichartz_ratio_field(u, pair, 1.0, 256));
    mx_big = std::max(mx_big, strichartz_ratio_field(embed_torus(u, big), pair, 1.0, 256));
  }
  REQUIRE(std::abs(mx_small - mx_big) < 0.05 * mx_big);
}
