#pragma once
//============================================================================
// Seeded random smooth fields.
//
// Coefficients are i.i.d. complex Gaussians damped by (1+lam_k)^{-beta/2}
// and then L^2-normalized; beta controls smoothness (larger = smoother).
// mt19937_64 is bit-exact across platforms; the Gaussian draws use an
// explicit Box-Muller on 53-bit uniforms because std::normal_distribution
// is implementation-defined.  Per-sample seeds are derived with splitmix64
// so ensembles are order-independent and each sample is reproducible from
// its own recorded seed.
//============================================================================

#include <cstdint>
#include <random>

#include "sdm/spectral_ops.hpp"

namespace sdm {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  return splitmix64(base ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

class GaussianRng {
 public:
  explicit GaussianRng(std::uint64_t seed) : eng_(seed) {}
  double uniform01() { return (double(eng_() >> 11) + 0.5) * 0x1p-53; }
  double gaussian() {
    if (have_) {
      have_ = false;
      return spare_;
    }
    double u1 = uniform01(), u2 = uniform01();
    double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * pi * u2);
    have_ = true;
    return r * std::cos(2.0 * pi * u2);
  }

 private:
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool have_ = false;
};

inline SpectralField random_spectral(const ManifoldSpec& spec, std::uint64_t seed, double beta) {
  GaussianRng rng(seed);
  SpectralField f = SpectralField::zero(spec);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (std::size_t k = 0; k < f.coeff.size(); ++k) {
    double damp = std::pow(1.0 + spec.eigenvalue(k), -0.5 * beta);
    double re = rng.gaussian(), im = rng.gaussian();
    f.coeff[k] = damp * inv_sqrt2 * cplx{re, im};
  }
  double n = l2_norm(f);
  if (n > 0.0) f = cplx{1.0 / n, 0.0} * f;
  return f;
}

// Real-valued random smooth field: draw a complex field and project onto the
// realness symmetry of the basis (torus: c_{-m} = conj(c_m); sphere:
// c_{l,-m} = (-1)^m conj(c_{l,m})), then renormalize.
inline SpectralField random_real_spectral(const ManifoldSpec& spec, std::uint64_t seed, double beta) {
  SpectralField g = random_spectral(spec, seed, beta);
  SpectralField f = SpectralField::zero(spec);
  if (spec.kind == ManifoldKind::torus) {
    for (std::size_t k = 0; k < g.coeff.size(); ++k) {
      auto m = spec.torus_mode(k);
      std::array<int, 3> neg = {-m[0], -m[1], -m[2]};
      std::size_t kn = spec.torus_index(neg);
      f.coeff[k] = 0.5 * (g.coeff[k] + std::conj(g.coeff[kn]));
    }
  } else {
    for (std::size_t k = 0; k < g.coeff.size(); ++k) {
      int l, m;
      spec.sphere_mode(k, l, m);
      std::size_t kn = spec.sphere_index(l, -m);
      double sgn = (m % 2 == 0) ? 1.0 : -1.0;
      f.coeff[k] = 0.5 * (g.coeff[k] + sgn * std::conj(g.coeff[kn]));
    }
  }
  double n = l2_norm(f);
  if (n > 0.0) f = cplx{1.0 / n, 0.0} * f;
  return f;
}

}  // namespace sdm
