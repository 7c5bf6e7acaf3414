#pragma once
//============================================================================
// analyze / synthesize between grid values and eigenbasis coefficients.
//
// Torus: multi-dimensional FFT.  With grid nodes x_g = l*g/G and the
// orthonormal basis e_m = exp(i 2pi m.x/l)/sqrt(vol),
//   analyze:    c_m = sqrt(vol) * FFT_fwd[f]_m / prod(G_j)
//   synthesize: f_g = FFT_bwd[A],  A_{m mod G} = c_m / sqrt(vol)
// Exact (to roundoff) on band-limited data since G_j >= 3N+1 > 2N+1.
//
// Sphere: longitude rows are a length-n_phi DFT; colatitude projection is
// Gauss-Legendre quadrature against fully normalized associated Legendre
// functions q_l^m (Condon-Shortley phase), where
//   Y_{l,m} = q_l^{|m|}(cos th) e^{im ph} * ((-1)^m for m<0, else 1)
// and int_{-1}^{1} q_l^m(x)^2 dx = 1/(2pi).  The orthonormal basis on the
// radius-R sphere is Y_{l,m}/R.
//============================================================================

#include <map>
#include <memory>
#include <mutex>

#include "sdm/fft.hpp"
#include "sdm/field.hpp"

namespace sdm {

// Fill q[tri(l,m)] for 0 <= m <= l <= L at a single point x = cos(theta).
// Stable forward recurrences on the fully normalized functions.
inline void normalized_legendre_row(int L, double x, double* q) {
  auto tri = [](int l, int m) { return std::size_t(l) * (l + 1) / 2 + m; };
  double sx = std::sqrt(std::max(0.0, 1.0 - x * x));
  q[tri(0, 0)] = std::sqrt(1.0 / (4.0 * pi));
  for (int m = 1; m <= L; ++m)
    q[tri(m, m)] = -std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * sx * q[tri(m - 1, m - 1)];
  for (int m = 0; m < L; ++m)
    q[tri(m + 1, m)] = std::sqrt(2.0 * m + 3.0) * x * q[tri(m, m)];
  for (int m = 0; m <= L; ++m)
    for (int l = m + 2; l <= L; ++l) {
      double a = std::sqrt((4.0 * l * l - 1.0) / (double(l - m) * double(l + m)));
      double b = std::sqrt((double(l - 1 - m) * double(l - 1 + m)) / (4.0 * double(l - 1) * double(l - 1) - 1.0));
      q[tri(l, m)] = a * (x * q[tri(l - 1, m)] - b * q[tri(l - 2, m)]);
    }
}

struct SphereTables {
  int L = 0, ntheta = 0, nphi = 0;
  std::vector<double> x, glw, theta;  // colatitude ascending (x descending)
  std::vector<double> q;              // [i * ntri + tri(l,m)], m >= 0
  std::size_t ntri = 0;

  static std::size_t tri(int l, int m) { return std::size_t(l) * (l + 1) / 2 + m; }
  double qval(int i, int l, int m) const { return q[std::size_t(i) * ntri + tri(l, m)]; }

  static std::shared_ptr<const SphereTables> get(const ManifoldSpec& spec) {
    static std::mutex mu;
    static std::map<std::array<int, 3>, std::shared_ptr<const SphereTables>> cache;
    std::array<int, 3> key = {spec.cutoff, spec.grid_shape[0], spec.grid_shape[1]};
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    auto t = std::make_shared<SphereTables>();
    t->L = spec.cutoff;
    t->ntheta = key[1];
    t->nphi = key[2];
    gauss_legendre(t->ntheta, t->x, t->glw);
    t->theta.resize(t->ntheta);
    for (int i = 0; i < t->ntheta; ++i) t->theta[i] = std::acos(t->x[i]);
    t->ntri = std::size_t(t->L + 1) * (t->L + 2) / 2;
    t->q.resize(std::size_t(t->ntheta) * t->ntri);
    for (int i = 0; i < t->ntheta; ++i)
      normalized_legendre_row(t->L, t->x[i], t->q.data() + std::size_t(i) * t->ntri);
    cache.emplace(key, t);
    return t;
  }
};

namespace detail {

inline SpectralField analyze_torus(const GridField& f) {
  const auto& spec = f.manifold;
  const auto& plan = FftPlan::get(spec.grid_shape);
  std::vector<cplx> F(f.value.size());
  plan.forward(f.value.data(), F.data());
  SpectralField out = SpectralField::zero(spec);
  double scale = std::sqrt(spec.volume()) / double(spec.grid_size());
  for (std::size_t k = 0; k < out.coeff.size(); ++k) {
    auto m = spec.torus_mode(k);
    std::size_t idx = 0;
    for (int j = 0; j < spec.dim; ++j) {
      int g = spec.grid_shape[j];
      int mm = ((m[j] % g) + g) % g;
      idx = idx * g + std::size_t(mm);
    }
    out.coeff[k] = scale * F[idx];
  }
  return out;
}

inline GridField synthesize_torus(const SpectralField& c) {
  const auto& spec = c.manifold;
  const auto& plan = FftPlan::get(spec.grid_shape);
  std::vector<cplx> A(spec.grid_size(), cplx{0.0, 0.0});
  double scale = 1.0 / std::sqrt(spec.volume());
  for (std::size_t k = 0; k < c.coeff.size(); ++k) {
    auto m = spec.torus_mode(k);
    std::size_t idx = 0;
    for (int j = 0; j < spec.dim; ++j) {
      int g = spec.grid_shape[j];
      int mm = ((m[j] % g) + g) % g;
      idx = idx * g + std::size_t(mm);
    }
    A[idx] += scale * c.coeff[k];
  }
  GridField out = GridField::zero(spec);
  plan.backward(A.data(), out.value.data());
  return out;
}

inline SpectralField analyze_sphere(const GridField& f) {
  const auto& spec = f.manifold;
  auto tb = SphereTables::get(spec);
  int nth = tb->ntheta, nph = tb->nphi, L = tb->L;
  const auto& plan = FftPlan::get({nph});
  std::vector<cplx> F(std::size_t(nth) * nph);
  for (int i = 0; i < nth; ++i)
    plan.forward(f.value.data() + std::size_t(i) * nph, F.data() + std::size_t(i) * nph);
  SpectralField out = SpectralField::zero(spec);
  double pref = spec.radius * 2.0 * pi / nph;
  std::vector<cplx> g(nth);
  for (int m = -L; m <= L; ++m) {
    int col = ((m % nph) + nph) % nph;
    for (int i = 0; i < nth; ++i) g[i] = tb->glw[i] * F[std::size_t(i) * nph + col];
    double sgn = (m >= 0 || (-m) % 2 == 0) ? 1.0 : -1.0;
    int am = std::abs(m);
    for (int l = am; l <= L; ++l) {
      cplx acc{0.0, 0.0};
      for (int i = 0; i < nth; ++i) acc += tb->qval(i, l, am) * g[i];
      out.coeff[spec.sphere_index(l, m)] = pref * sgn * acc;
    }
  }
  return out;
}

inline GridField synthesize_sphere(const SpectralField& c) {
  const auto& spec = c.manifold;
  auto tb = SphereTables::get(spec);
  int nth = tb->ntheta, nph = tb->nphi, L = tb->L;
  std::vector<cplx> A(std::size_t(nth) * nph, cplx{0.0, 0.0});
  double pref = 1.0 / spec.radius;
  for (int m = -L; m <= L; ++m) {
    int col = ((m % nph) + nph) % nph;
    double sgn = (m >= 0 || (-m) % 2 == 0) ? 1.0 : -1.0;
    int am = std::abs(m);
    for (int i = 0; i < nth; ++i) {
      cplx acc{0.0, 0.0};
      for (int l = am; l <= L; ++l) acc += c.coeff[spec.sphere_index(l, m)] * tb->qval(i, l, am);
      A[std::size_t(i) * nph + col] = pref * sgn * acc;
    }
  }
  const auto& plan = FftPlan::get({nph});
  GridField out = GridField::zero(spec);
  for (int i = 0; i < nth; ++i)
    plan.backward(A.data() + std::size_t(i) * nph, out.value.data() + std::size_t(i) * nph);
  return out;
}

}  // namespace detail

inline SpectralField analyze(const GridField& f) {
  f.check();
  return f.manifold.kind == ManifoldKind::torus ? detail::analyze_torus(f)
                                                : detail::analyze_sphere(f);
}

inline GridField synthesize(const SpectralField& c) {
  c.check();
  return c.manifold.kind == ManifoldKind::torus ? detail::synthesize_torus(c)
                                                : detail::synthesize_sphere(c);
}

}  // namespace sdm
