#pragma once
//============================================================================
// Field containers.
//
// SpectralField: coefficients c_k against the orthonormal Laplace eigenbasis,
//   flat-indexed as defined by ManifoldSpec.  Parseval holds with unit
//   weights: ||f||_{L^2}^2 = sum_k |c_k|^2.
// GridField: complex nodal values on the manifold's quadrature grid
//   (row-major).
//============================================================================

#include <complex>
#include <stdexcept>
#include <vector>

#include "sdm/manifold.hpp"

namespace sdm {

using cplx = std::complex<double>;

struct SpectralField {
  ManifoldSpec manifold;
  std::vector<cplx> coeff;

  static SpectralField zero(const ManifoldSpec& spec) {
    return {spec, std::vector<cplx>(spec.mode_count(), cplx{0.0, 0.0})};
  }
  void check() const {
    if (coeff.size() != manifold.mode_count())
      throw std::invalid_argument("spectral coefficient count does not match manifold");
  }
};

struct GridField {
  ManifoldSpec manifold;
  std::vector<cplx> value;

  static GridField zero(const ManifoldSpec& spec) {
    return {spec, std::vector<cplx>(spec.grid_size(), cplx{0.0, 0.0})};
  }
  void check() const {
    if (value.size() != manifold.grid_size())
      throw std::invalid_argument("grid value count does not match manifold");
  }
};

inline void require_same_manifold(const ManifoldSpec& a, const ManifoldSpec& b) {
  if (a != b) throw std::invalid_argument("fields live on different manifolds/grids");
}

// --- coefficient-space arithmetic (used by fixed-point iteration) ----------

inline SpectralField operator+(const SpectralField& a, const SpectralField& b) {
  require_same_manifold(a.manifold, b.manifold);
  SpectralField r = a;
  for (std::size_t k = 0; k < r.coeff.size(); ++k) r.coeff[k] += b.coeff[k];
  return r;
}

inline SpectralField operator-(const SpectralField& a, const SpectralField& b) {
  require_same_manifold(a.manifold, b.manifold);
  SpectralField r = a;
  for (std::size_t k = 0; k < r.coeff.size(); ++k) r.coeff[k] -= b.coeff[k];
  return r;
}

inline SpectralField operator*(cplx s, const SpectralField& a) {
  SpectralField r = a;
  for (auto& c : r.coeff) c *= s;
  return r;
}

inline double l2_norm(const SpectralField& f) {
  double s = 0.0;
  for (const auto& c : f.coeff) s += std::norm(c);
  return std::sqrt(s);
}

}  // namespace sdm
