#pragma once
//============================================================================
// Manifold descriptors for the spectral backends.
//
// Two geometries are supported:
//   * flat torus  R^d / (l_1 Z x ... x l_d Z), d in {2,3},
//     Laplace eigenbasis  e_m(x) = exp(i 2pi m.x/l) / sqrt(vol),
//     eigenvalue  lam_m = sum_j (2pi m_j / l_j)^2,  square cutoff |m_j| <= N
//   * round 2-sphere of radius R,
//     eigenbasis  Y_lm / R (orthonormal spherical harmonics),
//     eigenvalue  lam = l(l+1)/R^2,  triangular cutoff l <= L
//
// Grids are oversampled so that the pointwise product of two band-limited
// fields can be re-analyzed without aliasing:
//   torus:  G >= 3N+1 per dimension (product modes reach 2N; a mode m' with
//           |m'| <= 2N aliases to m' - G, and |m' - G| > N needs G > 3N)
//   sphere: n_phi >= 3L+1 equispaced longitudes, and n_theta >= ceil(3L/2)+1
//           Gauss-Legendre colatitudes (projection integrand has polynomial
//           degree <= 3L in cos(theta); GL is exact through degree 2n-1)
//============================================================================

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace sdm {

inline constexpr double pi = 3.14159265358979323846;

enum class ManifoldKind { torus, sphere2 };

// Smallest 5-smooth integer >= n (FFT-friendly grid sizes).
inline int next_fast_size(int n) {
  if (n < 1) n = 1;
  for (;; ++n) {
    int r = n;
    for (int p : {2, 3, 5})
      while (r % p == 0) r /= p;
    if (r == 1) return n;
  }
}

// Gauss-Legendre nodes (descending) and weights on [-1,1], Newton iteration
// on the three-term recurrence.  Exact for polynomials of degree <= 2n-1.
inline void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double xi = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 64; ++it) {
      double p0 = 1.0, p1 = xi;
      for (int l = 2; l <= n; ++l) {
        double p2 = ((2 * l - 1) * xi * p1 - (l - 1) * p0) / l;
        p0 = p1;
        p1 = p2;
      }
      dp = (n == 1) ? 1.0 : n * (xi * p1 - p0) / (xi * xi - 1.0);
      double dx = p1 / dp;
      xi -= dx;
      if (std::abs(dx) < 1e-15) {
        // one final refresh of dp at the converged node
        p0 = 1.0; p1 = xi;
        for (int l = 2; l <= n; ++l) {
          double p2 = ((2 * l - 1) * xi * p1 - (l - 1) * p0) / l;
          p0 = p1;
          p1 = p2;
        }
        dp = (n == 1) ? 1.0 : n * (xi * p1 - p0) / (xi * xi - 1.0);
        break;
      }
    }
    x[i] = xi;
    w[i] = 2.0 / ((1.0 - xi * xi) * dp * dp);
  }
}

struct ManifoldSpec {
  ManifoldKind kind = ManifoldKind::torus;
  int dim = 2;                  // intrinsic dimension (sphere2: always 2)
  int cutoff = 0;               // torus: N, sphere: L
  std::vector<double> periods;  // torus only, size dim
  double radius = 1.0;          // sphere only
  std::vector<int> grid_shape;  // torus: dim sizes; sphere: {n_theta, n_phi}

  static ManifoldSpec make_torus(int dim, int cutoff, std::vector<double> periods = {}) {
    if (dim != 2 && dim != 3) throw std::invalid_argument("torus dim must be 2 or 3");
    if (cutoff < 1) throw std::invalid_argument("torus cutoff must be >= 1");
    if (periods.empty()) periods.assign(dim, 2.0 * pi);
    if ((int)periods.size() != dim) throw std::invalid_argument("periods size != dim");
    for (double l : periods)
      if (!(l > 0.0)) throw std::invalid_argument("periods must be positive");
    ManifoldSpec s;
    s.kind = ManifoldKind::torus;
    s.dim = dim;
    s.cutoff = cutoff;
    s.periods = std::move(periods);
    s.grid_shape.assign(dim, next_fast_size(3 * cutoff + 1));
    return s;
  }

  static ManifoldSpec make_sphere(int cutoff, double radius = 1.0) {
    if (cutoff < 1) throw std::invalid_argument("sphere cutoff must be >= 1");
    if (!(radius > 0.0)) throw std::invalid_argument("sphere radius must be positive");
    ManifoldSpec s;
    s.kind = ManifoldKind::sphere2;
    s.dim = 2;
    s.cutoff = cutoff;
    s.radius = radius;
    s.grid_shape = {(3 * cutoff + 1) / 2 + 1, 3 * cutoff + 1};
    return s;
  }

  // Same spectral content on a custom (finer) grid; rejects under-resolved
  // grids that would break the alias-free product guarantee.
  ManifoldSpec with_grid(std::vector<int> shape) const {
    ManifoldSpec s = *this;
    if (kind == ManifoldKind::torus) {
      if ((int)shape.size() != dim) throw std::invalid_argument("grid shape size != dim");
      for (int g : shape)
        if (g < 3 * cutoff + 1) throw std::invalid_argument("torus grid below dealias minimum 3N+1");
    } else {
      if (shape.size() != 2) throw std::invalid_argument("sphere grid shape must be {n_theta, n_phi}");
      if (shape[0] < (3 * cutoff + 1) / 2 + 1 || shape[1] < 3 * cutoff + 1)
        throw std::invalid_argument("sphere grid below dealias minimum");
    }
    s.grid_shape = std::move(shape);
    return s;
  }

  std::size_t mode_count() const {
    if (kind == ManifoldKind::torus) {
      std::size_t n = 1;
      for (int j = 0; j < dim; ++j) n *= std::size_t(2 * cutoff + 1);
      return n;
    }
    return std::size_t(cutoff + 1) * std::size_t(cutoff + 1);
  }

  std::size_t grid_size() const {
    std::size_t n = 1;
    for (int g : grid_shape) n *= std::size_t(g);
    return n;
  }

  double volume() const {
    if (kind == ManifoldKind::torus) {
      double v = 1.0;
      for (double l : periods) v *= l;
      return v;
    }
    return 4.0 * pi * radius * radius;
  }

  // --- mode indexing -------------------------------------------------------
  // torus:  flat index is row-major over t_j = m_j + N in [0, 2N]
  // sphere: flat index k = l(l+1) + m, so k in [0, (L+1)^2)

  std::array<int, 3> torus_mode(std::size_t k) const {
    int side = 2 * cutoff + 1;
    std::array<int, 3> m = {0, 0, 0};
    for (int j = dim - 1; j >= 0; --j) {
      m[j] = int(k % side) - cutoff;
      k /= side;
    }
    return m;
  }

  std::size_t torus_index(const std::array<int, 3>& m) const {
    std::size_t side = 2 * cutoff + 1, k = 0;
    for (int j = 0; j < dim; ++j) {
      if (m[j] < -cutoff || m[j] > cutoff) throw std::out_of_range("torus mode outside cutoff");
      k = k * side + std::size_t(m[j] + cutoff);
    }
    return k;
  }

  void sphere_mode(std::size_t k, int& l, int& m) const {
    l = int(std::sqrt(double(k)));
    while (std::size_t(l + 1) * std::size_t(l + 1) <= k) ++l;
    while (std::size_t(l) * std::size_t(l) > k) --l;
    m = int(k) - l * (l + 1);
  }

  std::size_t sphere_index(int l, int m) const {
    if (l < 0 || l > cutoff || m < -l || m > l) throw std::out_of_range("sphere mode outside cutoff");
    return std::size_t(l) * (l + 1) + m;
  }

  double eigenvalue(std::size_t k) const {
    if (kind == ManifoldKind::torus) {
      auto m = torus_mode(k);
      double lam = 0.0;
      for (int j = 0; j < dim; ++j) {
        double kj = 2.0 * pi * m[j] / periods[j];
        lam += kj * kj;
      }
      return lam;
    }
    int l, m;
    sphere_mode(k, l, m);
    return double(l) * (l + 1) / (radius * radius);
  }

  // Quadrature weights per grid node (row-major layout).  They satisfy
  // sum_k w_k = volume and integrate band-limited products exactly.
  std::vector<double> quadrature_weights() const;

  bool operator==(const ManifoldSpec& o) const {
    return kind == o.kind && dim == o.dim && cutoff == o.cutoff && periods == o.periods &&
           radius == o.radius && grid_shape == o.grid_shape;
  }
  bool operator!=(const ManifoldSpec& o) const { return !(*this == o); }

  std::string describe() const {
    if (kind == ManifoldKind::torus) {
      std::string s = "torus" + std::to_string(dim) + "d N=" + std::to_string(cutoff) + " grid=";
      for (std::size_t j = 0; j < grid_shape.size(); ++j)
        s += (j ? "x" : "") + std::to_string(grid_shape[j]);
      return s;
    }
    return "sphere2 L=" + std::to_string(cutoff) + " grid=" + std::to_string(grid_shape[0]) +
           "x" + std::to_string(grid_shape[1]);
  }
};

inline std::vector<double> ManifoldSpec::quadrature_weights() const {
  std::vector<double> w(grid_size());
  if (kind == ManifoldKind::torus) {
    double wu = volume() / double(grid_size());
    for (auto& v : w) v = wu;
    return w;
  }
  int nth = grid_shape[0], nph = grid_shape[1];
  std::vector<double> x, gw;
  gauss_legendre(nth, x, gw);
  double c = radius * radius * 2.0 * pi / nph;
  for (int i = 0; i < nth; ++i)
    for (int j = 0; j < nph; ++j) w[std::size_t(i) * nph + j] = c * gw[i];
  return w;
}

}  // namespace sdm
