#pragma once
//============================================================================
// Coupled Schrodinger-Debye evolution
//
//   i du/dt + Lap u = u v
//   kappa dv/dt + v = lambda |u|^2,     lambda in {-1 (focusing), +1}
//
// and its kappa->0 companion, the cubic NLS  i du/dt + Lap u = lambda|u|^2 u.
//
// Split-step scheme (Strang): half nonlinear, full linear, half nonlinear.
//   * linear flow: spectral multiplier exp(-i tau lam_k)
//   * nonlinear/relaxation flow over tau with |u|^2 frozen pointwise has the
//     exact solution
//       v(tau) = e^{-tau/k} v0 + lambda |u|^2 (1 - e^{-tau/k})
//       Theta  = integral of v = k v0 (1-e^{-tau/k})
//                + lambda |u|^2 (tau - k (1-e^{-tau/k}))
//       u      <- u exp(-i Theta)
//     which leaves |u| pointwise invariant and keeps v real.
// Substeps mutate (u, v) only; strang_step/nls_step advance state.t by dt.
//
// The integral (Duhamel) picture drives the fixed-point machinery:
//   Phi(u)(t) = S(t) u0 - i int_0^t S(t-s) [u(s) v(s)] ds,
// with v(s) reconstructed from the |u|^2 history by the exponential-kernel
// memory integral.  All time quadrature is trapezoidal on uniform grids.
//============================================================================

#include <limits>

#include "sdm/spectral_ops.hpp"

namespace sdm {

struct SDParams {
  double kappa = 1.0;
  int lambda = 1;

  void check() const {
    if (!(kappa > 0.0)) throw std::invalid_argument("kappa must be positive");
    if (lambda != 1 && lambda != -1) throw std::invalid_argument("lambda must be +1 or -1");
  }
};

struct SDState {
  double t = 0.0;
  SpectralField u;
  GridField v;

  void check() const {
    u.check();
    v.check();
    require_same_manifold(u.manifold, v.manifold);
  }
};

// Pointwise exact relaxation/phase update on grid values (|u| preserved,
// Im(v) only decays).  Exposed separately so the unitarity-by-construction
// property is testable at the grid level, before re-truncation.
inline void relaxation_phase_kernel(std::vector<cplx>& u, std::vector<cplx>& v, double kappa,
                                    int lambda, double tau) {
  double E = std::exp(-tau / kappa);
  double omE = -std::expm1(-tau / kappa);  // 1 - E, accurate for small tau
  double lam = double(lambda);
  for (std::size_t k = 0; k < u.size(); ++k) {
    double a2 = std::norm(u[k]);
    double vr = v[k].real(), vi = v[k].imag();
    double theta = kappa * vr * omE + lam * a2 * (tau - kappa * omE);
    v[k] = cplx{E * vr + lam * a2 * omE, E * vi};
    u[k] *= std::exp(cplx{0.0, -theta});
  }
}

inline void nonlinear_substep(SDState& s, const SDParams& p, double tau) {
  p.check();
  s.check();
  if (tau < 0.0) throw std::invalid_argument("substep time must be >= 0");
  if (tau == 0.0) return;
  auto ug = synthesize(s.u);
  relaxation_phase_kernel(ug.value, s.v.value, p.kappa, p.lambda, tau);
  s.u = analyze(ug);  // re-truncate: the phase factor spreads spectrum past the cutoff
}

inline void linear_substep(SDState& s, const SDParams& p, double tau) {
  p.check();
  s.u = apply_multiplier(s.u, [tau](double lam) { return std::exp(cplx{0.0, -tau * lam}); });
}

inline void strang_step(SDState& s, const SDParams& p, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  nonlinear_substep(s, p, 0.5 * dt);
  linear_substep(s, p, dt);
  nonlinear_substep(s, p, 0.5 * dt);
  s.t += dt;
}

// Cubic NLS reference flow (the kappa -> 0 limit), same splitting.
inline void nls_step(SDState& s, const SDParams& p, double dt) {
  p.check();
  s.u.check();
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  double lam = double(p.lambda);
  auto half = [&](double tau) {
    auto ug = synthesize(s.u);
    for (auto& z : ug.value) z *= std::exp(cplx{0.0, -lam * std::norm(z) * tau});
    s.u = analyze(ug);
  };
  half(0.5 * dt);
  linear_substep(s, p, dt);
  half(0.5 * dt);
  s.t += dt;
}

// Free Schrodinger group S(t) = exp(i t Lap): multiplier exp(-i t lam_k).
inline SpectralField free_propagate(const SpectralField& u0, double t) {
  return apply_multiplier(u0, [t](double lam) { return std::exp(cplx{0.0, -t * lam}); });
}

//----------------------------------------------------------------------------
// Time grids / trajectories
//----------------------------------------------------------------------------

struct Trajectory {
  std::vector<double> t;
  std::vector<SpectralField> u;

  void check() const {
    if (t.size() != u.size()) throw std::invalid_argument("trajectory times/fields size mismatch");
    if (t.empty()) throw std::invalid_argument("empty trajectory");
    for (const auto& f : u) require_same_manifold(f.manifold, u[0].manifold);
  }

  // uniform spacing (validated to 1e-9 relative)
  double dt_uniform() const {
    if (t.size() < 2) throw std::invalid_argument("trajectory needs >= 2 nodes");
    double dt = t[1] - t[0];
    if (!(dt > 0.0)) throw std::invalid_argument("trajectory times must increase");
    for (std::size_t n = 1; n + 1 < t.size(); ++n)
      if (std::abs(t[n + 1] - t[n] - dt) > 1e-9 * std::max(1.0, std::abs(dt)))
        throw std::invalid_argument("trajectory time grid is not uniform");
    return dt;
  }
};

// Free-flow trajectory u(t_n) = S(t_n) u0 on n_grid uniform intervals.
inline Trajectory free_trajectory(const SpectralField& u0, double T, int n_grid) {
  Trajectory tr;
  for (int n = 0; n <= n_grid; ++n) {
    double tn = T * n / n_grid;
    tr.t.push_back(tn);
    tr.u.push_back(free_propagate(u0, tn));
  }
  return tr;
}

// Reconstruct v along a |u|^2 history:
//   v(t) = e^{-t/k} v0 + (lambda/k) int_0^t e^{-(t-s)/k} |u(s)|^2 ds
// via the one-step recursion  M(t+dt) = e^{-dt/k} M(t) + trapezoid increment,
// so the cost is linear in the number of nodes.
inline std::vector<GridField> debye_memory(const Trajectory& traj, const GridField& v0,
                                           const SDParams& p) {
  p.check();
  traj.check();
  v0.check();
  require_same_manifold(v0.manifold, traj.u[0].manifold);
  std::vector<GridField> out;
  out.reserve(traj.t.size());
  out.push_back(v0);
  if (traj.t.size() == 1) return out;
  double dt = traj.dt_uniform();
  double E = std::exp(-dt / p.kappa);
  double lam_over_k = double(p.lambda) / p.kappa;
  auto a2 = [&](std::size_t n) {
    auto g = synthesize(traj.u[n]);
    std::vector<double> r(g.value.size());
    for (std::size_t k = 0; k < r.size(); ++k) r[k] = std::norm(g.value[k]);
    return r;
  };
  std::vector<double> prev = a2(0);
  for (std::size_t n = 1; n < traj.t.size(); ++n) {
    std::vector<double> cur = a2(n);
    GridField v = out.back();
    for (std::size_t k = 0; k < v.value.size(); ++k) {
      double vr = v.value[k].real(), vi = v.value[k].imag();
      double inc = lam_over_k * 0.5 * dt * (E * prev[k] + cur[k]);
      v.value[k] = cplx{E * vr + inc, E * vi};
    }
    out.push_back(std::move(v));
    prev = std::move(cur);
  }
  return out;
}

// One application of the Duhamel fixed-point map:
//   Phi(u)(t_n) = S(t_n) u0 - i I_n,
//   I_n = trapezoid_{[0,t_n]} S(t_n - s) G(s),   G(s) = u(s) v(s),
// where v is the memory reconstruction above.  I_n is accumulated by
//   I_n = S(dt) [I_{n-1} + (dt/2) G_{n-1}] + (dt/2) G_n,
// which reproduces the trapezoid weights exactly.
inline Trajectory duhamel_map(const Trajectory& traj, const SpectralField& u0, const GridField& v0,
                              const SDParams& p) {
  traj.check();
  u0.check();
  require_same_manifold(u0.manifold, traj.u[0].manifold);
  double dt = traj.dt_uniform();
  auto vmem = debye_memory(traj, v0, p);

  auto G = [&](std::size_t n) {
    auto ug = synthesize(traj.u[n]);
    for (std::size_t k = 0; k < ug.value.size(); ++k) ug.value[k] *= vmem[n].value[k].real();
    return analyze(ug);
  };

  Trajectory out;
  out.t = traj.t;
  out.u.reserve(traj.t.size());
  out.u.push_back(u0);
  SpectralField I = SpectralField::zero(u0.manifold);
  SpectralField Gprev = G(0);
  const cplx mi{0.0, -1.0};
  for (std::size_t n = 1; n < traj.t.size(); ++n) {
    SpectralField Gcur = G(n);
    for (std::size_t k = 0; k < I.coeff.size(); ++k)
      I.coeff[k] = I.coeff[k] + 0.5 * dt * Gprev.coeff[k];
    I = free_propagate(I, dt);
    for (std::size_t k = 0; k < I.coeff.size(); ++k)
      I.coeff[k] = I.coeff[k] + 0.5 * dt * Gcur.coeff[k];
    out.u.push_back(free_propagate(u0, traj.t[n]) + mi * I);
    Gprev = std::move(Gcur);
  }
  return out;
}

// Iteration-space norm  ||u||_X = sup_n ||u(t_n)||_{H^s}
//                               + (trapezoid_n ||u(t_n)||_{L^inf}^p)^{1/p}.
inline double xt_norm(const Trajectory& traj, double s, double p) {
  traj.check();
  if (!(p >= 1.0) || p == inf) throw std::invalid_argument("xt_norm requires finite p >= 1");
  double dt = traj.dt_uniform();
  double sup_hs = 0.0, acc = 0.0;
  for (std::size_t n = 0; n < traj.t.size(); ++n) {
    sup_hs = std::max(sup_hs, sobolev_norm(traj.u[n], s));
    double linf = lp_norm(synthesize(traj.u[n]), inf);
    double wt = (n == 0 || n + 1 == traj.t.size()) ? 0.5 * dt : dt;
    acc += wt * std::pow(linf, p);
  }
  return sup_hs + std::pow(acc, 1.0 / p);
}

//----------------------------------------------------------------------------
// Picard iteration in the Duhamel form
//----------------------------------------------------------------------------

struct PicardResult {
  Trajectory fixed_point;
  std::vector<double> distances;  // xt_norm of successive iterate differences
  double rho = 0.0;               // measured contraction factor
  bool converged = false;
  int iterations = 0;
  double ball_radius = 0.0;       // 2 ||u0||_{H^s}
};

inline PicardResult picard_iterate(const SpectralField& u0, const GridField& v0,
                                   const SDParams& params, double T, int n_grid, double s,
                                   double p, int max_iter, double tol) {
  params.check();
  u0.check();
  if (!(T > 0.0 && T <= 1.0)) throw std::invalid_argument("picard horizon requires 0 < T <= 1");
  if (n_grid < 16) throw std::invalid_argument("picard needs n_grid >= 16");
  if (max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");

  PicardResult res;
  res.ball_radius = 2.0 * sobolev_norm(u0, s);
  Trajectory cur = free_trajectory(u0, T, n_grid);
  for (int k = 0; k < max_iter; ++k) {
    Trajectory next = duhamel_map(cur, u0, v0, params);
    Trajectory diff = next;
    for (std::size_t n = 0; n < diff.u.size(); ++n) diff.u[n] = next.u[n] - cur.u[n];
    double d = xt_norm(diff, s, p);
    res.distances.push_back(d);
    res.iterations = k + 1;
    cur = std::move(next);
    if (d <= tol) {
      res.converged = true;
      break;
    }
  }
  res.fixed_point = std::move(cur);

  // contraction factor: geometric mean of the last few successive ratios
  std::vector<double> ratios;
  for (std::size_t i = 0; i + 1 < res.distances.size(); ++i)
    if (res.distances[i] > 0.0) ratios.push_back(res.distances[i + 1] / res.distances[i]);
  if (ratios.empty()) {
    res.rho = res.converged ? 0.0 : 1.0;
  } else {
    std::size_t take = std::min<std::size_t>(5, ratios.size());
    double lg = 0.0;
    for (std::size_t i = ratios.size() - take; i < ratios.size(); ++i) lg += std::log(ratios[i]);
    res.rho = std::exp(lg / double(take));
  }
  return res;
}

}  // namespace sdm
