#pragma once
//============================================================================
// Per-step diagnostics and bound checks for simulated trajectories.
//
// A DiagnosticsRow holds the quadrature readouts of one state:
//   mass          = integral |u|^2          (conserved by the flow)
//   grad_sq       = integral |grad u|^2     (spectral sum of lam_k |c_k|^2)
//   coupling      = integral |u|^2 Re v
//   pseudo_energy = grad_sq + coupling
//   l4_4          = integral |u|^4
//   h1_sq         = mass + grad_sq
//   v_l2, v_linf  = L^2 / sup norms of v
//   theta_running = running sup of sqrt(h1_sq) along the row sequence
//
// The pseudo-energy obeys the exact balance law
//   d/dt (grad_sq + coupling) = (1/kappa) (-coupling + lambda * l4_4),
// checked here in two forms: a central-difference residual at interior nodes
// and an integral (trapezoid) residual, both O(dt^2) on smooth runs.
//
// Bound checks compare a trajectory against closed-form envelopes built from
// the initial norms and a fitted Gagliardo-Nirenberg constant C = max(A,B):
//   * apriori_check:   h1_sq(t) <= 2 h1_sq(0) + 18 C ||u0||^2 ||v0||^2 on the
//                      admissible horizon T <= min(1, kappa/(12 C ||u0||^2))
//   * growth_envelope_check:  h1_sq(t) <= C0 exp(A0 t) with A0 = C ||u0||^2,
//                      C0 = h1_sq(0)(1 + ||v0||/2) + (A0/2) ||v0||
//                      (requires lambda = +1, v0 >= 0 pointwise, kappa = 1)
//   * v_bounds_check:  ||v(t)||_inf <= ||v0||_inf
//                      + (1/kappa) ||u||^2_{L^p([0,t];L^inf)} t^{1-2/p}, p > 2
//
// Every report lists the nodes checked, per-node slack (bound - quantity),
// the minimum slack, and a pass flag; pass means min slack >= -tolerance with
// tolerance = 1e-9 * (largest bound value), a pure roundoff allowance.
//============================================================================

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "sdm/dynamics.hpp"
#include "sdm/inequalities.hpp"
#include "sdm/serialize.hpp"

namespace sdm {

//----------------------------------------------------------------------------
// Diagnostics rows
//----------------------------------------------------------------------------

struct DiagnosticsRow {
  double t = 0.0;
  double mass = 0.0;
  double grad_sq = 0.0;
  double coupling = 0.0;
  double pseudo_energy = 0.0;
  double l4_4 = 0.0;
  double h1_sq = 0.0;
  double v_l2 = 0.0;
  double v_linf = 0.0;
  double theta_running = 0.0;
  // sup |u| on the grid; carried for the v sup-norm bound, not a CSV column
  double u_linf = 0.0;
};

inline DiagnosticsRow diagnostics(const SDState& s) {
  s.check();
  auto ug = synthesize(s.u);
  auto w = s.u.manifold.quadrature_weights();

  DiagnosticsRow r;
  r.t = s.t;
  double vl2_sq = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) {
    double a2 = std::norm(ug.value[k]);
    r.mass += w[k] * a2;
    r.l4_4 += w[k] * a2 * a2;
    r.coupling += w[k] * a2 * s.v.value[k].real();
    vl2_sq += w[k] * std::norm(s.v.value[k]);
    r.v_linf = std::max(r.v_linf, std::abs(s.v.value[k]));
    r.u_linf = std::max(r.u_linf, std::abs(ug.value[k]));
  }
  r.grad_sq = gradient_l2_sq(s.u);
  r.pseudo_energy = r.grad_sq + r.coupling;
  r.h1_sq = r.mass + r.grad_sq;
  r.v_l2 = std::sqrt(vl2_sq);
  r.theta_running = std::sqrt(std::max(0.0, r.h1_sq));

  for (double x : {r.mass, r.grad_sq, r.coupling, r.l4_4, r.v_l2, r.v_linf, r.u_linf})
    if (!std::isfinite(x)) throw std::runtime_error("diagnostics produced non-finite entries");
  return r;
}

// Appends diagnostics(s) with theta_running carried forward as the running
// maximum over the rows already collected.
inline void append_diagnostics(std::vector<DiagnosticsRow>& rows, const SDState& s) {
  DiagnosticsRow r = diagnostics(s);
  if (!rows.empty()) r.theta_running = std::max(r.theta_running, rows.back().theta_running);
  rows.push_back(r);
}

namespace detail {

inline double rows_dt_uniform(const std::vector<DiagnosticsRow>& rows) {
  if (rows.size() < 2) throw std::invalid_argument("row sequence needs >= 2 nodes");
  double dt = rows[1].t - rows[0].t;
  if (!(dt > 0.0)) throw std::invalid_argument("row times must increase");
  for (std::size_t n = 1; n + 1 < rows.size(); ++n)
    if (std::abs(rows[n + 1].t - rows[n].t - dt) > 1e-9 * std::max(1.0, std::abs(dt)))
      throw std::invalid_argument("row time grid is not uniform");
  return dt;
}

}  // namespace detail

//----------------------------------------------------------------------------
// Pseudo-energy balance residuals
//----------------------------------------------------------------------------

// Central-difference residual of the balance law at interior nodes; endpoint
// entries are NaN (rendered blank in CSV output).
inline std::vector<double> identity_residual(const std::vector<DiagnosticsRow>& rows,
                                             const SDParams& p) {
  p.check();
  if (rows.size() < 3) throw std::invalid_argument("identity residual needs >= 3 rows");
  double dt = detail::rows_dt_uniform(rows);
  std::vector<double> res(rows.size(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t n = 1; n + 1 < rows.size(); ++n) {
    double ddt = (rows[n + 1].pseudo_energy - rows[n - 1].pseudo_energy) / (2.0 * dt);
    double rhs = (-rows[n].coupling + double(p.lambda) * rows[n].l4_4) / p.kappa;
    res[n] = ddt - rhs;
  }
  return res;
}

// Integral form: pseudo_energy(t_n) - pseudo_energy(t_0) minus the running
// trapezoid of the balance-law right-hand side.  Entry 0 is exactly 0.
inline std::vector<double> integrated_identity_residual(const std::vector<DiagnosticsRow>& rows,
                                                        const SDParams& p) {
  p.check();
  if (rows.empty()) throw std::invalid_argument("integrated identity needs >= 1 row");
  std::vector<double> res(rows.size(), 0.0);
  if (rows.size() == 1) return res;
  double dt = detail::rows_dt_uniform(rows);
  auto rhs = [&](std::size_t n) {
    return (-rows[n].coupling + double(p.lambda) * rows[n].l4_4) / p.kappa;
  };
  double acc = 0.0;
  for (std::size_t n = 1; n < rows.size(); ++n) {
    acc += 0.5 * dt * (rhs(n - 1) + rhs(n));
    res[n] = (rows[n].pseudo_energy - rows[0].pseudo_energy) - acc;
  }
  return res;
}

//----------------------------------------------------------------------------
// Bound-check reports
//----------------------------------------------------------------------------

struct BoundCheckReport {
  std::string id;
  double horizon = 0.0;        // largest time the check covers
  std::vector<double> t;       // nodes actually checked
  std::vector<double> slack;   // bound - quantity at each checked node
  double min_slack = 0.0;
  double tolerance = 0.0;      // roundoff allowance used by the pass flag
  bool pass = false;
  nlohmann::json constants;    // constants entering the bound, with provenance
};

inline void to_json(nlohmann::json& j, const BoundCheckReport& rep) {
  j = nlohmann::json{{"id", rep.id},
                     {"horizon", rep.horizon},
                     {"nodes_checked", rep.t.size()},
                     {"t", rep.t},
                     {"slack", rep.slack},
                     {"min_slack", rep.min_slack},
                     {"tolerance", rep.tolerance},
                     {"pass", rep.pass},
                     {"constants", rep.constants}};
}

namespace detail {

// tolerance = 1e-9 * (scale of the bound); empty node sets never pass.
inline void finish_bound_report(BoundCheckReport& rep, double bound_scale) {
  rep.tolerance = 1e-9 * std::abs(bound_scale);
  if (rep.slack.empty()) {
    rep.min_slack = std::numeric_limits<double>::quiet_NaN();
    rep.pass = false;
    return;
  }
  rep.min_slack = *std::min_element(rep.slack.begin(), rep.slack.end());
  rep.pass = rep.min_slack >= -rep.tolerance;
}

inline nlohmann::json gn_provenance(const GNConstants& gn) {
  return nlohmann::json{{"A", gn.A},           {"B", gn.B},
                        {"C", gn.C},           {"margin", gn.margin},
                        {"n_fit", gn.n_fit},   {"n_holdout", gn.n_holdout},
                        {"seed_fit", gn.seed_fit}, {"seed_holdout", gn.seed_holdout}};
}

}  // namespace detail

struct InitialNorms {
  double u_l2_sq = 0.0;  // integral |u0|^2
  double u_h1_sq = 0.0;  // integral |u0|^2 + integral |grad u0|^2
  double v_l2 = 0.0;
  double v_linf = 0.0;
  double v_min_real = 0.0;  // pointwise minimum of Re v0 on the grid
};

inline InitialNorms initial_norms(const SDState& s0) {
  DiagnosticsRow r = diagnostics(s0);
  InitialNorms n0;
  n0.u_l2_sq = r.mass;
  n0.u_h1_sq = r.h1_sq;
  n0.v_l2 = r.v_l2;
  n0.v_linf = r.v_linf;
  n0.v_min_real = std::numeric_limits<double>::infinity();
  for (const auto& z : s0.v.value) n0.v_min_real = std::min(n0.v_min_real, z.real());
  if (s0.v.value.empty()) n0.v_min_real = 0.0;
  return n0;
}

// H^1 a-priori bound on its admissible horizon.  The horizon shrinks with the
// fitted C; the report records the horizon actually used.
inline BoundCheckReport apriori_check(const std::vector<DiagnosticsRow>& rows,
                                      const InitialNorms& n0, const GNConstants& gn,
                                      double kappa) {
  if (!(kappa > 0.0)) throw std::invalid_argument("kappa must be positive");
  if (!(gn.C > 0.0)) throw std::invalid_argument("bound check needs a positive fitted constant");

  BoundCheckReport rep;
  rep.id = "apriori_h1";
  double denom = 12.0 * gn.C * n0.u_l2_sq;
  double t_adm = denom > 0.0 ? std::min(1.0, kappa / denom) : 1.0;
  rep.horizon = t_adm;
  double bound = 2.0 * n0.u_h1_sq + 18.0 * gn.C * n0.u_l2_sq * n0.v_l2 * n0.v_l2;
  for (const auto& r : rows) {
    if (r.t > t_adm + 1e-9 * std::max(1.0, t_adm)) continue;
    rep.t.push_back(r.t);
    rep.slack.push_back(bound - r.h1_sq);
  }
  detail::finish_bound_report(rep, bound);
  rep.constants = {{"bound", bound},
                   {"t_admissible", t_adm},
                   {"kappa", kappa},
                   {"u0_l2_sq", n0.u_l2_sq},
                   {"u0_h1_sq", n0.u_h1_sq},
                   {"v0_l2", n0.v_l2},
                   {"gn", detail::gn_provenance(gn)}};
  return rep;
}

// Exponential growth envelope h1_sq(t) <= C0 exp(A0 t); valid for the
// defocusing sign with nonnegative initial v and unit relaxation time, so any
// other configuration is rejected.
inline BoundCheckReport growth_envelope_check(const std::vector<DiagnosticsRow>& rows,
                                              const InitialNorms& n0, const SDParams& p,
                                              const GNConstants& gn) {
  p.check();
  if (p.lambda != 1)
    throw std::invalid_argument("rejected configuration: growth envelope needs lambda = +1");
  if (std::abs(p.kappa - 1.0) > 1e-12)
    throw std::invalid_argument("rejected configuration: growth envelope needs kappa = 1");
  if (!(n0.v_min_real >= -1e-12))
    throw std::invalid_argument("rejected configuration: growth envelope needs v0 >= 0 pointwise");
  if (!(gn.C > 0.0)) throw std::invalid_argument("bound check needs a positive fitted constant");

  BoundCheckReport rep;
  rep.id = "growth_envelope_h1";
  double A0 = gn.C * n0.u_l2_sq;
  double C0 = n0.u_h1_sq + 0.5 * A0 * n0.v_l2 + 0.5 * n0.u_h1_sq * n0.v_l2;
  double scale = 0.0;
  for (const auto& r : rows) {
    double bound = C0 * std::exp(A0 * r.t);
    rep.t.push_back(r.t);
    rep.slack.push_back(bound - r.h1_sq);
    scale = std::max(scale, bound);
  }
  rep.horizon = rows.empty() ? 0.0 : rows.back().t;
  detail::finish_bound_report(rep, scale);
  rep.constants = {{"A0", A0},
                   {"C0", C0},
                   {"u0_l2_sq", n0.u_l2_sq},
                   {"u0_h1_sq", n0.u_h1_sq},
                   {"v0_l2", n0.v_l2},
                   {"gn", detail::gn_provenance(gn)}};
  return rep;
}

// Relaxation sup-norm persistence: ||v(t)||_inf stays under the initial sup
// norm plus the time-mixed square of sup |u|.  u_linf[n] must be sup |u| at
// the n-th row's time (diagnostics carries it as DiagnosticsRow::u_linf).
inline BoundCheckReport v_bounds_check(const std::vector<DiagnosticsRow>& rows, double v0_linf,
                                       const std::vector<double>& u_linf, double kappa,
                                       double p) {
  if (!(p > 2.0) || p == inf) throw std::invalid_argument("v sup bound needs finite p > 2");
  if (!(kappa > 0.0)) throw std::invalid_argument("kappa must be positive");
  if (u_linf.size() != rows.size())
    throw std::invalid_argument("u sup-norm series must align with rows");

  BoundCheckReport rep;
  rep.id = "v_sup_persistence";
  double dt = rows.size() >= 2 ? detail::rows_dt_uniform(rows) : 0.0;
  double acc = 0.0;  // trapezoid of (sup |u|)^p over [t_0, t_n]
  double scale = 0.0;
  for (std::size_t n = 0; n < rows.size(); ++n) {
    if (n > 0) acc += 0.5 * dt * (std::pow(u_linf[n - 1], p) + std::pow(u_linf[n], p));
    double span = rows[n].t - rows[0].t;
    double bound = v0_linf;
    if (n > 0 && span > 0.0)
      bound += (1.0 / kappa) * std::pow(acc, 2.0 / p) * std::pow(span, 1.0 - 2.0 / p);
    rep.t.push_back(rows[n].t);
    rep.slack.push_back(bound - rows[n].v_linf);
    scale = std::max(scale, std::abs(bound));
  }
  rep.horizon = rows.empty() ? 0.0 : rows.back().t;
  detail::finish_bound_report(rep, scale);
  rep.constants = {{"v0_linf", v0_linf}, {"kappa", kappa}, {"p", p}};
  return rep;
}

//----------------------------------------------------------------------------
// CSV output
//----------------------------------------------------------------------------

inline constexpr const char* kDiagnosticsCsvHeader =
    "t,mass,grad_sq,coupling,pseudo_energy,l4_4,h1_sq,v_l2,v_linf,theta_running,"
    "identity_residual";

// residual may be empty (column left blank) or one entry per row, with NaN
// entries (the endpoints of the central-difference form) rendered blank.
inline void write_diagnostics_csv(std::ostream& os, const std::vector<DiagnosticsRow>& rows,
                                  const std::vector<double>& residual) {
  if (!residual.empty() && residual.size() != rows.size())
    throw std::invalid_argument("residual series must be empty or align with rows");
  os << kDiagnosticsCsvHeader << '\n';
  char buf[40];
  auto put = [&](double x) {
    std::snprintf(buf, sizeof buf, "%.17g", x);
    os << buf;
  };
  for (std::size_t n = 0; n < rows.size(); ++n) {
    const auto& r = rows[n];
    for (double x : {r.t, r.mass, r.grad_sq, r.coupling, r.pseudo_energy, r.l4_4, r.h1_sq,
                     r.v_l2, r.v_linf, r.theta_running}) {
      put(x);
      os << ',';
    }
    if (!residual.empty() && std::isfinite(residual[n])) put(residual[n]);
    os << '\n';
  }
}

}  // namespace sdm
