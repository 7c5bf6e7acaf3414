#pragma once
//============================================================================
// Run configuration: a single versioned JSON document describing one scenario.
//
// Top-level shape:
//   {
//     "schema": 1,
//     "seed": 7,                       // base seed for unseeded random specs
//     "manifold": { "kind": "torus", "dim": 2, "cutoff": 16, ... },
//     "params":   { "kappa": 1.0, "lambda": 1 },
//     "u0": { "type": "zero" | "modes" | "random", ... },
//     "v0": { "type": "zero" | "modes" | "random" | "well_prepared", ... },
//     "out": "runs/example",           // optional; --out overrides
//     <exactly one scenario block>:
//       "simulate":    { "dt", "t_end", "monitors": [...], ... }
//       "picard":      { "T", "n_grid", "max_iter", "tol", "s", "p", ... }
//       "ineq":        { "probes": [ {"type": ...}, ... ] }
//       "kappa_limit": { "kappas": [...], "t_end", "dt" }
//   }
//
// Initial-data specs:
//   zero            all coefficients zero
//   modes           explicit coefficient list; torus entries
//                   {"m": [m1,...,md], "c": [re, im]}, sphere entries
//                   {"l": l, "m": m, "c": [re, im]}
//   random          seeded smooth field, coefficient decay (1+lam)^(-beta/2),
//                   L^2-normalized, then "normalize": "none"|"l2"|"h1" and
//                   "scale" applied; omitted seeds derive from the base seed
//                   (slot 0 for u0, slot 1 for v0)
//   well_prepared   v0 = lambda |u0|^2 on the grid (v0 only)
// Random v0 takes "nonnegative": true to square the real field pointwise.
//
// Validation throws ConfigError with a message naming the offending key; the
// CLI maps ConfigError to exit code 2.
//============================================================================

#include <cmath>
#include <string>
#include <vector>

#include "sdm/inequalities.hpp"
#include "sdm/serialize.hpp"

namespace sdm {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kConfigSchema = 1;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InitSpec {
  std::string type = "zero";  // "zero" | "modes" | "random" | "well_prepared"
  json modes;                 // entries for type "modes"
  std::uint64_t seed = 0;     // effective seed for type "random"
  double beta = 2.0;
  double scale = 1.0;
  std::string normalize = "none";  // "none" | "l2" | "h1"
  bool nonnegative = false;        // random v0: square the field pointwise
};

struct SimulateSpec {
  double dt = 0.0;
  double t_end = 0.0;
  int n_steps = 0;  // derived: t_end / dt
  std::vector<std::string> monitors;
  std::string gn_constants;  // fitted-constants file for the H^1 checks
  double v_bound_p = 4.0;
};

struct PicardSpec {
  double T = 0.5;
  int n_grid = 64;
  int max_iter = 15;
  double tol = 1e-10;
  double s = 1.0;
  double p = 4.0;
  std::vector<double> sweep_scales;  // empty: no existence-time sweep
};

struct KappaLimitSpec {
  std::vector<double> kappas;
  double t_end = 0.0;
  double dt = 0.0;
  int n_steps = 0;
};

struct RunConfig {
  std::uint64_t seed = 0;
  ManifoldSpec manifold;
  SDParams params;
  InitSpec u0, v0;
  std::string scenario;  // "simulate" | "picard" | "ineq" | "kappa_limit"
  SimulateSpec simulate;
  PicardSpec picard;
  std::vector<json> probes;  // "ineq" scenario, validated entries
  KappaLimitSpec kappa_limit;
  std::string out;  // default output directory (CLI --out overrides)
  json raw;         // original document, source of the config echo
};

namespace detail {

[[noreturn]] inline void config_fail(const std::string& msg) { throw ConfigError(msg); }

inline double require_number(const json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) config_fail(where + ": missing \"" + key + "\"");
  if (!j.at(key).is_number()) config_fail(where + ": \"" + key + "\" must be a number");
  return j.at(key).get<double>();
}

inline int steps_dividing(double dt, double t_end, const std::string& where) {
  if (!(dt > 0.0)) config_fail(where + ": \"dt\" must be positive");
  if (!(t_end > 0.0)) config_fail(where + ": \"t_end\" must be positive");
  double ratio = t_end / dt;
  int n = int(std::lround(ratio));
  if (n < 1 || std::abs(n * dt - t_end) > 1e-9 * std::max(1.0, std::abs(t_end)))
    config_fail(where + ": \"dt\" must divide \"t_end\" (to 1e-9)");
  return n;
}

inline InitSpec parse_init(const json& j, const std::string& where, bool is_v0,
                           std::uint64_t base_seed, std::uint64_t seed_slot) {
  if (!j.is_object()) config_fail(where + ": must be an object");
  InitSpec out;
  out.type = j.value("type", std::string("zero"));
  if (out.type == "zero") return out;
  if (out.type == "well_prepared") {
    if (!is_v0) config_fail(where + ": \"well_prepared\" is only meaningful for v0");
    return out;
  }
  if (out.type == "modes") {
    if (!j.contains("modes") || !j.at("modes").is_array() || j.at("modes").empty())
      config_fail(where + ": type \"modes\" needs a nonempty \"modes\" array");
    out.modes = j.at("modes");
    if (j.value("nonnegative", false))
      config_fail(where + ": \"nonnegative\" applies to random specs only");
    return out;
  }
  if (out.type == "random") {
    out.seed = j.contains("seed") ? j.at("seed").get<std::uint64_t>()
                                  : derive_seed(base_seed, seed_slot);
    out.beta = j.value("beta", 2.0);
    if (!(out.beta > 0.0)) config_fail(where + ": \"beta\" must be positive");
    out.scale = j.value("scale", 1.0);
    if (!std::isfinite(out.scale)) config_fail(where + ": \"scale\" must be finite");
    out.normalize = j.value("normalize", std::string("none"));
    if (out.normalize != "none" && out.normalize != "l2" && out.normalize != "h1")
      config_fail(where + ": \"normalize\" must be one of none, l2, h1");
    out.nonnegative = j.value("nonnegative", false);
    if (out.nonnegative && !is_v0)
      config_fail(where + ": \"nonnegative\" is only meaningful for v0");
    return out;
  }
  config_fail(where + ": unknown type \"" + out.type + "\"");
}

inline void validate_probe(const json& p, const ManifoldSpec& m) {
  if (!p.is_object() || !p.contains("type"))
    config_fail("ineq.probes: each probe needs a \"type\"");
  std::string type = p.at("type").get<std::string>();
  if (type == "bilinear") {
    if (require_number(p, "n", "ineq.probes.bilinear") < 1)
      config_fail("ineq.probes.bilinear: \"n\" must be >= 1");
    if (p.value("s", 1.0) < 0.0) config_fail("ineq.probes.bilinear: \"s\" must be >= 0");
  } else if (type == "gn") {
    if (m.dim != 2) config_fail("ineq.probes.gn: needs a 2-d manifold");
    if (require_number(p, "n_fit", "ineq.probes.gn") < 1)
      config_fail("ineq.probes.gn: \"n_fit\" must be >= 1");
    if (require_number(p, "n_holdout", "ineq.probes.gn") < 0)
      config_fail("ineq.probes.gn: \"n_holdout\" must be >= 0");
  } else if (type == "strichartz") {
    double pp = require_number(p, "p", "ineq.probes.strichartz");
    try {
      auto pair = admissible_q(m.dim, pp);
      if (pair.q == inf) config_fail("ineq.probes.strichartz: endpoint q = inf is not probed");
    } catch (const std::invalid_argument& e) {
      config_fail(std::string("ineq.probes.strichartz: ") + e.what());
    }
    double T = p.value("T", 1.0);
    if (!(T > 0.0 && T <= 1.0)) config_fail("ineq.probes.strichartz: \"T\" must be in (0, 1]");
    if (require_number(p, "n", "ineq.probes.strichartz") < 1)
      config_fail("ineq.probes.strichartz: \"n\" must be >= 1");
    if (p.value("n_time", 256) < 256)
      config_fail("ineq.probes.strichartz: \"n_time\" must be >= 256");
  } else if (type == "admissible_table") {
    if (!p.contains("d") || !p.at("d").is_array() || !p.contains("p") || !p.at("p").is_array())
      config_fail("ineq.probes.admissible_table: needs arrays \"d\" and \"p\"");
    for (const auto& d : p.at("d"))
      for (const auto& q : p.at("p")) {
        try {
          admissible_q(d.get<int>(), q.get<double>());
        } catch (const std::invalid_argument& e) {
          config_fail(std::string("ineq.probes.admissible_table: ") + e.what());
        }
      }
  } else {
    config_fail("ineq.probes: unknown probe type \"" + type + "\"");
  }
}

}  // namespace detail

inline RunConfig parse_config(const json& j) {
  if (!j.is_object()) detail::config_fail("config: document must be a JSON object");
  if (!j.contains("schema") || !j.at("schema").is_number_integer() ||
      j.at("schema").get<int>() != kConfigSchema)
    detail::config_fail("config: \"schema\" must be the integer " +
                        std::to_string(kConfigSchema));

  RunConfig cfg;
  cfg.raw = j;
  cfg.seed = j.value("seed", std::uint64_t(0));

  if (!j.contains("manifold")) detail::config_fail("config: missing \"manifold\"");
  try {
    cfg.manifold = manifold_from_json(j.at("manifold"));
  } catch (const std::exception& e) {
    detail::config_fail(std::string("manifold: ") + e.what());
  }

  if (j.contains("params")) {
    const auto& p = j.at("params");
    cfg.params.kappa = p.value("kappa", 1.0);
    cfg.params.lambda = p.value("lambda", 1);
    try {
      cfg.params.check();
    } catch (const std::exception& e) {
      detail::config_fail(std::string("params: ") + e.what());
    }
  }

  cfg.u0 = detail::parse_init(j.value("u0", json::object()), "u0", false, cfg.seed, 0);
  cfg.v0 = detail::parse_init(j.value("v0", json::object()), "v0", true, cfg.seed, 1);
  cfg.out = j.value("out", std::string());

  int scenario_blocks = 0;
  for (const char* name : {"simulate", "picard", "ineq", "kappa_limit"})
    if (j.contains(name)) {
      ++scenario_blocks;
      cfg.scenario = name;
    }
  if (scenario_blocks != 1)
    detail::config_fail(
        "config: exactly one scenario block (simulate, picard, ineq, kappa_limit) is required");

  if (cfg.scenario == "simulate") {
    const auto& s = j.at("simulate");
    cfg.simulate.dt = detail::require_number(s, "dt", "simulate");
    cfg.simulate.t_end = detail::require_number(s, "t_end", "simulate");
    cfg.simulate.n_steps = detail::steps_dividing(cfg.simulate.dt, cfg.simulate.t_end, "simulate");
    if (s.contains("monitors")) {
      if (!s.at("monitors").is_array()) detail::config_fail("simulate: \"monitors\" must be an array");
      for (const auto& m : s.at("monitors")) {
        std::string name = m.get<std::string>();
        if (name != "apriori" && name != "growth_envelope" && name != "v_bounds")
          detail::config_fail("simulate: unknown monitor \"" + name + "\"");
        cfg.simulate.monitors.push_back(name);
      }
    }
    cfg.simulate.gn_constants = s.value("gn_constants", std::string());
    cfg.simulate.v_bound_p = s.value("v_bound_p", 4.0);
    for (const auto& m : cfg.simulate.monitors) {
      if ((m == "apriori" || m == "growth_envelope") && cfg.simulate.gn_constants.empty())
        detail::config_fail("simulate: monitor \"" + m + "\" needs \"gn_constants\" (a file "
                            "written by an ineq run's gn probe)");
      if (m == "v_bounds" && !(cfg.simulate.v_bound_p > 2.0))
        detail::config_fail("simulate: \"v_bound_p\" must be > 2");
    }
    if (!cfg.simulate.gn_constants.empty()) {
      try {
        gn_constants_from_json(read_json_file(cfg.simulate.gn_constants));
      } catch (const std::exception& e) {
        detail::config_fail("simulate: \"gn_constants\" file \"" + cfg.simulate.gn_constants +
                            "\" is unusable: " + e.what());
      }
    }
  } else if (cfg.scenario == "picard") {
    const auto& s = j.at("picard");
    cfg.picard.T = detail::require_number(s, "T", "picard");
    if (!(cfg.picard.T > 0.0 && cfg.picard.T <= 1.0))
      detail::config_fail("picard: \"T\" must be in (0, 1]");
    cfg.picard.n_grid = s.value("n_grid", 64);
    if (cfg.picard.n_grid < 16) detail::config_fail("picard: \"n_grid\" must be >= 16");
    cfg.picard.max_iter = s.value("max_iter", 15);
    if (cfg.picard.max_iter < 1) detail::config_fail("picard: \"max_iter\" must be >= 1");
    cfg.picard.tol = s.value("tol", 1e-10);
    if (!(cfg.picard.tol > 0.0)) detail::config_fail("picard: \"tol\" must be positive");
    cfg.picard.s = s.value("s", 1.0);
    if (cfg.picard.s < 0.0) detail::config_fail("picard: \"s\" must be >= 0");
    cfg.picard.p = s.value("p", 4.0);
    if (!(cfg.picard.p >= 1.0) || cfg.picard.p == inf)
      detail::config_fail("picard: \"p\" must be finite and >= 1");
    if (s.contains("sweep_scales")) {
      cfg.picard.sweep_scales = s.at("sweep_scales").get<std::vector<double>>();
      for (std::size_t i = 0; i < cfg.picard.sweep_scales.size(); ++i) {
        if (!(cfg.picard.sweep_scales[i] > 0.0))
          detail::config_fail("picard: \"sweep_scales\" must be positive");
        if (i > 0 && !(cfg.picard.sweep_scales[i] > cfg.picard.sweep_scales[i - 1]))
          detail::config_fail("picard: \"sweep_scales\" must be strictly increasing");
      }
    }
  } else if (cfg.scenario == "ineq") {
    const auto& s = j.at("ineq");
    if (!s.contains("probes") || !s.at("probes").is_array() || s.at("probes").empty())
      detail::config_fail("ineq: needs a nonempty \"probes\" array");
    for (const auto& p : s.at("probes")) {
      detail::validate_probe(p, cfg.manifold);
      cfg.probes.push_back(p);
    }
  } else {  // kappa_limit
    const auto& s = j.at("kappa_limit");
    if (!s.contains("kappas") || !s.at("kappas").is_array() || s.at("kappas").empty())
      detail::config_fail("kappa_limit: needs a nonempty \"kappas\" array");
    cfg.kappa_limit.kappas = s.at("kappas").get<std::vector<double>>();
    for (std::size_t i = 0; i < cfg.kappa_limit.kappas.size(); ++i) {
      if (!(cfg.kappa_limit.kappas[i] > 0.0))
        detail::config_fail("kappa_limit: \"kappas\" must be positive");
      if (i > 0 && !(cfg.kappa_limit.kappas[i] < cfg.kappa_limit.kappas[i - 1]))
        detail::config_fail("kappa_limit: \"kappas\" must be strictly decreasing");
    }
    cfg.kappa_limit.dt = detail::require_number(s, "dt", "kappa_limit");
    cfg.kappa_limit.t_end = detail::require_number(s, "t_end", "kappa_limit");
    cfg.kappa_limit.n_steps =
        detail::steps_dividing(cfg.kappa_limit.dt, cfg.kappa_limit.t_end, "kappa_limit");
    if (cfg.v0.type != "well_prepared")
      detail::config_fail("kappa_limit: requires v0 {\"type\": \"well_prepared\"} so the "
                          "relaxation variable starts on its small-kappa equilibrium");
  }
  return cfg;
}

inline RunConfig load_config(const std::string& path) {
  json j;
  try {
    j = read_json_file(path);
  } catch (const std::exception& e) {
    detail::config_fail(std::string("cannot read config: ") + e.what());
  }
  try {
    return parse_config(j);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    detail::config_fail(std::string("config: ") + e.what());
  }
}

//----------------------------------------------------------------------------
// Initial-data realization
//----------------------------------------------------------------------------

namespace detail {

inline SpectralField modes_field(const ManifoldSpec& m, const json& modes,
                                 const std::string& where) {
  auto f = SpectralField::zero(m);
  for (const auto& entry : modes) {
    if (!entry.contains("c") || !entry.at("c").is_array() || entry.at("c").size() != 2)
      config_fail(where + ": each mode needs \"c\": [re, im]");
    cplx c{entry.at("c").at(0).get<double>(), entry.at("c").at(1).get<double>()};
    std::size_t k = 0;
    try {
      if (m.kind == ManifoldKind::torus) {
        if (!entry.contains("m")) config_fail(where + ": torus modes need \"m\": [m1,...]");
        auto mv = entry.at("m").get<std::vector<int>>();
        if (int(mv.size()) != m.dim)
          config_fail(where + ": \"m\" must have " + std::to_string(m.dim) + " entries");
        std::array<int, 3> idx{0, 0, 0};
        for (std::size_t a = 0; a < mv.size(); ++a) idx[a] = mv[a];
        k = m.torus_index(idx);
      } else {
        if (!entry.contains("l") || !entry.contains("m"))
          config_fail(where + ": sphere modes need \"l\" and \"m\"");
        k = m.sphere_index(entry.at("l").get<int>(), entry.at("m").get<int>());
      }
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      config_fail(where + ": " + e.what());
    }
    f.coeff[k] = c;
  }
  return f;
}

}  // namespace detail

inline SpectralField realize_u0(const RunConfig& cfg) {
  const InitSpec& s = cfg.u0;
  if (s.type == "zero") return SpectralField::zero(cfg.manifold);
  if (s.type == "modes") return detail::modes_field(cfg.manifold, s.modes, "u0.modes");
  auto f = random_spectral(cfg.manifold, s.seed, s.beta);  // unit L^2 norm
  double factor = s.scale;
  if (s.normalize == "h1") {
    double h1 = sobolev_norm(f, 1.0);
    if (h1 > 0.0) factor = s.scale / h1;
  }
  return cplx{factor, 0.0} * f;
}

inline GridField realize_v0(const RunConfig& cfg, const SpectralField& u0) {
  const InitSpec& s = cfg.v0;
  if (s.type == "zero") return GridField::zero(cfg.manifold);
  if (s.type == "well_prepared") {
    auto g = synthesize(u0);
    for (auto& z : g.value) z = cplx{double(cfg.params.lambda) * std::norm(z), 0.0};
    return g;
  }
  if (s.type == "modes") {
    return synthesize(detail::modes_field(cfg.manifold, s.modes, "v0.modes"));
  }
  auto g = synthesize(random_real_spectral(cfg.manifold, s.seed, s.beta));
  for (auto& z : g.value) {
    double x = z.real();  // symmetric spectrum: imaginary part is roundoff
    z = cplx{s.scale * (s.nonnegative ? x * x : x), 0.0};
  }
  return g;
}

}  // namespace sdm
