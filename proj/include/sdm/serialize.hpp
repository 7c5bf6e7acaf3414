#pragma once
//============================================================================
// JSON (de)serialization for manifolds and spectral fields.
//
// Field layout: { "manifold": {...}, "coeff": [[k, re, im], ...] }.
// nlohmann::json emits shortest-round-trip doubles, so load(dump(f))
// reproduces every coefficient bit-exactly.
//============================================================================

#include <fstream>

#include <json.hpp>  // vendored nlohmann/json

#include "sdm/field.hpp"

namespace sdm {

using json = nlohmann::json;

inline json to_json(const ManifoldSpec& s) {
  json j;
  j["kind"] = (s.kind == ManifoldKind::torus) ? "torus" : "sphere2";
  j["dim"] = s.dim;
  j["cutoff"] = s.cutoff;
  j["grid_shape"] = s.grid_shape;
  if (s.kind == ManifoldKind::torus)
    j["periods"] = s.periods;
  else
    j["radius"] = s.radius;
  return j;
}

inline ManifoldSpec manifold_from_json(const json& j) {
  std::string kind = j.at("kind").get<std::string>();
  ManifoldSpec s;
  if (kind == "torus") {
    std::vector<double> periods;
    if (j.contains("periods")) periods = j.at("periods").get<std::vector<double>>();
    s = ManifoldSpec::make_torus(j.at("dim").get<int>(), j.at("cutoff").get<int>(), periods);
  } else if (kind == "sphere2") {
    s = ManifoldSpec::make_sphere(j.at("cutoff").get<int>(),
                                  j.value("radius", 1.0));
  } else {
    throw std::invalid_argument("unknown manifold kind: " + kind);
  }
  if (j.contains("grid_shape")) s = s.with_grid(j.at("grid_shape").get<std::vector<int>>());
  return s;
}

inline json to_json(const SpectralField& f) {
  f.check();
  json j;
  j["manifold"] = to_json(f.manifold);
  json coeff = json::array();
  for (std::size_t k = 0; k < f.coeff.size(); ++k)
    coeff.push_back({k, f.coeff[k].real(), f.coeff[k].imag()});
  j["coeff"] = std::move(coeff);
  return j;
}

inline SpectralField spectral_from_json(const json& j) {
  SpectralField f = SpectralField::zero(manifold_from_json(j.at("manifold")));
  for (const auto& row : j.at("coeff")) {
    std::size_t k = row.at(0).get<std::size_t>();
    if (k >= f.coeff.size()) throw std::invalid_argument("coefficient index out of range");
    f.coeff[k] = cplx{row.at(1).get<double>(), row.at(2).get<double>()};
  }
  return f;
}

inline json to_json(const GridField& f) {
  f.check();
  json j;
  j["manifold"] = to_json(f.manifold);
  json values = json::array();
  for (const auto& z : f.value) values.push_back({z.real(), z.imag()});
  j["values"] = std::move(values);
  return j;
}

inline GridField grid_from_json(const json& j) {
  GridField f = GridField::zero(manifold_from_json(j.at("manifold")));
  const auto& values = j.at("values");
  if (values.size() != f.value.size())
    throw std::invalid_argument("grid value count does not match the manifold grid");
  for (std::size_t k = 0; k < f.value.size(); ++k)
    f.value[k] = cplx{values[k].at(0).get<double>(), values[k].at(1).get<double>()};
  return f;
}

inline void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << j.dump(2) << "\n";
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  return json::parse(in);
}

}  // namespace sdm
