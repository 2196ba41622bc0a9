/*
 * Copyright 2026 The nla Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "nla/dynamics.hpp"
#include "nla/eigen.hpp"
#include "nla/parse.hpp"

namespace nla {

using json = nlohmann::ordered_json;

inline Rational parse_rational(const std::string& text) {
  try {
    Rational q(text);
    q.canonicalize();
    return q;
  } catch (const std::invalid_argument&) {
    throw ParseError("not a rational number: " + text);
  }
}

// A polynomial system, map or vector field as stored on disk.
//   {"kind": "system" | "map" | "field", "name": ..., "variables": [...], "parameters": [...],
//    "values": {"a": "-1/4"}, "polynomials": [...], "degrees": [...]}
struct ProblemFile {
  std::string kind = "system";
  std::string name;
  std::vector<std::string> variables;
  std::vector<std::string> parameters;
  std::map<std::string, Rational> values;
  std::vector<std::string> polynomials;
  std::vector<int> degrees;

  RegistryPtr registry() const { return VarRegistry::make(variables, parameters); }

  std::vector<MPoly> parsed() const {
    auto reg = registry();
    std::vector<MPoly> out;
    for (const auto& p : polynomials) out.push_back(parse_poly(p, reg));
    if (!values.empty()) {
      std::map<size_t, MPoly> sub;
      for (const auto& [k, v] : values) {
        if (std::find(parameters.begin(), parameters.end(), k) == parameters.end())
          throw ParseError("value given for unknown parameter " + k);
        sub.emplace(reg->require(k), MPoly(reg, v));
      }
      for (auto& p : out) p = p.substitute(sub);
    }
    return out;
  }

  PolySystem system() const {
    if (kind == "field") throw ScopeError("a vector field is not a polynomial system");
    try {
      if (kind == "map") return homogenized_eigen_system(map());
      return PolySystem::make(parsed(), variables, degrees);
    } catch (const NotHomogeneous& e) {
      throw ParseError(std::string("inhomogeneous entry: ") + e.what());
    }
  }

  // The system whose resultant is meant: the equations themselves, or the map components.
  PolySystem resultant_system() const {
    if (kind == "map") {
      auto A = map();
      return PolySystem::make(A.components, A.vars, std::vector<int>(A.n(), A.s));
    }
    return system();
  }

  PolyMap map() const {
    if (kind != "map") throw ScopeError("expected a file of kind \"map\"");
    try {
      std::optional<int> d;
      if (!degrees.empty()) d = degrees.front();
      return PolyMap::make(parsed(), variables, d);
    } catch (const NotHomogeneous& e) {
      throw ParseError(std::string("inhomogeneous map: ") + e.what());
    }
  }

  VectorField field() const {
    if (kind == "map") return VectorField::of(map());
    if (kind != "field") throw ScopeError("expected a map or a vector field");
    return VectorField::make(parsed(), variables);
  }

  bool operator==(const ProblemFile&) const = default;
};

inline ProblemFile problem_from_json(const json& j) {
  ProblemFile f;
  try {
    f.kind = j.value("kind", std::string("system"));
    if (f.kind != "system" && f.kind != "map" && f.kind != "field") throw ParseError("unknown kind " + f.kind);
    f.name = j.value("name", std::string());
    f.variables = j.at("variables").get<std::vector<std::string>>();
    f.parameters = j.value("parameters", std::vector<std::string>{});
    if (j.contains("values"))
      for (const auto& [k, v] : j.at("values").items())
        f.values[k] = v.is_string() ? parse_rational(v.get<std::string>()) : parse_rational(std::to_string(v.get<long>()));
    f.polynomials = j.at("polynomials").get<std::vector<std::string>>();
    f.degrees = j.value("degrees", std::vector<int>{});
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed problem file: ") + e.what());
  }
  if (f.polynomials.empty()) throw ParseError("problem file has no polynomials");
  f.parsed();  // validates names and syntax
  return f;
}

inline json to_json(const ProblemFile& f) {
  json j;
  j["kind"] = f.kind;
  if (!f.name.empty()) j["name"] = f.name;
  j["variables"] = f.variables;
  j["parameters"] = f.parameters;
  if (!f.values.empty()) {
    json v = json::object();
    for (const auto& [k, q] : f.values) v[k] = q.get_str();
    j["values"] = v;
  }
  j["polynomials"] = f.polynomials;
  if (!f.degrees.empty()) j["degrees"] = f.degrees;
  return j;
}

inline ProblemFile load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  return problem_from_json(j);
}

inline json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

inline std::vector<std::string> component_strings(const Eigenvector& e) {
  std::vector<std::string> out;
  if (!e.exact_components) return out;
  const bool unit_den = e.denominator.is_constant() && e.denominator.constant_value() == 1;
  for (const auto& x : e.numerators)
    out.push_back(unit_den ? x.to_string() : "(" + x.to_string() + ")/(" + e.denominator.to_string() + ")");
  return out;
}

inline json to_json(const Eigenvector& e) {
  json j;
  j["kind"] = to_string(e.kind);
  j["multiplicity"] = e.multiplicity;
  j["source"] = e.source;
  auto comps = component_strings(e);
  if (!comps.empty()) j["components"] = comps;
  if (!e.direction.empty()) {
    std::vector<std::string> d;
    for (const auto& x : e.direction) d.push_back(x.to_string());
    j["direction"] = d;
    j["scale"] = e.scale.to_string();
  }
  if (!e.numeric.empty()) {
    json v = json::array();
    for (auto z : e.numeric) v.push_back(complex_json(z));
    j["numeric"] = v;
    j["real"] = e.is_real();
  }
  return j;
}

inline json to_json(const EigenReport& r) {
  json j;
  j["variables"] = r.vars;
  j["n"] = r.n;
  j["s"] = r.s;
  j["expected_count"] = r.expected_count;
  j["found_count"] = r.found_count;
  j["is_unit_map"] = r.is_unit_map;
  j["resultant"] = r.resultant.to_string();
  j["flags"] = {{"coincident", r.coincident}, {"complanar", r.complanar}, {"rank_drop", r.rank_drop}};
  json ev = json::array();
  for (const auto& e : r.eigenvectors) ev.push_back(to_json(e));
  j["eigenvectors"] = ev;
  if (r.family) {
    json f;
    f["mu"] = r.family->mu.to_string();
    f["zero_locus"] = r.family->mu.to_string() + " = 0";
    if (!r.family->generator.empty()) {
      f["parameter"] = r.family->parameter;
      std::vector<std::string> g;
      for (const auto& x : r.family->generator) g.push_back(x.to_string());
      f["unitary_generator"] = g;
    }
    j["family"] = f;
  }
  if (!r.orbits.empty()) {
    json o = json::array();
    for (const auto& orb : r.orbits) {
      auto reg = VarRegistry::make({"xi"}, {});
      o.push_back({{"ratio_polynomial", from_upoly(orb.xi_poly, reg, 0).to_string()}, {"multiplicity", orb.multiplicity}});
    }
    j["irrational_directions"] = o;
  }
  return j;
}

inline json to_json(const StabilityVerdict& v) {
  json j;
  j["verdict"] = to_string(v.verdict);
  j["evidence"] = v.evidence;
  if (v.witness) j["witness"] = *v.witness;
  if (!v.note.empty()) j["note"] = v.note;
  return j;
}

inline json to_json(const Annotation& a) {
  json j;
  j["kind"] = a.kind;
  j["label"] = a.label;
  if (!a.vector.empty()) j["vector"] = a.vector;
  if (a.multiplicity != 1) j["multiplicity"] = a.multiplicity;
  if (a.kind == "double-eigenvector") {
    j["leading_order"] = a.leading_order;
    j["leading_coefficient"] = a.leading_coefficient;
    j["one_sided"] = a.one_sided;
  }
  return j;
}

inline json to_json(const Trajectory& tr, const std::vector<double>& seed) {
  json j;
  j["seed"] = seed;
  j["backward"] = tr.backward;
  j["termination"] = to_string(tr.termination);
  j["t"] = tr.times;
  j["x"] = tr.states;
  return j;
}

inline json to_json(const Portrait& p) {
  json j;
  json tr = json::array();
  for (size_t i = 0; i < p.trajectories.size(); ++i) tr.push_back(to_json(p.trajectories[i], p.seeds[i]));
  json an = json::array();
  for (const auto& a : p.annotations) an.push_back(to_json(a));
  j["annotations"] = an;
  j["stability"] = to_json(p.verdict);
  j["complanart_zero"] = p.complanart_zero;
  j["trajectories"] = tr;
  return j;
}

}  // namespace nla
